// MIT License
//
// Copyright (c) 2026 the lioekf authors
//
// Permission is hereby granted, free of charge, to any person obtaining a copy
// of this software and associated documentation files (the "Software"), to deal
// in the Software without restriction, including without limitation the rights
// to use, copy, modify, distribute, sublicense, and/or sell copies of the
// Software, and to permit persons to whom the Software is furnished to do so,
// subject to the following conditions:
//
// The above copyright notice and this permission notice shall be included in all
// copies or substantial portions of the Software.
//
// THE SOFTWARE IS PROVIDED "AS IS", WITHOUT WARRANTY OF ANY KIND, EXPRESS OR
// IMPLIED, INCLUDING BUT NOT LIMITED TO THE WARRANTIES OF MERCHANTABILITY,
// FITNESS FOR A PARTICULAR PURPOSE AND NONINFRINGEMENT. IN NO EVENT SHALL THE
// AUTHORS OR COPYRIGHT HOLDERS BE LIABLE FOR ANY CLAIM, DAMAGES OR OTHER
// LIABILITY, WHETHER IN AN ACTION OF CONTRACT, TORT OR OTHERWISE, ARISING FROM,
// OUT OF OR IN CONNECTION WITH THE SOFTWARE OR THE USE OR OTHER DEALINGS IN THE
// SOFTWARE.
#pragma once

#include <Eigen/Core>

namespace lioekf {

/// skew(v) * w == v x w for all w.
Eigen::Matrix3d Skew(const Eigen::Vector3d &v);

/// Rodrigues' formula. Falls back to a second-order Taylor expansion below
/// ||phi|| = 1e-8 to avoid the 0/0 in sin(t)/t. Throws std::invalid_argument
/// on non-finite input.
Eigen::Matrix3d ExpSo3(const Eigen::Vector3d &phi);

/// Principal-branch logarithm, ||result|| <= pi. Rotations within 1e-6 of pi
/// recover the axis from the symmetric part (R + I), where the usual
/// vee((R - R^T)/2) construction degenerates. Throws std::invalid_argument
/// when R is not orthonormal within 1e-6.
Eigen::Vector3d LogSo3(const Eigen::Matrix3d &R);

/// Rotation angle in [0, pi]: acos(clamp((trace - 1) / 2, -1, 1)).
double RotationAngle(const Eigen::Matrix3d &R);

/// True when R * R^T == I within tol per entry and det(R) > 0.
bool IsRotationMatrix(const Eigen::Matrix3d &R, double tol = 1e-6);

}  // namespace lioekf
