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
#include "lioekf/so3.hpp"

#include <Eigen/LU>
#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace {
constexpr double kSmallAngle = 1e-8;
}

namespace lioekf {

Eigen::Matrix3d Skew(const Eigen::Vector3d &v) {
    Eigen::Matrix3d m;
    m << 0.0, -v.z(), v.y(),  //
        v.z(), 0.0, -v.x(),   //
        -v.y(), v.x(), 0.0;
    return m;
}

Eigen::Matrix3d ExpSo3(const Eigen::Vector3d &phi) {
    if (!phi.allFinite()) {
        throw std::invalid_argument("ExpSo3: non-finite rotation vector");
    }
    const double theta2 = phi.squaredNorm();
    const double theta = std::sqrt(theta2);
    double a;  // sin(t)/t
    double b;  // (1 - cos(t))/t^2
    if (theta < kSmallAngle) {
        a = 1.0 - theta2 / 6.0;
        b = 0.5 - theta2 / 24.0;
    } else {
        a = std::sin(theta) / theta;
        b = (1.0 - std::cos(theta)) / theta2;
    }
    const Eigen::Matrix3d K = Skew(phi);
    return Eigen::Matrix3d::Identity() + a * K + b * K * K;
}

Eigen::Vector3d LogSo3(const Eigen::Matrix3d &R) {
    if (!IsRotationMatrix(R)) {
        throw std::invalid_argument("LogSo3: matrix is not a rotation (orthonormality beyond 1e-6)");
    }
    const double theta = RotationAngle(R);
    if (theta < kSmallAngle) {
        // First order: R ~ I + skew(phi).
        return 0.5 * Eigen::Vector3d(R(2, 1) - R(1, 2), R(0, 2) - R(2, 0), R(1, 0) - R(0, 1));
    }
    if (theta < M_PI - 1e-6) {
        const Eigen::Vector3d vee(R(2, 1) - R(1, 2), R(0, 2) - R(2, 0), R(1, 0) - R(0, 1));
        return (theta / (2.0 * std::sin(theta))) * vee;
    }
    // Near pi the antisymmetric part vanishes; R + I ~ 2 * axis * axis^T + O(pi - theta)
    // keeps the axis well conditioned. Pick the strongest column, fix the sign
    // from the (tiny but still informative) antisymmetric part.
    const Eigen::Matrix3d S = R + Eigen::Matrix3d::Identity();
    int col = 0;
    S.diagonal().maxCoeff(&col);
    Eigen::Vector3d axis = S.col(col).normalized();
    const Eigen::Vector3d vee(R(2, 1) - R(1, 2), R(0, 2) - R(2, 0), R(1, 0) - R(0, 1));
    if (vee.dot(axis) < 0.0) {
        axis = -axis;
    }
    return theta * axis;
}

double RotationAngle(const Eigen::Matrix3d &R) {
    const double c = std::clamp(0.5 * (R.trace() - 1.0), -1.0, 1.0);
    return std::acos(c);
}

bool IsRotationMatrix(const Eigen::Matrix3d &R, double tol) {
    if (!R.allFinite()) return false;
    const Eigen::Matrix3d E = R * R.transpose() - Eigen::Matrix3d::Identity();
    return E.cwiseAbs().maxCoeff() <= tol && R.determinant() > 0.0;
}

}  // namespace lioekf
