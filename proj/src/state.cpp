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
#include "lioekf/state.hpp"

#include <Eigen/Geometry>
#include <stdexcept>

#include "lioekf/so3.hpp"

namespace lioekf {

NavState ApplyErrorCorrection(const NavState &state, const ErrorState &err) {
    if (!err.dx.allFinite()) {
        throw std::invalid_argument("ApplyErrorCorrection: non-finite error vector");
    }
    NavState out = state;
    const Eigen::Vector3d dphi = err.dx.segment<3>(kIdxAtt);
    out.position += err.dx.segment<3>(kIdxPos);
    out.velocity += err.dx.segment<3>(kIdxVel);
    if (!dphi.isZero(0.0)) {
        out.rotation = ExpSo3(dphi) * state.rotation;
    }
    out.gyro_bias += err.dx.segment<3>(kIdxBg);
    out.accel_bias += err.dx.segment<3>(kIdxBa);

    const Eigen::Matrix3d drift =
        out.rotation * out.rotation.transpose() - Eigen::Matrix3d::Identity();
    if (drift.cwiseAbs().maxCoeff() > 1e-9) {
        out.rotation = Eigen::Quaterniond(out.rotation).normalized().toRotationMatrix();
    }
    return out;
}

ErrorState ResetError(const ErrorState &err) {
    ErrorState out = err;
    out.dx.setZero();
    return out;
}

}  // namespace lioekf
