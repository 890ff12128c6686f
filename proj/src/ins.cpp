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
#include "lioekf/ins.hpp"

#include <Eigen/Geometry>
#include <stdexcept>

#include "lioekf/so3.hpp"

namespace lioekf {

NavState PropagateState(const NavState &prev, const ImuSample &imu_prev, const ImuSample &imu_cur,
                        const ImuNoiseSpec &noise) {
    const double s = imu_cur.stamp - imu_prev.stamp;
    if (!(s > 0.0)) {
        throw std::invalid_argument("PropagateState: non-positive IMU interval");
    }
    const double s2 = s * s;
    const Eigen::Vector3d w_prev = imu_prev.omega - prev.gyro_bias;
    const Eigen::Vector3d w_cur = imu_cur.omega - prev.gyro_bias;
    const Eigen::Vector3d a_prev = imu_prev.accel - prev.accel_bias;
    const Eigen::Vector3d a_cur = imu_cur.accel - prev.accel_bias;

    NavState out = prev;
    out.stamp = imu_cur.stamp;

    // Body-frame velocity increment with the rotation correction and the
    // two-sample cross terms.
    const Eigen::Vector3d dv_body = a_cur * s + 0.5 * w_cur.cross(a_cur) * s2 +
                                    (w_prev.cross(a_cur) + w_cur.cross(a_prev)) * (s2 / 12.0);
    out.velocity = prev.velocity + noise.GravityVector() * s + prev.rotation * dv_body;
    out.position = prev.position + 0.5 * (prev.velocity + out.velocity) * s;

    const Eigen::Vector3d dtheta = w_cur * s + w_prev.cross(w_cur) * (s2 / 12.0);
    out.rotation = prev.rotation * ExpSo3(dtheta);
    return out;
}

namespace {

/// Shared block assembly for ErrorTransition/Jacobians: the three kinematic
/// coupling blocks evaluated at the previous nominal state.
struct ErrorModelBlocks {
    Eigen::Matrix3d vel_att;  // d(dv')/d(dphi) / s   = -skew(R a)
    Eigen::Matrix3d vel_ba;   // d(dv')/d(dba)  / s   = -R
    Eigen::Matrix3d att_bg;   // d(dphi')/d(dbg) / s  = -R
};

ErrorModelBlocks MakeBlocks(const NavState &state_prev, const ImuSample &imu_cur) {
    const Eigen::Vector3d a = imu_cur.accel - state_prev.accel_bias;
    ErrorModelBlocks blocks;
    blocks.vel_att = -Skew(state_prev.rotation * a);
    blocks.vel_ba = -state_prev.rotation;
    blocks.att_bg = -state_prev.rotation;
    return blocks;
}

}  // namespace

Vector15d ErrorTransition(const Vector15d &dx, const NavState &state_prev,
                          const ImuSample &imu_cur, double s_k) {
    const ErrorModelBlocks blocks = MakeBlocks(state_prev, imu_cur);
    const Eigen::Vector3d dt = dx.segment<3>(kIdxPos);
    const Eigen::Vector3d dv = dx.segment<3>(kIdxVel);
    const Eigen::Vector3d dphi = dx.segment<3>(kIdxAtt);
    const Eigen::Vector3d dbg = dx.segment<3>(kIdxBg);
    const Eigen::Vector3d dba = dx.segment<3>(kIdxBa);

    const Eigen::Vector3d dv_new = dv + (blocks.vel_att * dphi + blocks.vel_ba * dba) * s_k;
    Vector15d out;
    out.segment<3>(kIdxPos) = dt + 0.5 * (dv + dv_new) * s_k;
    out.segment<3>(kIdxVel) = dv_new;
    out.segment<3>(kIdxAtt) = dphi + blocks.att_bg * dbg * s_k;
    out.segment<3>(kIdxBg) = dbg;
    out.segment<3>(kIdxBa) = dba;
    return out;
}

std::pair<Matrix15d, Matrix15x6d> Jacobians(const NavState &state_prev, const ImuSample &imu_cur,
                                            double s_k) {
    const ErrorModelBlocks blocks = MakeBlocks(state_prev, imu_cur);
    const double half_s2 = 0.5 * s_k * s_k;

    Matrix15d A = Matrix15d::Identity();
    A.block<3, 3>(kIdxPos, kIdxVel) = s_k * Eigen::Matrix3d::Identity();
    A.block<3, 3>(kIdxPos, kIdxAtt) = half_s2 * blocks.vel_att;
    A.block<3, 3>(kIdxPos, kIdxBa) = half_s2 * blocks.vel_ba;
    A.block<3, 3>(kIdxVel, kIdxAtt) = s_k * blocks.vel_att;
    A.block<3, 3>(kIdxVel, kIdxBa) = s_k * blocks.vel_ba;
    A.block<3, 3>(kIdxAtt, kIdxBg) = s_k * blocks.att_bg;

    // Noise input: accel columns mirror the dba coupling, gyro columns the
    // dbg coupling; white noise does not feed the bias rows (the random walk
    // enters separately through Sigma_b).
    Matrix15x6d B = Matrix15x6d::Zero();
    B.block<3, 3>(kIdxPos, 0) = half_s2 * blocks.vel_ba;
    B.block<3, 3>(kIdxVel, 0) = s_k * blocks.vel_ba;
    B.block<3, 3>(kIdxAtt, 3) = s_k * blocks.att_bg;
    return {A, B};
}

Matrix15d PropagateCovariance(const Matrix15d &sigma, const Matrix15d &A, const Matrix15x6d &B,
                              const ImuNoiseSpec &noise, double s_k) {
    if (!(s_k > 0.0)) {
        throw std::invalid_argument("PropagateCovariance: non-positive interval");
    }
    Eigen::Matrix<double, 6, 6> sigma_u = Eigen::Matrix<double, 6, 6>::Zero();
    const double var_a = noise.accel_noise_density * noise.accel_noise_density / s_k;
    const double var_w = noise.gyro_noise_density * noise.gyro_noise_density / s_k;
    sigma_u.diagonal() << var_a, var_a, var_a, var_w, var_w, var_w;

    Matrix15d sigma_b = Matrix15d::Zero();
    const double var_bg = noise.gyro_bias_walk * noise.gyro_bias_walk * s_k;
    const double var_ba = noise.accel_bias_walk * noise.accel_bias_walk * s_k;
    sigma_b.block<3, 3>(kIdxBg, kIdxBg) = var_bg * Eigen::Matrix3d::Identity();
    sigma_b.block<3, 3>(kIdxBa, kIdxBa) = var_ba * Eigen::Matrix3d::Identity();

    const Matrix15d out = A * sigma * A.transpose() + B * sigma_u * B.transpose() + sigma_b;
    return 0.5 * (out + out.transpose());
}

void RelativeMotionCov::Propagate(const Matrix15d &A, const Matrix15x6d &B,
                                  const ImuNoiseSpec &noise, double s_k) {
    cov_ = PropagateCovariance(cov_, A, B, noise, s_k);
}

Matrix6d RelativeMotionCov::PoseCov() const {
    Matrix6d out;
    out.block<3, 3>(0, 0) = cov_.block<3, 3>(kIdxAtt, kIdxAtt);
    out.block<3, 3>(0, 3) = cov_.block<3, 3>(kIdxAtt, kIdxPos);
    out.block<3, 3>(3, 0) = cov_.block<3, 3>(kIdxPos, kIdxAtt);
    out.block<3, 3>(3, 3) = cov_.block<3, 3>(kIdxPos, kIdxPos);
    return out;
}

}  // namespace lioekf
