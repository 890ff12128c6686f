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

using Vector15d = Eigen::Matrix<double, 15, 1>;
using Matrix15d = Eigen::Matrix<double, 15, 15>;
using Matrix15x6d = Eigen::Matrix<double, 15, 6>;
using Matrix3x15d = Eigen::Matrix<double, 3, 15>;
using Matrix6d = Eigen::Matrix<double, 6, 6>;

// Block offsets of the 15-dim error vector [dt, dv, dphi, dbg, dba].
// Every 15-dim matrix in this repository uses this ordering.
inline constexpr int kIdxPos = 0;
inline constexpr int kIdxVel = 3;
inline constexpr int kIdxAtt = 6;
inline constexpr int kIdxBg = 9;
inline constexpr int kIdxBa = 12;

/// One inertial measurement: body-frame angular rate and specific force.
struct ImuSample {
    double stamp = 0.0;                              // seconds
    Eigen::Vector3d omega = Eigen::Vector3d::Zero();  // rad/s
    Eigen::Vector3d accel = Eigen::Vector3d::Zero();  // m/s^2
};

/// Continuous-time IMU stochastic model plus local gravity magnitude.
struct ImuNoiseSpec {
    double gyro_noise_density = 0.0;   // rad/s/sqrt(Hz)
    double accel_noise_density = 0.0;  // m/s^2/sqrt(Hz)
    double gyro_bias_walk = 0.0;       // rad/s^2/sqrt(Hz)
    double accel_bias_walk = 0.0;      // m/s^3/sqrt(Hz)
    double gravity = 9.81;             // m/s^2, Z-up global frame: g = (0, 0, -gravity)

    Eigen::Vector3d GravityVector() const { return {0.0, 0.0, -gravity}; }
};

/// Full navigation state. Rotation is body -> global.
struct NavState {
    double stamp = 0.0;
    Eigen::Vector3d position = Eigen::Vector3d::Zero();
    Eigen::Vector3d velocity = Eigen::Vector3d::Zero();
    Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
    Eigen::Vector3d gyro_bias = Eigen::Vector3d::Zero();
    Eigen::Vector3d accel_bias = Eigen::Vector3d::Zero();
};

/// Error state around a NavState: dx = [dt, dv, dphi, dbg, dba] with its
/// covariance. dx is identically zero right after a correction has been
/// absorbed into the nominal state.
struct ErrorState {
    Vector15d dx = Vector15d::Zero();
    Matrix15d covariance = Matrix15d::Zero();
};

/// Rigid transform taking LiDAR-frame points into the body (IMU) frame.
struct Extrinsics {
    Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
    Eigen::Vector3d translation = Eigen::Vector3d::Zero();
};

/// Box-plus of the estimated error onto the nominal state: additive for
/// position, velocity and biases, left-multiplicative for attitude
/// (R <- Exp(dphi) * R). Re-orthonormalizes the result when numerical drift
/// exceeds 1e-9. The covariance is untouched; pair with ResetError.
NavState ApplyErrorCorrection(const NavState &state, const ErrorState &err);

/// Zeroes dx after its content has been absorbed by ApplyErrorCorrection.
/// The covariance is deliberately left as-is: the first-order reset Jacobian
/// is identity.
ErrorState ResetError(const ErrorState &err);

}  // namespace lioekf
