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

#include <utility>

#include "lioekf/state.hpp"

namespace lioekf {

/// Strapdown mechanization over one IMU interval s = cur.stamp - prev.stamp.
/// Uses bias-compensated rates/forces, the velocity rotation correction
/// (omega x a) * s^2 / 2, and the two-sample cross terms with coefficient
/// 1/12 for both the velocity and the attitude increment. Position integrates
/// the trapezoid of the old and new velocity. Biases carry forward unchanged.
/// Throws std::invalid_argument when s <= 0. Callers keep s <= 0.1 s.
NavState PropagateState(const NavState &prev, const ImuSample &imu_prev, const ImuSample &imu_cur,
                        const ImuNoiseSpec &noise);

/// Discrete error-state transition over one IMU interval, linear in dx:
///   dphi' = dphi - R * dbg * s
///   dv'   = dv + (dphi x (R * a)) * s - R * dba * s
///   dt'   = dt + (dv + dv') / 2 * s
/// with R the previous nominal attitude and a the bias-compensated specific
/// force. The error convention is truth = nominal (+) dx for every block,
/// matching ApplyErrorCorrection. The position row is trapezoidal in dv to
/// stay consistent with the mechanization's position update.
Vector15d ErrorTransition(const Vector15d &dx, const NavState &state_prev,
                          const ImuSample &imu_cur, double s_k);

/// Analytic Jacobians of the error transition. A = df/d(dx) (15x15).
/// B (15x6, columns [accel, gyro]) is the input-error sensitivity: white
/// accelerometer/gyroscope noise enters the kinematic rows exactly like the
/// corresponding bias error, so B's accel columns equal A's dba columns and
/// its gyro columns equal A's dbg columns with the bias rows zeroed.
std::pair<Matrix15d, Matrix15x6d> Jacobians(const NavState &state_prev, const ImuSample &imu_cur,
                                            double s_k);

/// One covariance prediction: Sigma' = A Sigma A^T + B Sigma_u B^T + Sigma_b,
/// where Sigma_u = diag(sigma_a^2 / s, sigma_w^2 / s) discretizes the white
/// noise densities per sample and Sigma_b adds the bias random walk (scaled
/// by s) on the two bias blocks only. Result is symmetrized.
Matrix15d PropagateCovariance(const Matrix15d &sigma, const Matrix15d &A, const Matrix15x6d &B,
                              const ImuNoiseSpec &noise, double s_k);

/// Uncertainty of the motion accumulated since the last correction: a second
/// 15x15 covariance driven by the same Jacobians/noise, zeroed at every
/// applied correction. PoseCov() extracts the 6x6 (dphi, dt) block consumed
/// by the adaptive data-association threshold.
class RelativeMotionCov {
public:
    void Propagate(const Matrix15d &A, const Matrix15x6d &B, const ImuNoiseSpec &noise,
                   double s_k);
    void Reset() { cov_.setZero(); }
    const Matrix15d &Full() const { return cov_; }
    /// 6x6 covariance over [dphi, dt], rotation block first.
    Matrix6d PoseCov() const;

private:
    Matrix15d cov_ = Matrix15d::Zero();
};

}  // namespace lioekf
