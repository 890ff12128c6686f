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
#include <cstddef>

#include "lioekf/state.hpp"

namespace lioekf {

/// How sigma2_p2p turns the mapped sigma-point values into a scalar spread.
/// The displacement bound is sign-symmetric, so the symmetric sigma points
/// map pairwise to equal values and the centered variance with kappa = 3 - n
/// collapses (the center weight is -1); the second moment about zero is the
/// robust default and matches Monte-Carlo closely.
enum class P2pVarianceMode {
    kSecondMoment,  // sum_i w_i * y_i^2
    kCentered,      // sum_i w_i * (y_i - mean)^2
};

/// Everything the per-scan threshold depends on. rel_cov is the 6x6
/// covariance of the motion error accumulated since the last correction,
/// ordered [dphi, dt] (RelativeMotionCov::PoseCov).
struct ThresholdInputs {
    Matrix6d rel_cov = Matrix6d::Zero();
    double r_max = 30.0;        // meters
    double v = 0.5;             // voxel size, meters
    int m = 20;                 // max points per voxel
    double sigma2_range = 0.0;  // m^2
    double tau_min = 0.05;      // meters, floor for the clamp
    P2pVarianceMode variance_mode = P2pVarianceMode::kSecondMoment;
};

/// Upper bound on how far a point within range r_max can move under the
/// rigid motion (R, t): 2 * r_max * sin(angle(R) / 2) + |t|.
double P2pBound(const Eigen::Matrix3d &R, const Eigen::Vector3d &t, double r_max);

/// Spread of the point-displacement bound under the relative-pose error:
/// a 13-point symmetric unscented transform (n = 6, kappa = 3 - n) over
/// (dphi, dt), each sigma point mapped through
/// (dphi, dt) -> P2pBound(Exp(dphi), dt, r_max).
/// Eigenvalues below -1e-10 * trace(rel_cov) raise std::invalid_argument;
/// small negative ones are clamped to zero before the matrix square root.
double Sigma2P2p(const Matrix6d &rel_cov, double r_max,
                 P2pVarianceMode mode = P2pVarianceMode::kSecondMoment);

/// Map discretization variance v^2 / m. Throws std::invalid_argument for
/// m < 1.
double Sigma2Map(double v, int m);

/// Three-sigma association gate
///   tau = max(3 * sqrt(sigma2_p2p + sigma2_map + sigma2_range), tau_min).
double ComputeTau(const ThresholdInputs &inputs);

/// History-based adaptive threshold used as an ablation baseline: keeps the
/// running RMS of the per-scan model deviation bounds (ignoring deviations
/// below min_motion) and returns it as the gate, falling back to
/// initial_threshold until the first sample arrives.
class KissIcpThreshold {
public:
    explicit KissIcpThreshold(double r_max, double initial_threshold = 2.0,
                              double min_motion = 0.1);

    /// Records the pose deviation between prediction and final estimate.
    void UpdateModelDeviation(const Eigen::Matrix3d &R_dev, const Eigen::Vector3d &t_dev);

    double ComputeThreshold() const;

private:
    double r_max_;
    double initial_threshold_;
    double min_motion_;
    double sse_ = 0.0;
    std::size_t num_samples_ = 0;
};

}  // namespace lioekf
