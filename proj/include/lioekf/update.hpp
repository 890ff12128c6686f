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

#include <stdexcept>

#include "lioekf/preprocess.hpp"
#include "lioekf/state.hpp"
#include "lioekf/voxel_map.hpp"

namespace lioekf {

/// Raised when the filter covariance (or the fused information matrix) is too
/// ill-conditioned for a trustworthy correction (condition number > 1e12).
class FilterConditioningError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// Information-form sums of the point measurements: H = sum J^T Sigma_p^-1 J,
/// b = sum J^T Sigma_p^-1 e. Both are zero for an empty correspondence set.
struct UpdateAccumulator {
    Matrix15d H = Matrix15d::Zero();
    Vector15d b = Vector15d::Zero();
    Eigen::Matrix3d sigma_p = Eigen::Matrix3d::Identity();
    std::size_t count = 0;
};

/// Measurement model: body-frame point mapped through the predicted pose
/// perturbed by the current error estimate,
///   h = Exp(dphi) * R * p + t + dt.
/// With a zero error this is exactly R * p + t (same code path, bitwise).
Eigen::Vector3d ObservePoint(const Eigen::Vector3d &p_body, const Eigen::Matrix3d &rotation,
                             const Eigen::Vector3d &translation, const Vector15d &dx);

/// e = ObservePoint(p_body, ...) - q_map.
Eigen::Vector3d Innovation(const Eigen::Vector3d &p_body, const Eigen::Vector3d &q_map,
                           const Eigen::Matrix3d &rotation, const Eigen::Vector3d &translation,
                           const Vector15d &dx);

/// d(innovation)/d(dx) at dx = 0: [ I  0  -[R p]_x  0  0 ].
/// Only the position and attitude blocks are non-zero.
Matrix3x15d PointJacobian(const Eigen::Vector3d &p_body, const Eigen::Matrix3d &rotation);

/// Streams the correspondence pairs into the information form without ever
/// materializing the stacked 3n x 15 Jacobian. `corrs.source` holds the scan
/// points already mapped into the world frame by the linearization pose whose
/// translation component is `translation`; each pair contributes with
/// J = [I 0 -[s - translation]_x 0 0] and e = s - q. Deterministic under any
/// worker count. Throws std::invalid_argument when sigma_p is singular.
UpdateAccumulator Accumulate(const CorrespondenceSet &corrs, const Eigen::Vector3d &translation,
                             const Eigen::Matrix3d &sigma_p);

/// Fuses the accumulated measurements into the error state without forming
/// the Kalman gain: with S = H + Sigma^-1,
///   dx'    = dx - S^-1 (b + Sigma^-1 dx)
///   Sigma' = (I - S^-1 H) Sigma, symmetrized.
/// The prior mean of dx is zero (the state right after ResetError), so for
/// dx = 0 this is the one-shot correction -S^-1 b; for dx != 0 it is one
/// Gauss-Newton step about dx, which iterated correction loops rely on.
/// Solved with a symmetric factorization (no explicit inverse of S); adds a
/// trace-scaled jitter once if the factorization degenerates and throws
/// FilterConditioningError when cond(Sigma) or cond(S) exceeds 1e12.
ErrorState KalmanUpdate(const ErrorState &err, const UpdateAccumulator &acc);

/// Outcome of one scan correction.
struct CorrectionReport {
    bool applied = false;            // false: degenerate scan, prediction kept
    std::size_t num_correspondences = 0;  // association count of the last pass
    int iterations_run = 0;
};

/// Full correction for one preprocessed scan: associate against the map,
/// accumulate, fuse, fold the error into the nominal state, reset the error,
/// then merge the (corrected-pose-transformed) map frame and prune around the
/// new position. Runs exactly `iterations` associate/fuse passes about the
/// running error estimate before the state is touched; iterations = 1 is the
/// plain single-shot correction. Scans matching fewer than
/// `min_correspondences` map points skip the state correction but still merge
/// the map at the predicted pose.
CorrectionReport CorrectScan(NavState &state, ErrorState &err, const DownsampledFrames &frames,
                             VoxelMap &map, double tau, const Eigen::Matrix3d &sigma_p,
                             int iterations = 1, std::size_t min_correspondences = 10);

}  // namespace lioekf
