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
#include "lioekf/update.hpp"

#include <Eigen/Dense>
#include <vector>

#include "lioekf/parallel.hpp"
#include "lioekf/so3.hpp"

namespace {
constexpr double kMaxCondition = 1e12;
}

namespace lioekf {

Eigen::Vector3d ObservePoint(const Eigen::Vector3d &p_body, const Eigen::Matrix3d &rotation,
                             const Eigen::Vector3d &translation, const Vector15d &dx) {
    Eigen::Vector3d out = rotation * p_body + translation;
    const Eigen::Vector3d dphi = dx.segment<3>(kIdxAtt);
    // Keep the zero-error fast path bit-identical to a plain pose transform.
    if (dphi.x() != 0.0 || dphi.y() != 0.0 || dphi.z() != 0.0) {
        out = ExpSo3(dphi) * (rotation * p_body);
        out += translation;
    }
    out += dx.segment<3>(kIdxPos);
    return out;
}

Eigen::Vector3d Innovation(const Eigen::Vector3d &p_body, const Eigen::Vector3d &q_map,
                           const Eigen::Matrix3d &rotation, const Eigen::Vector3d &translation,
                           const Vector15d &dx) {
    return ObservePoint(p_body, rotation, translation, dx) - q_map;
}

Matrix3x15d PointJacobian(const Eigen::Vector3d &p_body, const Eigen::Matrix3d &rotation) {
    Matrix3x15d J = Matrix3x15d::Zero();
    J.block<3, 3>(0, kIdxPos) = Eigen::Matrix3d::Identity();
    J.block<3, 3>(0, kIdxAtt) = -Skew(rotation * p_body);
    return J;
}

UpdateAccumulator Accumulate(const CorrespondenceSet &corrs, const Eigen::Vector3d &translation,
                             const Eigen::Matrix3d &sigma_p) {
    UpdateAccumulator acc;
    acc.sigma_p = sigma_p;
    acc.count = corrs.size();
    if (corrs.empty()) return acc;

    const auto lu = sigma_p.fullPivLu();
    if (!lu.isInvertible()) {
        throw std::invalid_argument("Accumulate: singular per-point observation covariance");
    }
    const Eigen::Matrix3d W = lu.inverse();

    // Per-chunk partial sums, combined in fixed chunk order so the result is
    // independent of the worker count and of scheduling.
    const std::size_t n = corrs.size();
    const std::size_t chunks = NumChunks(n);
    std::vector<Matrix15d> H_part(chunks, Matrix15d::Zero());
    std::vector<Vector15d> b_part(chunks, Vector15d::Zero());
    ParallelChunks(n, [&](std::size_t chunk, std::size_t begin, std::size_t end) {
        Eigen::Matrix3d h_pp = Eigen::Matrix3d::Zero();  // (pos,pos)
        Eigen::Matrix3d h_pa = Eigen::Matrix3d::Zero();  // (pos,att)
        Eigen::Matrix3d h_aa = Eigen::Matrix3d::Zero();  // (att,att)
        Eigen::Vector3d b_p = Eigen::Vector3d::Zero();
        Eigen::Vector3d b_a = Eigen::Vector3d::Zero();
        for (std::size_t i = begin; i < end; ++i) {
            // J = [I 0 C 0 0] with C = -[r]_x; only the two non-zero blocks
            // of J^T W J and J^T W e are formed.
            const Eigen::Matrix3d C = -Skew(corrs.source[i] - translation);
            const Eigen::Vector3d e = corrs.source[i] - corrs.target[i];
            const Eigen::Matrix3d WC = W * C;
            h_pp += W;
            h_pa += WC;
            h_aa += C.transpose() * WC;
            const Eigen::Vector3d We = W * e;
            b_p += We;
            b_a += C.transpose() * We;
        }
        H_part[chunk].block<3, 3>(kIdxPos, kIdxPos) = h_pp;
        H_part[chunk].block<3, 3>(kIdxPos, kIdxAtt) = h_pa;
        H_part[chunk].block<3, 3>(kIdxAtt, kIdxPos) = h_pa.transpose();
        H_part[chunk].block<3, 3>(kIdxAtt, kIdxAtt) = h_aa;
        b_part[chunk].segment<3>(kIdxPos) = b_p;
        b_part[chunk].segment<3>(kIdxAtt) = b_a;
    });
    for (std::size_t c = 0; c < chunks; ++c) {
        acc.H += H_part[c];
        acc.b += b_part[c];
    }
    return acc;
}

namespace {

/// Condition-checked symmetric inverse via eigendecomposition. Applies one
/// trace-scaled jitter when the matrix is not positive definite.
Matrix15d GuardedInverse(const Matrix15d &m, const char *what) {
    Matrix15d sym = 0.5 * (m + m.transpose());
    Eigen::SelfAdjointEigenSolver<Matrix15d> es(sym);
    if (es.eigenvalues().minCoeff() <= 0.0) {
        sym += (1e-12 * sym.trace()) * Matrix15d::Identity();
        es.compute(sym);
    }
    const double lo = es.eigenvalues().minCoeff();
    const double hi = es.eigenvalues().maxCoeff();
    if (!(lo > 0.0) || hi / lo > kMaxCondition) {
        throw FilterConditioningError(what);
    }
    return es.eigenvectors() * es.eigenvalues().cwiseInverse().asDiagonal() *
           es.eigenvectors().transpose();
}

}  // namespace

ErrorState KalmanUpdate(const ErrorState &err, const UpdateAccumulator &acc) {
    if (acc.count == 0) return err;
    const Matrix15d sigma_inv =
        GuardedInverse(err.covariance, "KalmanUpdate: prior covariance is ill-conditioned");

    Matrix15d S = acc.H + sigma_inv;
    S = 0.5 * (S + S.transpose());
    Eigen::LDLT<Matrix15d> ldlt(S);
    if (ldlt.info() != Eigen::Success || !ldlt.isPositive()) {
        S += (1e-12 * S.trace()) * Matrix15d::Identity();
        ldlt.compute(S);
        if (ldlt.info() != Eigen::Success) {
            throw FilterConditioningError("KalmanUpdate: fused information matrix is singular");
        }
    }
    {
        Eigen::SelfAdjointEigenSolver<Matrix15d> es(S);
        const double lo = es.eigenvalues().minCoeff();
        const double hi = es.eigenvalues().maxCoeff();
        if (!(lo > 0.0) || hi / lo > kMaxCondition) {
            throw FilterConditioningError(
                "KalmanUpdate: fused information matrix is ill-conditioned");
        }
    }

    ErrorState out;
    out.dx = err.dx - ldlt.solve((acc.b + sigma_inv * err.dx).eval());
    const Matrix15d cov = (Matrix15d::Identity() - ldlt.solve(acc.H)) * err.covariance;
    out.covariance = 0.5 * (cov + cov.transpose());
    return out;
}

CorrectionReport CorrectScan(NavState &state, ErrorState &err, const DownsampledFrames &frames,
                             VoxelMap &map, double tau, const Eigen::Matrix3d &sigma_p,
                             int iterations, std::size_t min_correspondences) {
    if (iterations < 1) {
        throw std::invalid_argument("CorrectScan: iterations must be at least 1");
    }
    CorrectionReport report;

    const Matrix15d prior_cov = err.covariance;
    ErrorState running = err;
    bool degenerate = false;
    std::vector<Eigen::Vector3d> queries(frames.for_registration.size());
    for (int it = 0; it < iterations; ++it) {
        ParallelChunks(queries.size(), [&](std::size_t, std::size_t begin, std::size_t end) {
            for (std::size_t i = begin; i < end; ++i) {
                queries[i] = ObservePoint(frames.for_registration[i], state.rotation,
                                          state.position, running.dx);
            }
        });
        const CorrespondenceSet corrs = FindCorrespondences(queries, map, tau);
        report.num_correspondences = corrs.size();
        if (corrs.size() < min_correspondences) {
            degenerate = (it == 0);
            break;
        }
        const Eigen::Vector3d lin_translation =
            state.position + running.dx.segment<3>(kIdxPos);
        const UpdateAccumulator acc = Accumulate(corrs, lin_translation, sigma_p);
        running.covariance = prior_cov;  // iterate about the fixed prior
        running = KalmanUpdate(running, acc);
        report.iterations_run = it + 1;
    }

    if (degenerate) {
        // Keep the prediction, but still grow the map so the scene does not
        // starve future associations.
        std::vector<Eigen::Vector3d> world(frames.for_map.size());
        for (std::size_t i = 0; i < frames.for_map.size(); ++i) {
            world[i] = state.rotation * frames.for_map[i] + state.position;
        }
        map.Merge(world, state.position);
        report.applied = false;
        return report;
    }

    err = running;
    state = ApplyErrorCorrection(state, err);
    err = ResetError(err);

    std::vector<Eigen::Vector3d> world(frames.for_map.size());
    for (std::size_t i = 0; i < frames.for_map.size(); ++i) {
        world[i] = state.rotation * frames.for_map[i] + state.position;
    }
    map.Merge(world, state.position);
    report.applied = true;
    return report;
}

}  // namespace lioekf
