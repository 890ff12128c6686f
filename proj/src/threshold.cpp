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
#include "lioekf/threshold.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "lioekf/so3.hpp"

namespace lioekf {

double P2pBound(const Eigen::Matrix3d &R, const Eigen::Vector3d &t, double r_max) {
    if (!(r_max > 0.0)) {
        throw std::invalid_argument("P2pBound: r_max must be positive");
    }
    return 2.0 * r_max * std::sin(0.5 * RotationAngle(R)) + t.norm();
}

double Sigma2P2p(const Matrix6d &rel_cov, double r_max, P2pVarianceMode mode) {
    constexpr int n = 6;
    constexpr double kappa = 3.0 - n;
    const Matrix6d sym = 0.5 * (rel_cov + rel_cov.transpose());

    Eigen::SelfAdjointEigenSolver<Matrix6d> es(sym);
    const double floor = -1e-10 * std::max(sym.trace(), 0.0);
    if (es.eigenvalues().minCoeff() < floor) {
        throw std::invalid_argument("Sigma2P2p: rel_cov is not positive semi-definite");
    }
    const Eigen::Matrix<double, 6, 1> lambda = es.eigenvalues().cwiseMax(0.0);

    // Columns of the symmetric square root of (n + kappa) * rel_cov.
    const Matrix6d L =
        es.eigenvectors() * ((n + kappa) * lambda).cwiseSqrt().asDiagonal();

    const auto map_bound = [&](const Eigen::Matrix<double, 6, 1> &x) {
        return P2pBound(ExpSo3(x.head<3>()), x.tail<3>(), r_max);
    };

    // 2n + 1 symmetric sigma points: center plus +/- each column of L.
    std::array<double, 2 * n + 1> y{};
    std::array<double, 2 * n + 1> w{};
    y[0] = map_bound(Eigen::Matrix<double, 6, 1>::Zero());
    w[0] = kappa / (n + kappa);
    for (int i = 0; i < n; ++i) {
        y[1 + 2 * i] = map_bound(L.col(i));
        y[2 + 2 * i] = map_bound(-L.col(i));
        w[1 + 2 * i] = 0.5 / (n + kappa);
        w[2 + 2 * i] = 0.5 / (n + kappa);
    }

    double out = 0.0;
    if (mode == P2pVarianceMode::kSecondMoment) {
        for (std::size_t i = 0; i < y.size(); ++i) out += w[i] * y[i] * y[i];
    } else {
        double mean = 0.0;
        for (std::size_t i = 0; i < y.size(); ++i) mean += w[i] * y[i];
        for (std::size_t i = 0; i < y.size(); ++i) out += w[i] * (y[i] - mean) * (y[i] - mean);
    }
    return std::max(out, 0.0);
}

double Sigma2Map(double v, int m) {
    if (m < 1) {
        throw std::invalid_argument("Sigma2Map: max points per voxel must be at least 1");
    }
    if (v < 0.0) {
        throw std::invalid_argument("Sigma2Map: voxel size must be non-negative");
    }
    return v * v / static_cast<double>(m);
}

double ComputeTau(const ThresholdInputs &inputs) {
    const double s2 = Sigma2P2p(inputs.rel_cov, inputs.r_max, inputs.variance_mode) +
                      Sigma2Map(inputs.v, inputs.m) + inputs.sigma2_range;
    return std::max(3.0 * std::sqrt(s2), inputs.tau_min);
}

KissIcpThreshold::KissIcpThreshold(double r_max, double initial_threshold, double min_motion)
    : r_max_(r_max), initial_threshold_(initial_threshold), min_motion_(min_motion) {
    if (!(r_max > 0.0) || !(initial_threshold > 0.0)) {
        throw std::invalid_argument("KissIcpThreshold: r_max and initial threshold must be positive");
    }
}

void KissIcpThreshold::UpdateModelDeviation(const Eigen::Matrix3d &R_dev,
                                            const Eigen::Vector3d &t_dev) {
    const double model_error = P2pBound(R_dev, t_dev, r_max_);
    if (model_error > min_motion_) {
        sse_ += model_error * model_error;
        ++num_samples_;
    }
}

double KissIcpThreshold::ComputeThreshold() const {
    if (num_samples_ == 0) return initial_threshold_;
    return std::sqrt(sse_ / static_cast<double>(num_samples_));
}

}  // namespace lioekf
