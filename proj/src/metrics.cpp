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
#include "lioekf/metrics.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "lioekf/so3.hpp"

namespace {
constexpr double kAssociationWindow = 0.01;  // seconds
}

namespace lioekf {

namespace {

/// Index pairs (estimate, ground truth) matched by nearest stamp within the
/// association window. `unmatched` counts estimate poses left unpaired.
std::vector<std::pair<std::size_t, std::size_t>> AssociateByStamp(
    const std::vector<TimedPose> &est, const std::vector<TimedPose> &gt, std::size_t *unmatched) {
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    if (unmatched != nullptr) *unmatched = 0;
    std::size_t j = 0;
    for (std::size_t i = 0; i < est.size(); ++i) {
        while (j + 1 < gt.size() &&
               std::abs(gt[j + 1].stamp - est[i].stamp) <= std::abs(gt[j].stamp - est[i].stamp)) {
            ++j;
        }
        if (!gt.empty() && std::abs(gt[j].stamp - est[i].stamp) <= kAssociationWindow) {
            pairs.emplace_back(i, j);
        } else if (unmatched != nullptr) {
            ++(*unmatched);
        }
    }
    return pairs;
}

}  // namespace

AteResult Ate(const std::vector<TimedPose> &estimate,
              const std::vector<TimedPose> &ground_truth) {
    AteResult result;
    const auto pairs = AssociateByStamp(estimate, ground_truth, &result.unmatched);
    result.pairs = pairs.size();
    if (pairs.size() < 3) {
        throw EvaluationError("Ate: need at least 3 temporally associated pose pairs, have " +
                              std::to_string(pairs.size()));
    }

    Eigen::Matrix3Xd src(3, pairs.size());
    Eigen::Matrix3Xd dst(3, pairs.size());
    for (std::size_t k = 0; k < pairs.size(); ++k) {
        src.col(k) = estimate[pairs[k].first].translation;
        dst.col(k) = ground_truth[pairs[k].second].translation;
    }
    const Eigen::Matrix4d T = Eigen::umeyama(src, dst, /*with_scaling=*/false);
    const Eigen::Matrix3d R_align = T.topLeftCorner<3, 3>();
    const Eigen::Vector3d t_align = T.topRightCorner<3, 1>();

    double trans_sq = 0.0;
    double rot_sq = 0.0;
    for (std::size_t k = 0; k < pairs.size(); ++k) {
        const TimedPose &e = estimate[pairs[k].first];
        const TimedPose &g = ground_truth[pairs[k].second];
        trans_sq += (R_align * e.translation + t_align - g.translation).squaredNorm();
        const double angle = RotationAngle((R_align * e.rotation).transpose() * g.rotation);
        rot_sq += angle * angle;
    }
    result.translation_rms = std::sqrt(trans_sq / pairs.size());
    result.rotation_rms_deg = std::sqrt(rot_sq / pairs.size()) * 180.0 / M_PI;
    return result;
}

KittiResult KittiRelativeError(const std::vector<TimedPose> &estimate,
                               const std::vector<TimedPose> &ground_truth) {
    KittiResult result;
    const auto pairs = AssociateByStamp(estimate, ground_truth, nullptr);
    if (pairs.size() < 2) {
        throw EvaluationError("KittiRelativeError: fewer than 2 associated pose pairs");
    }

    // Cumulative ground-truth path length over the associated subsequence.
    std::vector<double> path(pairs.size(), 0.0);
    for (std::size_t k = 1; k < pairs.size(); ++k) {
        path[k] = path[k - 1] + (ground_truth[pairs[k].second].translation -
                                 ground_truth[pairs[k - 1].second].translation)
                                    .norm();
    }
    const double total = path.back();
    result.segment_lengths = total < 200.0
                                 ? std::vector<double>{10, 20, 30, 40, 50, 60, 70, 80}
                                 : std::vector<double>{100, 200, 300, 400, 500, 600, 700, 800};

    double trans_sum = 0.0;
    double rot_sum = 0.0;
    std::size_t count = 0;
    for (const double len : result.segment_lengths) {
        for (std::size_t i = 0; i < pairs.size(); ++i) {
            // First index whose accumulated path is at least len past i.
            const auto it = std::lower_bound(path.begin() + static_cast<long>(i), path.end(),
                                             path[i] + len);
            if (it == path.end()) break;
            const auto j = static_cast<std::size_t>(it - path.begin());
            const TimedPose &ei = estimate[pairs[i].first];
            const TimedPose &ej = estimate[pairs[j].first];
            const TimedPose &gi = ground_truth[pairs[i].second];
            const TimedPose &gj = ground_truth[pairs[j].second];
            // Relative motions est_i^-1 est_j and gt_i^-1 gt_j.
            const Eigen::Matrix3d Re = ei.rotation.transpose() * ej.rotation;
            const Eigen::Vector3d te = ei.rotation.transpose() * (ej.translation - ei.translation);
            const Eigen::Matrix3d Rg = gi.rotation.transpose() * gj.rotation;
            const Eigen::Vector3d tg = gi.rotation.transpose() * (gj.translation - gi.translation);
            const Eigen::Matrix3d R_err = Rg.transpose() * Re;
            const Eigen::Vector3d t_err = Rg.transpose() * (te - tg);
            const double seg = path[j] - path[i];
            trans_sum += t_err.norm() / seg * 100.0;
            rot_sum += RotationAngle(R_err) * 180.0 / M_PI / seg;
            ++count;
        }
    }
    if (count == 0) {
        throw EvaluationError(
            "KittiRelativeError: ground-truth path (" + std::to_string(total) +
            " m) is shorter than the smallest evaluation segment");
    }
    result.translation_percent = trans_sum / static_cast<double>(count);
    result.rotation_deg_per_m = rot_sum / static_cast<double>(count);
    result.segments = count;
    return result;
}

}  // namespace lioekf
