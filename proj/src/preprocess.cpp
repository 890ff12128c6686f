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
#include "lioekf/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <unordered_set>

#include "lioekf/so3.hpp"
#include "lioekf/voxel_map.hpp"

namespace {
constexpr double kCoverageSlack = 0.02;  // seconds
}

namespace lioekf {

namespace {

/// Pose at time t by interpolating the bracketing samples; t is clamped to
/// the sampled span (callers have already validated coverage).
TimedPose InterpolatePose(const std::vector<TimedPose> &poses, double t) {
    if (t <= poses.front().stamp) return poses.front();
    if (t >= poses.back().stamp) return poses.back();
    // Largest index with stamp <= t.
    std::size_t hi = 1;
    while (hi + 1 < poses.size() && poses[hi].stamp < t) ++hi;
    const TimedPose &a = poses[hi - 1];
    const TimedPose &b = poses[hi];
    const double span = b.stamp - a.stamp;
    const double u = span > 0.0 ? (t - a.stamp) / span : 0.0;
    TimedPose out;
    out.stamp = t;
    out.translation = (1.0 - u) * a.translation + u * b.translation;
    out.rotation = a.rotation * ExpSo3(u * LogSo3(a.rotation.transpose() * b.rotation));
    return out;
}

}  // namespace

LidarScan DeskewScan(const LidarScan &scan, const std::vector<TimedPose> &poses) {
    if (poses.empty()) {
        throw DeskewCoverageError("DeskewScan: no pose samples supplied");
    }
    double max_offset = 0.0;
    for (double o : scan.offsets) max_offset = std::max(max_offset, o);
    if (scan.stamp < poses.front().stamp - kCoverageSlack ||
        scan.stamp + max_offset > poses.back().stamp + kCoverageSlack) {
        throw DeskewCoverageError("DeskewScan: pose samples do not cover the sweep interval");
    }
    for (std::size_t i = 1; i < poses.size(); ++i) {
        if (poses[i].stamp - poses[i - 1].stamp > kCoverageSlack) {
            throw DeskewCoverageError("DeskewScan: gap between consecutive pose samples exceeds 20 ms");
        }
    }

    const TimedPose ref = InterpolatePose(poses, scan.stamp);
    const Eigen::Matrix3d ref_rot_t = ref.rotation.transpose();

    LidarScan out;
    out.stamp = scan.stamp;
    out.r_max = scan.r_max;
    out.points.resize(scan.points.size());
    out.offsets.assign(scan.points.size(), 0.0);
    for (std::size_t i = 0; i < scan.points.size(); ++i) {
        const double offset = i < scan.offsets.size() ? scan.offsets[i] : 0.0;
        if (offset == 0.0) {
            out.points[i] = scan.points[i];
            continue;
        }
        const TimedPose at = InterpolatePose(poses, scan.stamp + offset);
        // Sensor point at capture time -> world -> sensor frame at the stamp.
        const Eigen::Vector3d world = at.rotation * scan.points[i] + at.translation;
        out.points[i] = ref_rot_t * (world - ref.translation);
    }
    return out;
}

std::vector<Eigen::Vector3d> TransformToBody(const std::vector<Eigen::Vector3d> &points,
                                             const Extrinsics &ext) {
    std::vector<Eigen::Vector3d> out;
    out.reserve(points.size());
    for (const auto &p : points) out.emplace_back(ext.rotation * p + ext.translation);
    return out;
}

std::vector<Eigen::Vector3d> VoxelDownsample(const std::vector<Eigen::Vector3d> &points,
                                             double voxel_size) {
    if (!(voxel_size > 0.0)) {
        throw std::invalid_argument("VoxelDownsample: voxel size must be positive");
    }
    std::unordered_set<Voxel, VoxelHash> seen;
    seen.reserve(points.size());
    std::vector<Eigen::Vector3d> out;
    out.reserve(points.size());
    for (const auto &p : points) {
        if (seen.insert(PointToVoxel(p, voxel_size)).second) out.push_back(p);
    }
    return out;
}

DownsampledFrames Downsample(const std::vector<Eigen::Vector3d> &points, double voxel_size,
                             double alpha, double beta) {
    DownsampledFrames out;
    out.for_map = VoxelDownsample(points, alpha * voxel_size);
    out.for_registration = VoxelDownsample(out.for_map, beta * voxel_size);
    return out;
}

std::vector<Eigen::Vector3d> CropRange(const std::vector<Eigen::Vector3d> &points,
                                       double min_range, double r_max) {
    std::vector<Eigen::Vector3d> out;
    out.reserve(points.size());
    for (const auto &p : points) {
        const double r = p.norm();
        if (r > min_range && r <= r_max) out.push_back(p);
    }
    return out;
}

}  // namespace lioekf
