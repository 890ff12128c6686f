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
#include <vector>

#include "lioekf/state.hpp"

namespace lioekf {

/// One LiDAR sweep in the sensor frame. offsets[i] is point i's capture time
/// relative to stamp (the sweep start), in [0, scan period].
struct LidarScan {
    double stamp = 0.0;
    double r_max = 0.0;
    std::vector<Eigen::Vector3d> points;
    std::vector<double> offsets;  // seconds, >= 0, one per point
};

/// A pose sample on the IMU-predicted trajectory, used for deskewing.
struct TimedPose {
    double stamp = 0.0;
    Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
    Eigen::Vector3d translation = Eigen::Vector3d::Zero();
};

/// Thrown when the supplied pose samples do not cover the sweep interval
/// (more than 20 ms missing at either end or between consecutive samples).
struct DeskewCoverageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Motion compensation: re-expresses every point in the sensor pose at the
/// scan stamp. Per-point poses come from interpolating the bracketing pose
/// samples (linear translation, rotation-vector interpolation); offsets are
/// zeroed in the result. Point times within 20 ms outside the covered span
/// clamp to the nearest end segment; larger gaps throw DeskewCoverageError.
LidarScan DeskewScan(const LidarScan &scan, const std::vector<TimedPose> &poses);

/// Rigid transform of every point by the LiDAR -> body extrinsics.
std::vector<Eigen::Vector3d> TransformToBody(const std::vector<Eigen::Vector3d> &points,
                                             const Extrinsics &ext);

/// Keeps the first point inserted per voxel of the given size; output order
/// follows input order, so the result is deterministic.
std::vector<Eigen::Vector3d> VoxelDownsample(const std::vector<Eigen::Vector3d> &points,
                                             double voxel_size);

/// Two-stage downsampling: frame_for_map at alpha * v, then
/// frame_for_registration by re-downsampling frame_for_map at beta * v.
struct DownsampledFrames {
    std::vector<Eigen::Vector3d> for_map;
    std::vector<Eigen::Vector3d> for_registration;
};
DownsampledFrames Downsample(const std::vector<Eigen::Vector3d> &points, double voxel_size,
                             double alpha = 0.5, double beta = 1.5);

/// Drops points with range outside (min_range, r_max].
std::vector<Eigen::Vector3d> CropRange(const std::vector<Eigen::Vector3d> &points,
                                       double min_range, double r_max);

}  // namespace lioekf
