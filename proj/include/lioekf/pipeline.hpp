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

#include <deque>
#include <memory>
#include <string>
#include <vector>

#include "lioekf/dataset_io.hpp"
#include "lioekf/ins.hpp"
#include "lioekf/preprocess.hpp"
#include "lioekf/state.hpp"
#include "lioekf/threshold.hpp"
#include "lioekf/update.hpp"
#include "lioekf/voxel_map.hpp"

namespace lioekf {

/// Per-run counters and timings of the scan-processing path.
struct PipelineStats {
    std::vector<double> correction_ms;  // one entry per processed scan
    std::vector<double> taus;           // gate actually used per scan
    std::size_t scans_processed = 0;
    std::size_t degenerate_scans = 0;
    std::size_t tau_warnings = 0;  // scans whose gate exceeded the voxel size

    double MeanCorrectionMs() const;
    double MedianCorrectionMs() const;
    double P99CorrectionMs() const;
};

/// Tightly-coupled LiDAR-inertial odometry. Feed IMU samples and scans in
/// stamp order; scan corrections run as soon as the IMU stream covers the
/// sweep. The first second of IMU data must be stationary: it initializes
/// attitude (accelerometer leveling), the gyroscope bias, and the
/// gravity-aligned accelerometer bias component.
class Odometry {
public:
    Odometry(const Config &config, const Extrinsics &extrinsics);

    void AddImu(const ImuSample &sample);
    /// Scans are buffered until AddImu delivers coverage past the sweep end.
    void AddScan(const LidarScan &scan);

    bool Initialized() const { return initialized_; }
    const NavState &State() const { return state_; }
    const ErrorState &Error() const { return err_; }
    const VoxelMap &Map() const { return *map_; }
    /// Corrected pose per processed scan, at the scan stamp.
    const std::vector<TimedPose> &ScanPoses() const { return scan_poses_; }
    const PipelineStats &Stats() const { return stats_; }

private:
    enum class ThresholdMode { kAdaptive, kFixed, kKissIcp };

    void InitializeFromStaticWindow();
    void TryProcessScans();
    void ProcessScan(const LidarScan &scan);
    /// Mechanization + covariance propagation of one interval ending at
    /// `imu_cur`; updates state_, err_, rel_cov_ and last_imu_.
    void PropagateTo(const ImuSample &imu_cur);
    double CurrentTau();

    Config config_;
    Extrinsics extrinsics_;
    ThresholdMode mode_ = ThresholdMode::kAdaptive;
    double fixed_tau_ = 0.0;
    P2pVarianceMode variance_mode_ = P2pVarianceMode::kSecondMoment;

    bool initialized_ = false;
    std::vector<ImuSample> init_window_;
    NavState state_;
    ErrorState err_;
    RelativeMotionCov rel_cov_;
    std::unique_ptr<VoxelMap> map_;
    KissIcpThreshold kiss_;

    ImuSample last_imu_;             // newest sample absorbed into the filter
    std::deque<ImuSample> imu_buffer_;  // samples newer than state_.stamp
    std::deque<LidarScan> pending_scans_;

    std::vector<TimedPose> scan_poses_;
    PipelineStats stats_;
};

/// Runs the full pipeline over a loaded dataset (scans read lazily from
/// disk), returning the per-scan trajectory and the run statistics.
struct RunResult {
    std::vector<TimedPose> trajectory;
    PipelineStats stats;
    double wall_seconds = 0.0;      // total feeding/processing wall time
    double dataset_seconds = 0.0;   // IMU stream span
};

RunResult RunOdometry(const Dataset &dataset, const Config &config);

}  // namespace lioekf
