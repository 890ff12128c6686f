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
#include "lioekf/pipeline.hpp"

#include <Eigen/Geometry>
#include <algorithm>
#include <chrono>
#include <cmath>

#include "lioekf/so3.hpp"

namespace {

constexpr double kInitWindowSeconds = 1.0;
constexpr double kMinRange = 0.3;  // meters, drops self-returns

double Percentile(std::vector<double> values, double q) {
    if (values.empty()) return 0.0;
    std::sort(values.begin(), values.end());
    const auto idx = static_cast<std::size_t>(
        std::min<double>(std::ceil(q * static_cast<double>(values.size())) - 1.0,
                         static_cast<double>(values.size() - 1)));
    return values[std::max<std::size_t>(idx, 0)];
}

}  // namespace

namespace lioekf {

double PipelineStats::MeanCorrectionMs() const {
    if (correction_ms.empty()) return 0.0;
    double sum = 0.0;
    for (double v : correction_ms) sum += v;
    return sum / static_cast<double>(correction_ms.size());
}

double PipelineStats::MedianCorrectionMs() const {
    if (correction_ms.empty()) return 0.0;
    std::vector<double> v = correction_ms;
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double PipelineStats::P99CorrectionMs() const { return Percentile(correction_ms, 0.99); }

Odometry::Odometry(const Config &config, const Extrinsics &extrinsics)
    : config_(config), extrinsics_(extrinsics), kiss_(config.r_max) {
    map_ = std::make_unique<VoxelMap>(config.voxel_size, config.max_points_per_voxel,
                                      config.r_max);
    if (config.threshold_mode == "adaptive") {
        mode_ = ThresholdMode::kAdaptive;
    } else if (config.threshold_mode == "kiss-icp") {
        mode_ = ThresholdMode::kKissIcp;
    } else if (config.threshold_mode.rfind("fixed:", 0) == 0) {
        mode_ = ThresholdMode::kFixed;
        fixed_tau_ = std::stod(config.threshold_mode.substr(6));
        if (!(fixed_tau_ > 0.0)) {
            throw std::invalid_argument("Odometry: fixed threshold must be positive");
        }
    } else {
        throw std::invalid_argument("Odometry: unknown threshold mode '" +
                                    config.threshold_mode + "'");
    }
    variance_mode_ = config.p2p_variance_mode == "centered" ? P2pVarianceMode::kCentered
                                                            : P2pVarianceMode::kSecondMoment;
}

void Odometry::InitializeFromStaticWindow() {
    Eigen::Vector3d mean_gyro = Eigen::Vector3d::Zero();
    Eigen::Vector3d mean_accel = Eigen::Vector3d::Zero();
    for (const auto &s : init_window_) {
        mean_gyro += s.omega;
        mean_accel += s.accel;
    }
    mean_gyro /= static_cast<double>(init_window_.size());
    mean_accel /= static_cast<double>(init_window_.size());

    // Accelerometer leveling: find the tilt-only rotation that maps the
    // measured specific-force direction onto world up. Yaw stays zero (it is
    // unobservable without a heading reference).
    const Eigen::Vector3d f_hat = mean_accel.normalized();
    const Eigen::Vector3d up = Eigen::Vector3d::UnitZ();
    Eigen::Matrix3d R0 = Eigen::Matrix3d::Identity();
    const Eigen::Vector3d axis = f_hat.cross(up);
    const double sin_angle = axis.norm();
    const double cos_angle = f_hat.dot(up);
    if (sin_angle > 1e-12) {
        R0 = ExpSo3(axis / sin_angle * std::atan2(sin_angle, cos_angle));
    } else if (cos_angle < 0.0) {
        R0 = ExpSo3(Eigen::Vector3d(M_PI, 0.0, 0.0));  // upside down
    }

    state_ = NavState{};
    state_.stamp = init_window_.back().stamp;
    state_.rotation = R0;
    state_.gyro_bias = mean_gyro;
    // The component of the accelerometer bias along gravity is observable
    // while stationary; the lateral part was absorbed into the tilt.
    state_.accel_bias = (mean_accel.norm() - config_.imu.gravity) * f_hat;

    err_ = ErrorState{};
    err_.covariance = config_.initial_sigma_diag.asDiagonal();
    rel_cov_.Reset();
    last_imu_ = init_window_.back();
    initialized_ = true;
}

void Odometry::AddImu(const ImuSample &sample) {
    if (!initialized_) {
        init_window_.push_back(sample);
        if (init_window_.back().stamp - init_window_.front().stamp >= kInitWindowSeconds) {
            InitializeFromStaticWindow();
        }
        return;
    }
    imu_buffer_.push_back(sample);
    TryProcessScans();
}

void Odometry::AddScan(const LidarScan &scan) {
    pending_scans_.push_back(scan);
    if (initialized_) TryProcessScans();
}

void Odometry::TryProcessScans() {
    while (!pending_scans_.empty()) {
        const LidarScan &scan = pending_scans_.front();
        if (scan.stamp < state_.stamp) {  // arrived before initialization finished
            pending_scans_.pop_front();
            continue;
        }
        double sweep_end = scan.stamp;
        for (double o : scan.offsets) sweep_end = std::max(sweep_end, scan.stamp + o);
        if (imu_buffer_.empty() || imu_buffer_.back().stamp < sweep_end) return;
        LidarScan owned = std::move(pending_scans_.front());
        pending_scans_.pop_front();
        ProcessScan(owned);
    }
}

void Odometry::PropagateTo(const ImuSample &imu_cur) {
    const double s = imu_cur.stamp - last_imu_.stamp;
    if (s <= 0.0) return;
    const auto [A, B] = Jacobians(state_, imu_cur, s);
    err_.covariance = PropagateCovariance(err_.covariance, A, B, config_.imu, s);
    rel_cov_.Propagate(A, B, config_.imu, s);
    state_ = PropagateState(state_, last_imu_, imu_cur, config_.imu);
    last_imu_ = imu_cur;
}

double Odometry::CurrentTau() {
    switch (mode_) {
        case ThresholdMode::kFixed:
            return fixed_tau_;
        case ThresholdMode::kKissIcp:
            return kiss_.ComputeThreshold();
        case ThresholdMode::kAdaptive:
        default: {
            ThresholdInputs inputs;
            inputs.rel_cov = rel_cov_.PoseCov();
            inputs.r_max = config_.r_max;
            inputs.v = config_.voxel_size;
            inputs.m = config_.max_points_per_voxel;
            inputs.sigma2_range = config_.sigma_range * config_.sigma_range;
            inputs.tau_min = config_.tau_min;
            inputs.variance_mode = variance_mode_;
            return ComputeTau(inputs);
        }
    }
}

void Odometry::ProcessScan(const LidarScan &scan) {
    // Absorb IMU samples up to the scan stamp into the filter.
    while (!imu_buffer_.empty() && imu_buffer_.front().stamp <= scan.stamp) {
        PropagateTo(imu_buffer_.front());
        imu_buffer_.pop_front();
    }
    if (state_.stamp < scan.stamp - 1e-9) {
        // The stamp falls between samples: propagate over the partial
        // interval using linearly interpolated inertial readings.
        const ImuSample &next = imu_buffer_.front();
        const double u = (scan.stamp - last_imu_.stamp) / (next.stamp - last_imu_.stamp);
        ImuSample virt;
        virt.stamp = scan.stamp;
        virt.omega = (1.0 - u) * last_imu_.omega + u * next.omega;
        virt.accel = (1.0 - u) * last_imu_.accel + u * next.accel;
        PropagateTo(virt);
    }

    const auto t_begin = std::chrono::steady_clock::now();

    // Short throwaway mechanization across the sweep gives the deskew poses;
    // the filter itself stays at the scan stamp.
    double sweep_end = scan.stamp;
    for (double o : scan.offsets) sweep_end = std::max(sweep_end, scan.stamp + o);
    std::vector<TimedPose> sensor_poses;
    const auto sensor_pose_of = [this](const NavState &s) {
        return TimedPose{s.stamp, s.rotation * extrinsics_.rotation,
                         s.rotation * extrinsics_.translation + s.position};
    };
    sensor_poses.push_back(sensor_pose_of(state_));
    {
        NavState ghost = state_;
        ImuSample ghost_prev = last_imu_;
        for (const auto &sample : imu_buffer_) {
            ghost = PropagateState(ghost, ghost_prev, sample, config_.imu);
            ghost_prev = sample;
            sensor_poses.push_back(sensor_pose_of(ghost));
            if (sample.stamp >= sweep_end) break;
        }
    }

    const LidarScan deskewed = DeskewScan(scan, sensor_poses);
    const double range_cap = scan.r_max > 0.0 ? std::min(scan.r_max, config_.r_max)
                                              : config_.r_max;
    const std::vector<Eigen::Vector3d> body = TransformToBody(
        CropRange(deskewed.points, kMinRange, range_cap), extrinsics_);
    const DownsampledFrames frames =
        Downsample(body, config_.voxel_size, config_.alpha, config_.beta);

    const double tau = CurrentTau();
    stats_.taus.push_back(tau);
    if (tau > config_.voxel_size) ++stats_.tau_warnings;

    if (map_->Empty()) {
        // First scan: anchor the map at the predicted pose.
        std::vector<Eigen::Vector3d> world(frames.for_map.size());
        for (std::size_t i = 0; i < frames.for_map.size(); ++i) {
            world[i] = state_.rotation * frames.for_map[i] + state_.position;
        }
        map_->Merge(world, state_.position);
        rel_cov_.Reset();
    } else {
        const NavState before = state_;
        const Eigen::Matrix3d sigma_p =
            config_.sigma_p * config_.sigma_p * Eigen::Matrix3d::Identity();
        const CorrectionReport report =
            CorrectScan(state_, err_, frames, *map_, tau, sigma_p, config_.iterations);
        if (report.applied) {
            rel_cov_.Reset();
            if (mode_ == ThresholdMode::kKissIcp) {
                kiss_.UpdateModelDeviation(
                    before.rotation.transpose() * state_.rotation,
                    before.rotation.transpose() * (state_.position - before.position));
            }
        } else {
            ++stats_.degenerate_scans;
        }
    }

    const auto t_end = std::chrono::steady_clock::now();
    stats_.correction_ms.push_back(
        std::chrono::duration<double, std::milli>(t_end - t_begin).count());
    ++stats_.scans_processed;
    scan_poses_.push_back(TimedPose{scan.stamp, state_.rotation, state_.position});
}

RunResult RunOdometry(const Dataset &dataset, const Config &config) {
    Odometry odo(config, dataset.extrinsics);
    RunResult result;
    const auto t_begin = std::chrono::steady_clock::now();
    std::size_t next_scan = 0;
    for (const auto &sample : dataset.imu) {
        while (next_scan < dataset.scan_stamps.size() &&
               dataset.scan_stamps[next_scan] <= sample.stamp) {
            odo.AddScan(LoadScan(dataset.scan_paths[next_scan]));
            ++next_scan;
        }
        odo.AddImu(sample);
    }
    const auto t_end = std::chrono::steady_clock::now();
    result.trajectory = odo.ScanPoses();
    result.stats = odo.Stats();
    result.wall_seconds = std::chrono::duration<double>(t_end - t_begin).count();
    result.dataset_seconds =
        dataset.imu.empty() ? 0.0 : dataset.imu.back().stamp - dataset.imu.front().stamp;
    return result;
}

}  // namespace lioekf
