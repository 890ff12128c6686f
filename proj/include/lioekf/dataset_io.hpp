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
#include <string>
#include <vector>

#include "lioekf/preprocess.hpp"
#include "lioekf/state.hpp"

namespace lioekf {

/// Malformed or inconsistent on-disk data. The message names the file and,
/// for text formats, the offending line.
class DatasetError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// Runtime configuration, stored on disk as flat `key = value` text.
/// initial_sigma_diag holds variances in the error-vector order
/// [dt, dv, dphi, dbg, dba].
struct Config {
    double voxel_size = 0.5;
    int max_points_per_voxel = 20;
    Vector15d initial_sigma_diag =
        (Vector15d() << 1e-6, 1e-6, 1e-6, 1e-4, 1e-4, 1e-4, 1e-4, 1e-4, 4e-4, 2.5e-7, 2.5e-7,
         2.5e-7, 1e-2, 1e-2, 1e-2)
            .finished();
    double sigma_p = 0.05;
    ImuNoiseSpec imu = {2.6e-4, 2.3e-3, 1e-5, 1e-4, 9.81};
    double sigma_range = 0.02;
    double r_max = 30.0;
    double alpha = 0.5;
    double beta = 1.5;
    double tau_min = 0.05;
    std::string threshold_mode = "adaptive";  // adaptive | fixed:<m> | kiss-icp
    int iterations = 1;
    std::string p2p_variance_mode = "second_moment";  // second_moment | centered
};

/// CSV columns `stamp_s, wx, wy, wz, ax, ay, az`; `#` lines are comments.
/// Stamps must be strictly increasing. An empty file is an empty stream.
std::vector<ImuSample> LoadImuCsv(const std::string &path);
void WriteImuCsv(const std::vector<ImuSample> &samples, const std::string &path);

/// Binary scan: magic "LIOE", u16 version (=1), u64 point count, f64 stamp,
/// f32 r_max, then per point f32 x, y, z, time-offset — all little-endian.
LidarScan LoadScan(const std::string &path);
void WriteScan(const LidarScan &scan, const std::string &path);
/// Reads only the header and returns the scan stamp.
double ReadScanStamp(const std::string &path);

/// Text lines `stamp_s tx ty tz qx qy qz qw`, quaternion normalized with
/// qw >= 0, stamps strictly increasing.
std::vector<TimedPose> LoadTrajectory(const std::string &path);
void WriteTrajectory(const std::vector<TimedPose> &poses, const std::string &path);

/// Three text lines of four numbers: rows of [R | t], LiDAR -> body.
Extrinsics LoadCalib(const std::string &path);
void WriteCalib(const Extrinsics &ext, const std::string &path);

/// Flat `key = value` file; unknown keys and malformed values are rejected.
Config LoadConfig(const std::string &path);
void WriteConfig(const Config &config, const std::string &path);

/// A dataset directory: imu.csv, scans/*.bin (lexicographic order),
/// calib.txt, optional config.txt and ground_truth.txt. Scan payloads stay on
/// disk; stamps come from the headers and must be strictly increasing and
/// bracketed by the IMU stream.
struct Dataset {
    std::vector<ImuSample> imu;
    std::vector<std::string> scan_paths;
    std::vector<double> scan_stamps;
    Extrinsics extrinsics;
    Config config;
    std::vector<TimedPose> ground_truth;  // empty when absent
};

Dataset LoadDataset(const std::string &dir);

}  // namespace lioekf
