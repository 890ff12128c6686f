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
#include "lioekf/dataset_io.hpp"

#include <Eigen/Geometry>
#include <algorithm>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "lioekf/so3.hpp"

namespace fs = std::filesystem;

namespace lioekf {

namespace {

constexpr char kScanMagic[4] = {'L', 'I', 'O', 'E'};
constexpr uint16_t kScanVersion = 1;
constexpr std::size_t kScanHeaderBytes = 4 + 2 + 8 + 8 + 4;
constexpr std::size_t kScanPointBytes = 4 * 4;

[[noreturn]] void Fail(const std::string &path, const std::string &what) {
    throw DatasetError(path + ": " + what);
}

[[noreturn]] void FailLine(const std::string &path, std::size_t line, const std::string &what) {
    throw DatasetError(path + ":" + std::to_string(line) + ": " + what);
}

std::ifstream OpenText(const std::string &path) {
    std::ifstream in(path);
    if (!in) Fail(path, "cannot open file");
    return in;
}

std::ofstream OpenTextOut(const std::string &path) {
    std::ofstream out(path);
    if (!out) Fail(path, "cannot open file for writing");
    out << std::setprecision(17);
    return out;
}

bool IsCommentOrBlank(const std::string &line) {
    for (char c : line) {
        if (c == '#') return true;
        if (!std::isspace(static_cast<unsigned char>(c))) return false;
    }
    return true;
}

double ParseDouble(const std::string &token, const std::string &path, std::size_t line) {
    std::size_t used = 0;
    double value = 0.0;
    try {
        value = std::stod(token, &used);
    } catch (const std::exception &) {
        FailLine(path, line, "not a number: '" + token + "'");
    }
    while (used < token.size() && std::isspace(static_cast<unsigned char>(token[used]))) ++used;
    if (used != token.size()) FailLine(path, line, "trailing junk: '" + token + "'");
    return value;
}

template <typename T>
void PutRaw(std::string &buf, T value) {
    char bytes[sizeof(T)];
    std::memcpy(bytes, &value, sizeof(T));
    buf.append(bytes, sizeof(T));
}

template <typename T>
T GetRaw(const std::string &buf, std::size_t offset) {
    T value;
    std::memcpy(&value, buf.data() + offset, sizeof(T));
    return value;
}

}  // namespace

std::vector<ImuSample> LoadImuCsv(const std::string &path) {
    std::ifstream in = OpenText(path);
    std::vector<ImuSample> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (IsCommentOrBlank(line)) continue;
        std::stringstream ss(line);
        std::string token;
        double f[7];
        for (int i = 0; i < 7; ++i) {
            if (!std::getline(ss, token, ',')) {
                FailLine(path, lineno, "expected 7 comma-separated fields");
            }
            f[i] = ParseDouble(token, path, lineno);
        }
        if (std::getline(ss, token, ',')) FailLine(path, lineno, "more than 7 fields");
        if (!out.empty() && f[0] <= out.back().stamp) {
            FailLine(path, lineno, "non-monotone stamp");
        }
        out.push_back(ImuSample{f[0], {f[1], f[2], f[3]}, {f[4], f[5], f[6]}});
    }
    return out;
}

void WriteImuCsv(const std::vector<ImuSample> &samples, const std::string &path) {
    std::ofstream out = OpenTextOut(path);
    out << "# stamp_s, wx, wy, wz, ax, ay, az\n";
    for (const auto &s : samples) {
        out << s.stamp << "," << s.omega.x() << "," << s.omega.y() << "," << s.omega.z() << ","
            << s.accel.x() << "," << s.accel.y() << "," << s.accel.z() << "\n";
    }
    if (!out) Fail(path, "write failed");
}

LidarScan LoadScan(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) Fail(path, "cannot open file");
    std::string buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (buf.size() < kScanHeaderBytes) Fail(path, "truncated header");
    if (std::memcmp(buf.data(), kScanMagic, 4) != 0) Fail(path, "bad magic bytes");
    const auto version = GetRaw<uint16_t>(buf, 4);
    if (version != kScanVersion) {
        Fail(path, "unsupported version " + std::to_string(version));
    }
    const auto count = GetRaw<uint64_t>(buf, 6);
    LidarScan scan;
    scan.stamp = GetRaw<double>(buf, 14);
    scan.r_max = GetRaw<float>(buf, 22);
    if (buf.size() != kScanHeaderBytes + count * kScanPointBytes) {
        Fail(path, "payload size does not match point count");
    }
    scan.points.reserve(count);
    scan.offsets.reserve(count);
    std::size_t off = kScanHeaderBytes;
    for (uint64_t i = 0; i < count; ++i, off += kScanPointBytes) {
        const auto x = GetRaw<float>(buf, off);
        const auto y = GetRaw<float>(buf, off + 4);
        const auto z = GetRaw<float>(buf, off + 8);
        const auto o = GetRaw<float>(buf, off + 12);
        scan.points.emplace_back(x, y, z);
        scan.offsets.push_back(o);
    }
    return scan;
}

void WriteScan(const LidarScan &scan, const std::string &path) {
    std::string buf;
    buf.reserve(kScanHeaderBytes + scan.points.size() * kScanPointBytes);
    buf.append(kScanMagic, 4);
    PutRaw<uint16_t>(buf, kScanVersion);
    PutRaw<uint64_t>(buf, scan.points.size());
    PutRaw<double>(buf, scan.stamp);
    PutRaw<float>(buf, static_cast<float>(scan.r_max));
    for (std::size_t i = 0; i < scan.points.size(); ++i) {
        PutRaw<float>(buf, static_cast<float>(scan.points[i].x()));
        PutRaw<float>(buf, static_cast<float>(scan.points[i].y()));
        PutRaw<float>(buf, static_cast<float>(scan.points[i].z()));
        PutRaw<float>(buf, i < scan.offsets.size() ? static_cast<float>(scan.offsets[i]) : 0.0f);
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) Fail(path, "cannot open file for writing");
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (!out) Fail(path, "write failed");
}

double ReadScanStamp(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) Fail(path, "cannot open file");
    std::string buf(kScanHeaderBytes, '\0');
    in.read(buf.data(), static_cast<std::streamsize>(kScanHeaderBytes));
    if (in.gcount() != static_cast<std::streamsize>(kScanHeaderBytes)) {
        Fail(path, "truncated header");
    }
    if (std::memcmp(buf.data(), kScanMagic, 4) != 0) Fail(path, "bad magic bytes");
    return GetRaw<double>(buf, 14);
}

std::vector<TimedPose> LoadTrajectory(const std::string &path) {
    std::ifstream in = OpenText(path);
    std::vector<TimedPose> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (IsCommentOrBlank(line)) continue;
        std::istringstream ss(line);
        double f[8];
        for (int i = 0; i < 8; ++i) {
            if (!(ss >> f[i])) FailLine(path, lineno, "expected 8 fields: stamp t(3) q(4)");
        }
        std::string extra;
        if (ss >> extra) FailLine(path, lineno, "more than 8 fields");
        if (!out.empty() && f[0] <= out.back().stamp) {
            FailLine(path, lineno, "non-monotone stamp");
        }
        Eigen::Quaterniond q(f[7], f[4], f[5], f[6]);  // (w, x, y, z)
        if (q.norm() < 1e-9) FailLine(path, lineno, "zero quaternion");
        out.push_back(TimedPose{f[0], q.normalized().toRotationMatrix(), {f[1], f[2], f[3]}});
    }
    return out;
}

void WriteTrajectory(const std::vector<TimedPose> &poses, const std::string &path) {
    std::ofstream out = OpenTextOut(path);
    double prev = -std::numeric_limits<double>::infinity();
    for (const auto &p : poses) {
        if (p.stamp <= prev) Fail(path, "trajectory stamps must be strictly increasing");
        prev = p.stamp;
        Eigen::Quaterniond q(p.rotation);
        q.normalize();
        if (q.w() < 0.0) q.coeffs() = -q.coeffs();
        out << p.stamp << " " << p.translation.x() << " " << p.translation.y() << " "
            << p.translation.z() << " " << q.x() << " " << q.y() << " " << q.z() << " " << q.w()
            << "\n";
    }
    if (!out) Fail(path, "write failed");
}

Extrinsics LoadCalib(const std::string &path) {
    std::ifstream in = OpenText(path);
    Eigen::Matrix3d R;
    Eigen::Vector3d t;
    std::string line;
    std::size_t lineno = 0;
    int row = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (IsCommentOrBlank(line)) continue;
        if (row >= 3) FailLine(path, lineno, "more than 3 calibration rows");
        std::istringstream ss(line);
        double f[4];
        for (int i = 0; i < 4; ++i) {
            if (!(ss >> f[i])) FailLine(path, lineno, "expected 4 fields per row");
        }
        R.row(row) << f[0], f[1], f[2];
        t[row] = f[3];
        ++row;
    }
    if (row != 3) Fail(path, "expected 3 calibration rows");
    if (!IsRotationMatrix(R, 1e-5)) Fail(path, "rotation block is not a rotation matrix");
    Extrinsics ext;
    ext.rotation = R;
    ext.translation = t;
    return ext;
}

void WriteCalib(const Extrinsics &ext, const std::string &path) {
    std::ofstream out = OpenTextOut(path);
    out << "# rows of [R | t], LiDAR -> body\n";
    for (int r = 0; r < 3; ++r) {
        out << ext.rotation(r, 0) << " " << ext.rotation(r, 1) << " " << ext.rotation(r, 2) << " "
            << ext.translation[r] << "\n";
    }
    if (!out) Fail(path, "write failed");
}

namespace {

std::string Trim(const std::string &s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

void ValidateThresholdMode(const std::string &mode, const std::string &path, std::size_t line) {
    if (mode == "adaptive" || mode == "kiss-icp") return;
    if (mode.rfind("fixed:", 0) == 0) {
        const std::string value = mode.substr(6);
        try {
            if (std::stod(value) > 0.0) return;
        } catch (const std::exception &) {
        }
    }
    FailLine(path, line, "threshold_mode must be adaptive, kiss-icp, or fixed:<meters>");
}

}  // namespace

Config LoadConfig(const std::string &path) {
    std::ifstream in = OpenText(path);
    Config c;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        if (IsCommentOrBlank(line)) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) FailLine(path, lineno, "expected key = value");
        const std::string key = Trim(line.substr(0, eq));
        const std::string value = Trim(line.substr(eq + 1));
        if (value.empty()) FailLine(path, lineno, "empty value for key '" + key + "'");

        if (key == "voxel_size") {
            c.voxel_size = ParseDouble(value, path, lineno);
        } else if (key == "max_points_per_voxel") {
            c.max_points_per_voxel = static_cast<int>(ParseDouble(value, path, lineno));
        } else if (key == "initial_sigma_diag") {
            std::istringstream ss(value);
            for (int i = 0; i < 15; ++i) {
                if (!(ss >> c.initial_sigma_diag[i])) {
                    FailLine(path, lineno, "initial_sigma_diag needs 15 values");
                }
            }
            std::string extra;
            if (ss >> extra) FailLine(path, lineno, "initial_sigma_diag needs exactly 15 values");
        } else if (key == "sigma_p") {
            c.sigma_p = ParseDouble(value, path, lineno);
        } else if (key == "gyro_noise_density") {
            c.imu.gyro_noise_density = ParseDouble(value, path, lineno);
        } else if (key == "accel_noise_density") {
            c.imu.accel_noise_density = ParseDouble(value, path, lineno);
        } else if (key == "gyro_bias_walk") {
            c.imu.gyro_bias_walk = ParseDouble(value, path, lineno);
        } else if (key == "accel_bias_walk") {
            c.imu.accel_bias_walk = ParseDouble(value, path, lineno);
        } else if (key == "gravity") {
            c.imu.gravity = ParseDouble(value, path, lineno);
        } else if (key == "sigma_range") {
            c.sigma_range = ParseDouble(value, path, lineno);
        } else if (key == "r_max") {
            c.r_max = ParseDouble(value, path, lineno);
        } else if (key == "alpha") {
            c.alpha = ParseDouble(value, path, lineno);
        } else if (key == "beta") {
            c.beta = ParseDouble(value, path, lineno);
        } else if (key == "tau_min") {
            c.tau_min = ParseDouble(value, path, lineno);
        } else if (key == "threshold_mode") {
            ValidateThresholdMode(value, path, lineno);
            c.threshold_mode = value;
        } else if (key == "iterations") {
            c.iterations = static_cast<int>(ParseDouble(value, path, lineno));
        } else if (key == "p2p_variance_mode") {
            if (value != "second_moment" && value != "centered") {
                FailLine(path, lineno, "p2p_variance_mode must be second_moment or centered");
            }
            c.p2p_variance_mode = value;
        } else {
            FailLine(path, lineno, "unknown key '" + key + "'");
        }
    }
    if (!(c.voxel_size > 0.0)) Fail(path, "voxel_size must be positive");
    if (c.max_points_per_voxel < 1) Fail(path, "max_points_per_voxel must be at least 1");
    if (!(c.sigma_p > 0.0)) Fail(path, "sigma_p must be positive");
    if (!(c.r_max > 0.0)) Fail(path, "r_max must be positive");
    if (!(c.alpha > 0.0) || !(c.beta > 0.0)) Fail(path, "alpha and beta must be positive");
    if (c.tau_min < 0.0) Fail(path, "tau_min must be non-negative");
    if (c.iterations < 1) Fail(path, "iterations must be at least 1");
    if (c.sigma_range < 0.0) Fail(path, "sigma_range must be non-negative");
    if (!(c.imu.gravity > 0.0)) Fail(path, "gravity must be positive");
    if ((c.initial_sigma_diag.array() < 0.0).any()) {
        Fail(path, "initial_sigma_diag entries must be non-negative");
    }
    return c;
}

void WriteConfig(const Config &c, const std::string &path) {
    std::ofstream out = OpenTextOut(path);
    out << "voxel_size = " << c.voxel_size << "\n";
    out << "max_points_per_voxel = " << c.max_points_per_voxel << "\n";
    out << "initial_sigma_diag =";
    for (int i = 0; i < 15; ++i) out << " " << c.initial_sigma_diag[i];
    out << "\n";
    out << "sigma_p = " << c.sigma_p << "\n";
    out << "gyro_noise_density = " << c.imu.gyro_noise_density << "\n";
    out << "accel_noise_density = " << c.imu.accel_noise_density << "\n";
    out << "gyro_bias_walk = " << c.imu.gyro_bias_walk << "\n";
    out << "accel_bias_walk = " << c.imu.accel_bias_walk << "\n";
    out << "gravity = " << c.imu.gravity << "\n";
    out << "sigma_range = " << c.sigma_range << "\n";
    out << "r_max = " << c.r_max << "\n";
    out << "alpha = " << c.alpha << "\n";
    out << "beta = " << c.beta << "\n";
    out << "tau_min = " << c.tau_min << "\n";
    out << "threshold_mode = " << c.threshold_mode << "\n";
    out << "iterations = " << c.iterations << "\n";
    out << "p2p_variance_mode = " << c.p2p_variance_mode << "\n";
    if (!out) Fail(path, "write failed");
}

Dataset LoadDataset(const std::string &dir) {
    const fs::path root(dir);
    if (!fs::is_directory(root)) {
        throw DatasetError(dir + ": not a directory");
    }
    Dataset ds;
    ds.imu = LoadImuCsv((root / "imu.csv").string());
    ds.extrinsics = LoadCalib((root / "calib.txt").string());
    if (fs::exists(root / "config.txt")) {
        ds.config = LoadConfig((root / "config.txt").string());
    }
    if (fs::exists(root / "ground_truth.txt")) {
        ds.ground_truth = LoadTrajectory((root / "ground_truth.txt").string());
    }

    const fs::path scan_dir = root / "scans";
    if (fs::is_directory(scan_dir)) {
        for (const auto &entry : fs::directory_iterator(scan_dir)) {
            if (entry.is_regular_file() && entry.path().extension() == ".bin") {
                ds.scan_paths.push_back(entry.path().string());
            }
        }
        std::sort(ds.scan_paths.begin(), ds.scan_paths.end());
        ds.scan_stamps.reserve(ds.scan_paths.size());
        for (const auto &p : ds.scan_paths) ds.scan_stamps.push_back(ReadScanStamp(p));
        for (std::size_t i = 1; i < ds.scan_stamps.size(); ++i) {
            if (ds.scan_stamps[i] <= ds.scan_stamps[i - 1]) {
                throw DatasetError(ds.scan_paths[i] + ": scan stamps not strictly increasing");
            }
        }
        if (!ds.scan_stamps.empty()) {
            if (ds.imu.empty() || ds.scan_stamps.front() < ds.imu.front().stamp ||
                ds.scan_stamps.back() > ds.imu.back().stamp) {
                throw DatasetError(dir + ": scan stamps are not bracketed by the IMU stream");
            }
        }
    }
    return ds;
}

}  // namespace lioekf
