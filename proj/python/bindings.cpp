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
#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <Eigen/Geometry>
#include <optional>
#include <string>
#include <vector>

#include "lioekf/dataset_io.hpp"
#include "lioekf/metrics.hpp"
#include "lioekf/pipeline.hpp"
#include "lioekf/sim.hpp"
#include "lioekf/so3.hpp"

namespace py = pybind11;
using namespace lioekf;

namespace {

// Rows of [stamp, tx, ty, tz, qx, qy, qz, qw], the same layout as the
// on-disk trajectory format.
py::array_t<double> PosesToArray(const std::vector<TimedPose> &poses) {
    py::array_t<double> out({poses.size(), std::size_t(8)});
    auto view = out.mutable_unchecked<2>();
    for (std::size_t i = 0; i < poses.size(); ++i) {
        const TimedPose &p = poses[i];
        Eigen::Quaterniond q(p.rotation);
        q.normalize();
        if (q.w() < 0.0) q.coeffs() *= -1.0;
        view(i, 0) = p.stamp;
        view(i, 1) = p.translation.x();
        view(i, 2) = p.translation.y();
        view(i, 3) = p.translation.z();
        view(i, 4) = q.x();
        view(i, 5) = q.y();
        view(i, 6) = q.z();
        view(i, 7) = q.w();
    }
    return out;
}

std::vector<TimedPose> ArrayToPoses(const py::array_t<double> &arr) {
    const auto view = arr.unchecked<2>();
    if (view.shape(1) != 8) {
        throw py::value_error("trajectory array must have 8 columns: stamp, t(3), q_xyzw(4)");
    }
    std::vector<TimedPose> poses(static_cast<std::size_t>(view.shape(0)));
    for (py::ssize_t i = 0; i < view.shape(0); ++i) {
        TimedPose &p = poses[static_cast<std::size_t>(i)];
        p.stamp = view(i, 0);
        p.translation = Eigen::Vector3d(view(i, 1), view(i, 2), view(i, 3));
        Eigen::Quaterniond q(view(i, 7), view(i, 4), view(i, 5), view(i, 6));
        p.rotation = q.normalized().toRotationMatrix();
    }
    return poses;
}

py::dict StatsToDict(const PipelineStats &stats) {
    py::dict d;
    d["scans_processed"] = stats.scans_processed;
    d["degenerate_scans"] = stats.degenerate_scans;
    d["tau_warnings"] = stats.tau_warnings;
    d["taus"] = py::array_t<double>(stats.taus.size(), stats.taus.data());
    d["correction_ms"] =
        py::array_t<double>(stats.correction_ms.size(), stats.correction_ms.data());
    if (!stats.correction_ms.empty()) {
        d["median_correction_ms"] = stats.MedianCorrectionMs();
        d["mean_correction_ms"] = stats.MeanCorrectionMs();
        d["p99_correction_ms"] = stats.P99CorrectionMs();
    }
    return d;
}

}  // namespace

PYBIND11_MODULE(_lioekf, m) {
    m.doc() = "LiDAR-inertial odometry: synthetic data generation, the "
              "odometry pipeline, and trajectory evaluation.";

    py::register_exception<DatasetError>(m, "DatasetError", PyExc_RuntimeError);
    py::register_exception<EvaluationError>(m, "EvaluationError", PyExc_RuntimeError);

    m.def("scenarios", [] {
        return std::vector<std::string>{"static", "circle", "circle_slow", "figure8"};
    }, "Names accepted by generate_dataset().");

    m.def(
        "generate_dataset",
        [](const std::string &scenario, uint64_t seed, const std::string &out_dir) {
            GenerateDataset(MakeScenario(scenario), seed, out_dir);
        },
        py::arg("scenario"), py::arg("seed"), py::arg("out_dir"),
        py::call_guard<py::gil_scoped_release>(),
        "Simulate one of the built-in scenarios and write a dataset "
        "directory (imu.csv, scans/, calib.txt, config.txt, gt.txt).");

    m.def(
        "run_odometry",
        [](const std::string &dataset_dir, std::optional<std::string> threshold_mode,
           std::optional<int> iterations) {
            Dataset ds = LoadDataset(dataset_dir);
            Config cfg = ds.config;
            if (threshold_mode) cfg.threshold_mode = *threshold_mode;
            if (iterations) cfg.iterations = *iterations;
            RunResult res;
            {
                py::gil_scoped_release release;
                res = RunOdometry(ds, cfg);
            }
            py::dict out;
            out["trajectory"] = PosesToArray(res.trajectory);
            out["ground_truth"] = PosesToArray(ds.ground_truth);
            out["stats"] = StatsToDict(res.stats);
            out["wall_seconds"] = res.wall_seconds;
            out["dataset_seconds"] = res.dataset_seconds;
            return out;
        },
        py::arg("dataset_dir"), py::arg("threshold_mode") = std::nullopt,
        py::arg("iterations") = std::nullopt,
        "Run the full pipeline over a dataset directory. Optional overrides "
        "replace the dataset's config values: threshold_mode is 'adaptive', "
        "'kiss-icp' or 'fixed:<meters>'; iterations is the correction "
        "relinearization count.");

    m.def(
        "ate",
        [](const py::array_t<double> &estimate, const py::array_t<double> &ground_truth) {
            const AteResult r = Ate(ArrayToPoses(estimate), ArrayToPoses(ground_truth));
            py::dict d;
            d["translation_rms"] = r.translation_rms;
            d["rotation_rms_deg"] = r.rotation_rms_deg;
            d["pairs"] = r.pairs;
            d["unmatched"] = r.unmatched;
            return d;
        },
        py::arg("estimate"), py::arg("ground_truth"),
        "Absolute trajectory error after rigid alignment; arrays are rows of "
        "[stamp, tx, ty, tz, qx, qy, qz, qw].");

    m.def(
        "kitti_relative_error",
        [](const py::array_t<double> &estimate, const py::array_t<double> &ground_truth) {
            const KittiResult r =
                KittiRelativeError(ArrayToPoses(estimate), ArrayToPoses(ground_truth));
            py::dict d;
            d["translation_percent"] = r.translation_percent;
            d["rotation_deg_per_m"] = r.rotation_deg_per_m;
            d["segments"] = r.segments;
            d["segment_lengths"] = r.segment_lengths;
            return d;
        },
        py::arg("estimate"), py::arg("ground_truth"),
        "Segment-based relative error (translation % and deg/m).");

    m.def(
        "load_trajectory",
        [](const std::string &path) { return PosesToArray(LoadTrajectory(path)); },
        py::arg("path"), "Read a trajectory file into an (N, 8) array.");

    m.def(
        "save_trajectory",
        [](const py::array_t<double> &traj, const std::string &path) {
            WriteTrajectory(ArrayToPoses(traj), path);
        },
        py::arg("trajectory"), py::arg("path"),
        "Write an (N, 8) trajectory array to disk.");

    m.def("so3_exp", &ExpSo3, py::arg("phi"),
          "Rotation-vector exponential map to a 3x3 rotation matrix.");
    m.def("so3_log", &LogSo3, py::arg("rotation"),
          "Rotation-matrix logarithm to a rotation vector.");
}
