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
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "lioekf/dataset_io.hpp"
#include "lioekf/metrics.hpp"
#include "lioekf/pipeline.hpp"
#include "lioekf/sim.hpp"

namespace fs = std::filesystem;

namespace {

struct RunFlags {
    std::string dataset;
    std::string config_path;
    std::string output;
    int iterations = 0;        // 0: keep config value
    std::string threshold;     // empty: keep config value
};

lioekf::Config LoadEffectiveConfig(const RunFlags &flags) {
    lioekf::Config config;
    if (!flags.config_path.empty()) {
        config = lioekf::LoadConfig(flags.config_path);
    } else if (fs::exists(fs::path(flags.dataset) / "config.txt")) {
        config = lioekf::LoadConfig((fs::path(flags.dataset) / "config.txt").string());
    }
    if (flags.iterations > 0) config.iterations = flags.iterations;
    if (!flags.threshold.empty()) config.threshold_mode = flags.threshold;
    return config;
}

void PrintEvaluation(const std::vector<lioekf::TimedPose> &est,
                     const std::vector<lioekf::TimedPose> &gt) {
    const lioekf::AteResult ate = lioekf::Ate(est, gt);
    std::cout << "ate_translation_m=" << ate.translation_rms << "\n";
    std::cout << "ate_rotation_deg=" << ate.rotation_rms_deg << "\n";
    std::cout << "ate_pairs=" << ate.pairs << "\n";
    std::cout << "association_warnings=" << ate.unmatched << "\n";
    try {
        const lioekf::KittiResult kitti = lioekf::KittiRelativeError(est, gt);
        std::cout << "kitti_translation_percent=" << kitti.translation_percent << "\n";
        std::cout << "kitti_rotation_deg_per_m=" << kitti.rotation_deg_per_m << "\n";
        std::cout << "kitti_segments=" << kitti.segments << "\n";
        std::cout << "kitti_smallest_segment_m=" << kitti.segment_lengths.front() << "\n";
    } catch (const lioekf::EvaluationError &e) {
        std::cout << "kitti_skipped=" << e.what() << "\n";
    }
}

int CmdRun(const RunFlags &flags) {
    const lioekf::Dataset dataset = lioekf::LoadDataset(flags.dataset);
    const lioekf::Config config = LoadEffectiveConfig(flags);
    const lioekf::RunResult result = lioekf::RunOdometry(dataset, config);

    const std::string out = flags.output.empty()
                                ? (fs::path(flags.dataset) / "trajectory.txt").string()
                                : flags.output;
    lioekf::WriteTrajectory(result.trajectory, out);

    std::cout << "trajectory=" << out << "\n";
    std::cout << "scans=" << result.stats.scans_processed << "\n";
    std::cout << "degenerate_scans=" << result.stats.degenerate_scans << "\n";
    std::cout << "tau_warnings=" << result.stats.tau_warnings << "\n";
    std::cout << "correction_ms_mean=" << result.stats.MeanCorrectionMs() << "\n";
    std::cout << "correction_ms_median=" << result.stats.MedianCorrectionMs() << "\n";
    std::cout << "correction_ms_p99=" << result.stats.P99CorrectionMs() << "\n";
    std::cout << "realtime_factor="
              << (result.wall_seconds > 0.0 ? result.dataset_seconds / result.wall_seconds : 0.0)
              << "\n";

    if (!dataset.ground_truth.empty() && result.trajectory.size() >= 3) {
        PrintEvaluation(result.trajectory, dataset.ground_truth);
        const lioekf::TimedPose &last_est = result.trajectory.back();
        const lioekf::TimedPose &last_gt = dataset.ground_truth.back();
        // Un-aligned end-point drift in the relative sense: compare the
        // motion since the first pose in each frame.
        const Eigen::Vector3d est_motion =
            result.trajectory.front().rotation.transpose() *
            (last_est.translation - result.trajectory.front().translation);
        const Eigen::Vector3d gt_motion =
            dataset.ground_truth.front().rotation.transpose() *
            (last_gt.translation - dataset.ground_truth.front().translation);
        std::cout << "final_position_error_m=" << (est_motion - gt_motion).norm() << "\n";
    }
    return 0;
}

int CmdSimulate(const std::string &scenario_name, const std::string &out_dir, uint64_t seed) {
    const lioekf::Scenario scenario = lioekf::MakeScenario(scenario_name);
    lioekf::GenerateDataset(scenario, seed, out_dir);
    std::cout << "scenario=" << scenario_name << "\n";
    std::cout << "seed=" << seed << "\n";
    std::cout << "out_dir=" << out_dir << "\n";
    return 0;
}

int CmdEvaluate(const std::string &est_path, const std::string &gt_path) {
    const auto est = lioekf::LoadTrajectory(est_path);
    const auto gt = lioekf::LoadTrajectory(gt_path);
    PrintEvaluation(est, gt);
    return 0;
}

int CmdAblate(const std::string &dataset_dir, const std::string &mode,
              const std::string &config_path) {
    RunFlags base;
    base.dataset = dataset_dir;
    base.config_path = config_path;
    const lioekf::Dataset dataset = lioekf::LoadDataset(dataset_dir);
    if (dataset.ground_truth.empty()) {
        std::cerr << "ablate: dataset has no ground_truth.txt" << std::endl;
        return 1;
    }

    const auto report = [&](const std::string &label, const lioekf::Config &config) {
        const auto t0 = std::chrono::steady_clock::now();
        const lioekf::RunResult result = lioekf::RunOdometry(dataset, config);
        const double wall = std::chrono::duration<double>(
                                std::chrono::steady_clock::now() - t0)
                                .count();
        double rel_trans = std::numeric_limits<double>::quiet_NaN();
        try {
            rel_trans =
                lioekf::KittiRelativeError(result.trajectory, dataset.ground_truth)
                    .translation_percent;
        } catch (const lioekf::EvaluationError &) {
        }
        const lioekf::AteResult ate = lioekf::Ate(result.trajectory, dataset.ground_truth);
        std::cout << label << " kitti_translation_percent=" << rel_trans
                  << " ate_translation_m=" << ate.translation_rms << " wall_seconds=" << wall
                  << "\n";
    };

    if (mode == "iterations") {
        for (int n : {1, 10, 100}) {
            lioekf::Config config = LoadEffectiveConfig(base);
            config.iterations = n;
            report("iterations=" + std::to_string(n), config);
        }
        return 0;
    }
    if (mode == "threshold") {
        for (const char *m : {"fixed:0.3", "fixed:1.0", "kiss-icp", "adaptive"}) {
            lioekf::Config config = LoadEffectiveConfig(base);
            config.threshold_mode = m;
            report(std::string("threshold=") + m, config);
        }
        return 0;
    }
    std::cerr << "ablate: mode must be 'iterations' or 'threshold'" << std::endl;
    return 1;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"LiDAR-inertial odometry: tightly-coupled error-state EKF"};
    app.require_subcommand(1);

    RunFlags run_flags;
    CLI::App *run = app.add_subcommand("run", "Run odometry on a dataset directory");
    run->add_option("dataset", run_flags.dataset, "Dataset directory")->required();
    run->add_option("--config", run_flags.config_path, "Config file (default: <dataset>/config.txt)");
    run->add_option("--output", run_flags.output, "Trajectory output path");
    run->add_option("--iterations", run_flags.iterations, "Correction passes per scan");
    run->add_option("--threshold", run_flags.threshold,
                    "Association gate: adaptive | fixed:<m> | kiss-icp");

    std::string sim_scenario, sim_out;
    uint64_t sim_seed = 42;
    CLI::App *simulate = app.add_subcommand("simulate", "Generate a synthetic dataset");
    simulate->add_option("scenario", sim_scenario, "static | circle | circle_slow | figure8")
        ->required();
    simulate->add_option("out_dir", sim_out, "Output directory")->required();
    simulate->add_option("--seed", sim_seed, "RNG seed");

    std::string eval_est, eval_gt;
    CLI::App *evaluate = app.add_subcommand("evaluate", "Compare a trajectory to ground truth");
    evaluate->add_option("estimate", eval_est, "Estimated trajectory file")->required();
    evaluate->add_option("ground_truth", eval_gt, "Ground-truth trajectory file")->required();

    std::string abl_dataset, abl_mode, abl_config;
    CLI::App *ablate = app.add_subcommand("ablate", "Run the iteration/threshold sweeps");
    ablate->add_option("dataset", abl_dataset, "Dataset directory")->required();
    ablate->add_option("mode", abl_mode, "iterations | threshold")->required();
    ablate->add_option("--config", abl_config, "Config file (default: <dataset>/config.txt)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return CmdRun(run_flags);
        if (simulate->parsed()) return CmdSimulate(sim_scenario, sim_out, sim_seed);
        if (evaluate->parsed()) return CmdEvaluate(eval_est, eval_gt);
        if (ablate->parsed()) return CmdAblate(abl_dataset, abl_mode, abl_config);
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << std::endl;
        return 1;
    }
    return 0;
}
