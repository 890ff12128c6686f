# MIT License
#
# Copyright (c) 2026 the lioekf authors
#
# Permission is hereby granted, free of charge, to any person obtaining a copy
# of this software and associated documentation files (the "Software"), to deal
# in the Software without restriction, including without limitation the rights
# to use, copy, modify, distribute, sublicense, and/or sell copies of the
# Software, and to permit persons to whom the Software is furnished to do so,
# subject to the following conditions:
#
# The above copyright notice and this permission notice shall be included in all
# copies or substantial portions of the Software.
#
# THE SOFTWARE IS PROVIDED "AS IS", WITHOUT WARRANTY OF ANY KIND, EXPRESS OR
# IMPLIED, INCLUDING BUT NOT LIMITED TO THE WARRANTIES OF MERCHANTABILITY,
# FITNESS FOR A PARTICULAR PURPOSE AND NONINFRINGEMENT. IN NO EVENT SHALL THE
# AUTHORS OR COPYRIGHT HOLDERS BE LIABLE FOR ANY CLAIM, DAMAGES OR OTHER
# LIABILITY, WHETHER IN AN ACTION OF CONTRACT, TORT OR OTHERWISE, ARISING FROM,
# OUT OF OR IN CONNECTION WITH THE SOFTWARE OR THE USE OR OTHER DEALINGS IN THE
# SOFTWARE.
"""End-to-end smoke tests for the python bindings."""

import numpy as np
import pytest

import lioekf


def test_scenarios_listed():
    names = lioekf.scenarios()
    assert "static" in names and "figure8" in names


def test_so3_roundtrip():
    rng = np.random.default_rng(3)
    for _ in range(20):
        phi = rng.normal(size=3)
        recovered = lioekf.so3_log(lioekf.so3_exp(phi))
        assert np.allclose(recovered, phi, atol=1e-12)


def test_trajectory_roundtrip(tmp_path):
    rng = np.random.default_rng(7)
    n = 25
    traj = np.zeros((n, 8))
    traj[:, 0] = np.arange(n) * 0.1
    traj[:, 1:4] = rng.normal(size=(n, 3))
    quats = rng.normal(size=(n, 4))
    quats /= np.linalg.norm(quats, axis=1, keepdims=True)
    quats[quats[:, 3] < 0] *= -1.0
    traj[:, 4:8] = quats
    path = str(tmp_path / "traj.txt")
    lioekf.save_trajectory(traj, path)
    loaded = lioekf.load_trajectory(path)
    assert np.allclose(loaded, traj, atol=1e-9)


def test_ate_of_identical_trajectories_is_zero():
    n = 30
    traj = np.zeros((n, 8))
    traj[:, 0] = np.arange(n) * 0.1
    traj[:, 1] = np.linspace(0.0, 5.0, n)
    traj[:, 7] = 1.0
    result = lioekf.ate(traj, traj)
    assert result["translation_rms"] < 1e-12
    assert result["pairs"] == n


def test_evaluation_error_on_too_few_pairs():
    traj = np.zeros((2, 8))
    traj[:, 0] = [0.0, 0.1]
    traj[:, 7] = 1.0
    with pytest.raises(lioekf.EvaluationError):
        lioekf.ate(traj, traj)


def test_unknown_scenario_raises(tmp_path):
    with pytest.raises(ValueError):
        lioekf.generate_dataset("no_such_scenario", 1, str(tmp_path / "ds"))


def test_static_dataset_end_to_end(tmp_path):
    out = str(tmp_path / "ds_static")
    lioekf.generate_dataset("static", 1, out)
    result = lioekf.run_odometry(out)
    traj = result["trajectory"]
    gt = result["ground_truth"]
    assert traj.shape[1] == 8 and traj.shape[0] > 500
    err = lioekf.ate(traj, gt)
    assert err["translation_rms"] < 0.05
    stats = result["stats"]
    assert stats["scans_processed"] == traj.shape[0]
    assert stats["median_correction_ms"] > 0.0
    # Same dataset, same config: the pipeline is deterministic.
    again = lioekf.run_odometry(out)
    assert np.array_equal(traj, again["trajectory"])
