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
"""LiDAR-inertial odometry: simulate, run, evaluate.

The heavy lifting lives in the compiled extension; this package re-exports
its public surface.
"""

from ._lioekf import (
    DatasetError,
    EvaluationError,
    ate,
    generate_dataset,
    kitti_relative_error,
    load_trajectory,
    run_odometry,
    save_trajectory,
    scenarios,
    so3_exp,
    so3_log,
)

__all__ = [
    "DatasetError",
    "EvaluationError",
    "ate",
    "generate_dataset",
    "kitti_relative_error",
    "load_trajectory",
    "run_odometry",
    "save_trajectory",
    "scenarios",
    "so3_exp",
    "so3_log",
]
