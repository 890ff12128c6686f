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

#include "lioekf/preprocess.hpp"

namespace lioekf {

/// Raised when a metric cannot be computed (too few associated pose pairs,
/// trajectory shorter than the smallest evaluation segment, ...).
class EvaluationError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

struct AteResult {
    double translation_rms = 0.0;  // meters, after rigid alignment
    double rotation_rms_deg = 0.0;
    std::size_t pairs = 0;      // temporally associated pose pairs used
    std::size_t unmatched = 0;  // estimate poses with no ground truth within 10 ms
};

/// Absolute trajectory error: associates poses by nearest stamp (10 ms
/// window), rigidly aligns the estimate to the ground truth (closed-form,
/// rotation + translation, no scale), then reports RMS position error and RMS
/// rotation-angle error. Throws EvaluationError with fewer than 3 pairs.
AteResult Ate(const std::vector<TimedPose> &estimate, const std::vector<TimedPose> &ground_truth);

struct KittiResult {
    double translation_percent = 0.0;  // mean over segments, % of segment length
    double rotation_deg_per_m = 0.0;   // mean over segments
    std::vector<double> segment_lengths;  // meters, the set actually evaluated
    std::size_t segments = 0;             // segment samples averaged
};

/// Segment-based relative error over lengths {100..800} m, scaled down to
/// {10..80} m when the ground-truth path is shorter than 200 m. For every
/// start pose and every length that still fits, compares the relative motion
/// est_i^-1 est_j against gt_i^-1 gt_j at the segment endpoint. Throws
/// EvaluationError when not even the smallest segment fits.
KittiResult KittiRelativeError(const std::vector<TimedPose> &estimate,
                               const std::vector<TimedPose> &ground_truth);

}  // namespace lioekf
