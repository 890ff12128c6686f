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

#include <cstddef>
#include <functional>

namespace lioekf {

/// Worker count: min(LIOEKF_THREADS, hardware_concurrency), at least 1.
int ThreadCap();

/// Runs fn(chunk_index, begin, end) over fixed-size chunks of [0, n).
/// The chunk grid depends only on n, never on the worker count, so per-chunk
/// partial results combined in chunk order are bit-identical for any
/// LIOEKF_THREADS setting. Chunks are processed by up to ThreadCap() workers;
/// small inputs run inline on the calling thread.
void ParallelChunks(std::size_t n, const std::function<void(std::size_t, std::size_t, std::size_t)> &fn);

/// Chunk geometry used by ParallelChunks, exposed so callers can size their
/// per-chunk partial buffers.
inline constexpr std::size_t kParallelChunk = 1024;
std::size_t NumChunks(std::size_t n);

}  // namespace lioekf
