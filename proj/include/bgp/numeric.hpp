// Copyright 2026 The bgprog Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace bgp {

// Fixed-size work unit for range partitioning. Results are computed per chunk
// and merged in chunk order, so output never depends on the thread count.
inline constexpr std::size_t kChunkSize = std::size_t{1} << 16;

// Pairwise (tree) summation with a fixed leaf width; deterministic for a
// given input order.
double pairwise_sum(std::span<const double> values);

// Number of worker threads to use; 0 means std::thread::hardware_concurrency.
unsigned resolve_threads(unsigned requested);

// Runs body(chunk_index) for chunk_index in [0, chunks) on up to `threads`
// workers. Exceptions from workers are rethrown on the caller's thread.
void parallel_for_chunks(std::size_t chunks, unsigned threads,
                         const std::function<void(std::size_t)>& body);

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;
    std::size_t evaluations = 0;
};

// Adaptive Gauss-Kronrod (7/15) on [a, b]. Throws NumericError if the
// tolerance is not reached within max_depth bisections.
QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                    double tolerance = 1e-10, int max_depth = 50);

}  // namespace bgp
