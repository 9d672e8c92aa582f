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

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "bgp/polynomial.hpp"
#include "bgp/wtrick.hpp"

namespace bgp {

struct ProgressionHit {
    Integer x, y;
    std::vector<Integer> values;     // x + P_j(y)
    std::optional<std::uint64_t> gap;  // b for bounded-gap hits
};

// Lambda = E_{y in [M]} E_{x in [N]} prod_j f(x + P_j(y)), with f given on
// [1, N] (index x - 1) and zero outside.
double lambda_count(std::span<const double> f, std::span<const IntPolynomial> polys, std::uint64_t M);

// Q_j(y) = P_j(W y) / W: a y^i maps to a W^{i-1} y^i. Requires P_j(0) = 0.
std::vector<IntPolynomial> rescale_polys(std::span<const IntPolynomial> polys, std::uint64_t W);

// Hits with 1 <= x <= x_max, 1 <= y <= y_max and every x + P_j(y) in the
// sorted list A, in (y, x) order. `first_only` stops at the first hit.
std::vector<ProgressionHit> search_in_A(std::span<const std::uint64_t> A,
                                        std::span<const IntPolynomial> polys, std::uint64_t x_max,
                                        std::uint64_t y_max, bool first_only = false);

// (x, y, b) with b <= b_max and x + P_j(y), x + P_j(y) + b all prime, in
// (b, y, x) order.
std::vector<ProgressionHit> search_bounded_gap(std::span<const IntPolynomial> polys,
                                               std::uint64_t b_max, std::uint64_t x_max,
                                               std::uint64_t y_max, bool first_only = false);

struct PipelineOptions {
    unsigned j_max = 1;
    ParameterOverrides overrides;
    std::uint64_t M = 10;
    unsigned threads = 0;
};

struct PipelineHit {
    std::uint64_t x = 0, y = 0;   // coset coordinates
    Integer x0, y0;               // x0 = W x + b, y0 = W y
    std::vector<Integer> values;  // x0 + P_j(y0), all in A
};

struct PipelineReport {
    SieveContext context;
    ResidueSelection selection;
    std::uint64_t A_size = 0;
    double f_mean = 0.0;
    std::vector<IntPolynomial> rescaled;
    std::uint64_t M = 0;
    double lambda = 0.0;
    // hits * value^t / (N M), the same sum counted directly.
    double lambda_recount = 0.0;
    std::vector<PipelineHit> hits;
    bool consistent = false;  // (lambda > 0) == !hits.empty() and recount agrees
};

// build_A, choose_parameters, select_residue, build_f_A, rescale_polys, then
// Lambda(f_A; Q) over x in [1, N], y in [1, M] and the matching coset search.
PipelineReport theorem_one_pipeline(const MaynardParams& params,
                                    std::span<const IntPolynomial> polys,
                                    const PipelineOptions& options = {});

}  // namespace bgp
