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
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bgp/admissible.hpp"
#include "bgp/arith.hpp"

namespace bgp {

struct MaynardParams {
    Tuple tuple;
    unsigned m = 1;          // at least m + 1 of the shifts must be prime
    double epsilon0 = 0.2;   // P^-(prod (n + h_i)) > n^epsilon0
    std::uint64_t n_prime = 0;  // N'

    // Throws ConfigurationError if epsilon0 is outside (0, 1) or m + 1 > k.
    void validate() const;
};

struct ParameterOverrides {
    std::optional<std::uint64_t> w;
    std::optional<double> eta0;
    std::optional<double> c0;
};

// Parameter bundle for the W-trick and the majorant. `b` is unset until
// select_residue has run.
struct SieveContext {
    MaynardParams params;
    unsigned j_max = 1;
    std::uint64_t w = 2;
    std::uint64_t W = 2;
    std::uint64_t phi_W = 1;
    std::optional<std::uint64_t> b;
    std::uint64_t N = 0;
    double eta0 = 0.0;
    double R = 0.0;
    double c0 = 0.0;

    std::size_t k() const { return params.tuple.k(); }
    double log_R() const;
    std::uint64_t residue() const;  // throws ConfigurationError when b is unset
    // Human-readable list of violated invariants (empty when valid).
    std::vector<std::string> violations() const;
};

// n in [1, N'] with P^-((n+h_1)...(n+h_k)) > n^epsilon0 and at least m + 1
// prime shifts. Work is split into fixed chunks; output is sorted and
// independent of the thread count.
std::vector<std::uint64_t> build_A(const MaynardParams& params, unsigned threads = 0);
std::vector<std::uint64_t> build_A(const MaynardParams& params, const PrimeTable& table,
                                   unsigned threads = 0);

// Elements of A whose shifts at the given (0-based) indices are all prime.
std::vector<std::uint64_t> subset_by_prime_pattern(std::span<const std::uint64_t> A,
                                                   const Tuple& t,
                                                   std::span<const std::size_t> indices,
                                                   const PrimeTable& table);

struct ResidueSelection {
    std::uint64_t b = 0;
    std::uint64_t count = 0;
    bool empty_warning = false;
    std::vector<std::uint64_t> candidates;   // eligible residues, ascending
    std::vector<std::uint64_t> counts;       // count per candidate
    // Computable factor (W/phi(W))^k N / log^k N of the pigeonhole floor; the
    // remaining factor delta*C1/(2*C2) is non-effective.
    double floor_factor = 0.0;
    std::string floor_symbolic = "delta*C1/(2*C2)";
};

// Support window [ceil(sqrt N), N - ceil(sqrt N)] for x.
std::uint64_t support_begin(std::uint64_t N);
std::uint64_t support_end(std::uint64_t N);

// Picks b in X_W with gcd(b, W) = 1 maximizing the number of x in the
// support window with W x + b in A; ties go to the smallest b.
ResidueSelection select_residue(std::span<const std::uint64_t> A, const Tuple& t,
                                std::uint64_t W, std::uint64_t N);

// f_A(x) = c0 (phi(W) log N / W)^k 1_A(Wx + b) on the support window.
struct IndicatorTable {
    std::uint64_t N = 0;
    double value = 0.0;
    std::vector<std::uint64_t> positions;

    double mean() const;
    double at(std::int64_t x) const;
    std::vector<double> dense() const;  // index x - 1 for x in [1, N]
};

IndicatorTable build_f_A(std::span<const std::uint64_t> A, const SieveContext& ctx);

// Parameter chain: w = max(2, floor(log log log N')) unless overridden,
// W = prod_{p <= w} p, N = floor(N'/W), eta0 = min(eps0/2, 1/(4 k Jmax + 1))/2,
// c0 = eta0^k / 4^k / 2. Throws ConfigurationError on violated invariants.
SieveContext choose_parameters(const MaynardParams& params, unsigned j_max,
                               const ParameterOverrides& overrides = {});

// Newline-separated integers preceded by one JSON header line.
void export_A(const std::filesystem::path& path, std::span<const std::uint64_t> A,
              const MaynardParams& params);
struct ImportedA {
    MaynardParams params;
    std::vector<std::uint64_t> values;
};
ImportedA import_A(const std::filesystem::path& path);

}  // namespace bgp
