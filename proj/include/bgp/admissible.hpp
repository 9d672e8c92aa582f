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
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace bgp {

// Sorted set of distinct non-negative shifts h_1 < ... < h_k.
class Tuple {
  public:
    Tuple() = default;
    // Throws DomainError unless the values are non-negative, distinct and
    // strictly increasing.
    explicit Tuple(std::vector<std::int64_t> values);

    std::size_t k() const { return h_.size(); }
    std::int64_t diameter() const { return h_.empty() ? 0 : h_.back() - h_.front(); }
    const std::vector<std::int64_t>& values() const { return h_; }
    std::int64_t operator[](std::size_t i) const { return h_[i]; }
    bool operator==(const Tuple&) const = default;

  private:
    std::vector<std::int64_t> h_;
};

// One whitespace-separated line; rejects duplicates and unsorted input.
Tuple parse_tuple(std::string_view text);
std::string format_tuple(const Tuple& t);
Tuple load_tuple_file(const std::filesystem::path& path);
void save_tuple_file(const std::filesystem::path& path, const Tuple& t);

struct AdmissibilityResult {
    bool admissible = false;
    // p -> smallest residue a_p missed by every h_i, for each prime p <= k.
    std::map<std::uint64_t, std::uint64_t> witness;
    // The prime whose residue classes are all covered, when inadmissible.
    std::optional<std::uint64_t> covering_prime;
};

// Only primes p <= k are examined: k shifts occupy at most k < p classes
// modulo any larger prime, so such p can never be covered.
AdmissibilityResult is_admissible(const Tuple& t);

// Residues b mod p with b != -h_i (mod p) for every i.
std::vector<std::uint64_t> omega_H(const Tuple& t, std::uint64_t p);

// Residues b mod W with b != -h_i (mod p) for every p | W, built by CRT
// from the omega_H sets. W must be squarefree.
std::vector<std::uint64_t> enumerate_X_W(const Tuple& t, std::uint64_t W);

struct NarrowTupleSearch {
    std::optional<Tuple> tuple;
    std::uint64_t steps = 0;
};

// Looks for an admissible k-tuple with diameter <= max_diameter.
//
// Seed: the first k primes above k, shifted to start at 0 (admissible since
// none of them is divisible by a prime <= k). If the seed is too wide, a
// residue-class local search runs on the window [0, max_diameter]: each
// prime p <= k deletes one class a_p, and the survivors of all deletions
// form an admissible set. Moves change one a_p; the sweep visits (p, a)
// lexicographically and takes the first non-worsening move, with seeded
// perturbations when a full sweep makes no progress. Deterministic for a
// given (k, max_diameter, budget, seed).
NarrowTupleSearch search_narrow_tuple(std::size_t k, std::int64_t max_diameter,
                                      std::uint64_t budget, std::uint64_t seed = 0);

}  // namespace bgp
