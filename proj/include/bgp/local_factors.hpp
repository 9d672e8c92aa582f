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
#include <string>
#include <utility>
#include <vector>

#include "bgp/arith.hpp"
#include "bgp/polynomial.hpp"

namespace bgp {

// The kJ linear forms P_ij(x) = W (x + r_j) + b + h_i, indexed by
// form_index(i, j) = j * k + i.
struct LinearFormSystem {
    std::uint64_t W = 1;
    std::uint64_t w = 1;   // primes <= w divide W
    std::int64_t b = 0;
    std::vector<std::int64_t> shifts;   // r_j
    std::vector<std::int64_t> offsets;  // h_i

    std::size_t k() const { return offsets.size(); }
    std::size_t J() const { return shifts.size(); }
    std::size_t form_count() const { return k() * J(); }
    std::size_t form_index(std::size_t i, std::size_t j) const { return j * k() + i; }
    // W r_j + b + h_i for form q.
    Integer constant(std::size_t q) const;
    IntPolynomial form(std::size_t q) const;
    std::vector<IntPolynomial> forms() const;
};

// Text format, one key per line: "W 30", "w 5", "b 11", "r 0 1 5", "h 0 2 6".
LinearFormSystem parse_form_system(std::string_view text);
LinearFormSystem load_form_system(const std::string& path);

// c_p = #{x in F_p^D : all polys vanish mod p} / p^D, by enumeration.
// Empty list gives 1. Throws CapacityError when p^D > 10^7.
Rational local_factor(std::span<const IntPolynomial> polys, std::uint64_t p);

// Same density for the forms of `sys` selected by `mask` (bit q = form q),
// computed by intersecting roots of the linear congruences.
Rational linear_local_factor(const LinearFormSystem& sys, std::uint64_t mask, std::uint64_t p);

enum class PrimeKind { Good, Bad, Terrible, DegenerateSmallPrime };

const char* to_string(PrimeKind kind);

struct PrimeClass {
    PrimeKind kind = PrimeKind::Good;
    std::string obstruction;
    std::optional<std::pair<std::size_t, std::size_t>> non_coprime_pair;
    std::optional<std::size_t> vanishing;
    std::optional<std::size_t> nonlinear;

    // Terrible primes are bad as well.
    bool is_bad() const { return kind == PrimeKind::Bad || kind == PrimeKind::Terrible; }
};

// Univariate classification: terrible if some poly vanishes mod p, else good
// iff every poly is linear (non-zero x coefficient) mod p and the reductions
// are pairwise coprime. Multivariate input throws DomainError.
PrimeClass classify_prime(std::span<const IntPolynomial> polys, std::uint64_t p);
// Linear-form specialization; p | W reports DegenerateSmallPrime.
PrimeClass classify_prime(const LinearFormSystem& sys, std::uint64_t p);

struct BadPrimeSet {
    std::vector<std::uint64_t> primes;
    // Form pairs with identical constants; with such a pair every prime is bad.
    std::vector<std::pair<std::size_t, std::size_t>> degenerate_pairs;
};

// Primes in (w, limit] dividing a non-zero difference of form constants.
BadPrimeSet bad_primes_linear(const LinearFormSystem& sys, std::uint64_t limit);
double bad_prime_sum(const LinearFormSystem& sys, std::uint64_t limit);
Rational bad_prime_sum_exact(const LinearFormSystem& sys, std::uint64_t limit);

// modulus | coefficient * y + constant
struct DivisibilityConstraint {
    Integer modulus;
    Integer coefficient;
    Integer constant;
};

// Density over Z_M (M = lcm of moduli) of y meeting every constraint,
// computed one prime power at a time and multiplied (CRT). M <= 10^9.
Rational alpha_density(std::span<const DivisibilityConstraint> constraints);

struct LocalEstimatesReport {
    std::uint64_t p_lo = 0, p_hi = 0;
    std::uint64_t primes_checked = 0;
    std::uint64_t subsets_checked = 0;
    bool empty_subset_exact = true;          // (a)
    bool non_terrible_bounded = true;        // (b): p c_p finite and <= 1 * |S| bound observed
    double max_p_cp = 0.0;                   // (b) over non-terrible p, |S| >= 1
    double max_p2_singleton_error = 0.0;     // (c) over good p, |S| = 1
    double max_p2_cp_multi = 0.0;            // (d) over good p, |S| > 1
    bool all_in_unit_interval = true;
};

// Lemma checks over the primes in [p_lo, p_hi] not dividing W: all subsets
// when kJ <= 10, otherwise all singletons plus 100 sampled subsets of size
// <= 3 per prime (seeded).
LocalEstimatesReport verify_local_estimates(const LinearFormSystem& sys, std::uint64_t p_lo,
                                            std::uint64_t p_hi, std::uint64_t seed = 0);

}  // namespace bgp
