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
#include <span>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace bgp {

using Integer = mpz_class;
using Rational = mpq_class;

// Least-prime-factor table for [0, limit], filled by a segmented sieve.
//
// Composite entries store their least prime factor (always <= sqrt(limit),
// so 16 bits suffice up to kMaxLimit); primes store 0 and are also kept in
// a sorted list.
class PrimeTable {
  public:
    static constexpr std::uint64_t kMaxLimit = 1'000'000'000;
    static constexpr std::uint64_t kSegmentSize = std::uint64_t{1} << 20;

    // Throws CapacityError unless 2 <= limit <= kMaxLimit.
    explicit PrimeTable(std::uint64_t limit);

    std::uint64_t limit() const { return limit_; }
    std::span<const std::uint32_t> primes() const { return primes_; }

    // Smallest prime factor of n, 2 <= n <= limit().
    std::uint64_t lpf(std::uint64_t n) const;
    bool is_prime(std::uint64_t n) const;

    // Number of primes <= x (x may exceed limit only if x <= limit()).
    std::size_t prime_count(std::uint64_t x) const;

  private:
    std::uint64_t limit_;
    std::vector<std::uint16_t> lpf_;
    std::vector<std::uint32_t> primes_;
};

// P^-(n): trial division by the table's primes, then a probable-prime test,
// then Pollard rho when n has no factor inside the table.
Integer smallest_prime_factor(const Integer& n, const PrimeTable& table);
std::uint64_t smallest_prime_factor(std::uint64_t n, const PrimeTable& table);

// Primality: table lookup inside the table, trial division + BPSW outside.
// Exact for n < 2^64.
bool is_prime(const Integer& n, const PrimeTable& table);
bool is_prime(const Integer& n);

struct PrimePower {
    Integer prime;
    unsigned exponent;
    bool operator==(const PrimePower&) const = default;
};

// Prime factorization in increasing prime order. n >= 1.
std::vector<PrimePower> factorize(const Integer& n, const PrimeTable& table);
int mobius(const Integer& n, const PrimeTable& table);
Integer euler_phi(const Integer& n, const PrimeTable& table);

// Product of the primes <= w (1 when w < 2).
std::uint64_t primorial(std::uint64_t w);
bool is_squarefree(std::uint64_t n);
std::vector<std::uint64_t> prime_divisors(std::uint64_t n);

std::uint64_t gcd_u64(std::uint64_t a, std::uint64_t b);
std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m);
std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t m);
// Inverse of a modulo m; throws DomainError when gcd(a, m) != 1.
std::uint64_t inverse_mod(std::uint64_t a, std::uint64_t m);
// Non-negative residue of a modulo m.
std::uint64_t residue(std::int64_t a, std::uint64_t m);
std::uint64_t residue(const Integer& a, std::uint64_t m);

// Primes in [2, limit] by a plain sieve; for small limits where building a
// PrimeTable is not worth it.
std::vector<std::uint64_t> small_primes(std::uint64_t limit);

// floor(sqrt(n)) and ceil(sqrt(n)) for n >= 0.
std::uint64_t isqrt(std::uint64_t n);
std::uint64_t ceil_sqrt(std::uint64_t n);

}  // namespace bgp
