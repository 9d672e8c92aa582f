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

#include "bgp/arith.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "bgp/errors.hpp"

namespace bgp {

PrimeTable::PrimeTable(std::uint64_t limit) : limit_(limit) {
    if (limit < 2 || limit > kMaxLimit) {
        throw CapacityError("sieve limit " + std::to_string(limit) + " outside [2, " +
                            std::to_string(kMaxLimit) + "]");
    }
    lpf_.assign(limit + 1, 0);

    const std::uint64_t root = isqrt(limit);
    const std::vector<std::uint64_t> base = small_primes(root);

    for (std::uint64_t lo = 0; lo <= limit; lo += kSegmentSize) {
        const std::uint64_t hi = std::min(limit + 1, lo + kSegmentSize);
        // Ascending primes: the first prime to touch an entry is its lpf.
        for (std::uint64_t p : base) {
            if (p * p >= hi) break;
            std::uint64_t start = std::max(p * p, (lo + p - 1) / p * p);
            for (std::uint64_t m = start; m < hi; m += p) {
                if (lpf_[m] == 0) lpf_[m] = static_cast<std::uint16_t>(p);
            }
        }
        for (std::uint64_t n = std::max<std::uint64_t>(lo, 2); n < hi; ++n) {
            if (lpf_[n] == 0) primes_.push_back(static_cast<std::uint32_t>(n));
        }
    }
}

std::uint64_t PrimeTable::lpf(std::uint64_t n) const {
    if (n < 2 || n > limit_) throw DomainError("lpf argument outside table range");
    return lpf_[n] == 0 ? n : lpf_[n];
}

bool PrimeTable::is_prime(std::uint64_t n) const {
    if (n > limit_) throw DomainError("is_prime argument outside table range");
    return n >= 2 && lpf_[n] == 0;
}

std::size_t PrimeTable::prime_count(std::uint64_t x) const {
    return static_cast<std::size_t>(
        std::upper_bound(primes_.begin(), primes_.end(), static_cast<std::uint64_t>(x),
                         [](std::uint64_t v, std::uint32_t p) { return v < p; }) -
        primes_.begin());
}

namespace {

bool fits_u64(const Integer& n) {
    return sgn(n) >= 0 && mpz_sizeinbase(n.get_mpz_t(), 2) <= 64;
}

std::uint64_t to_u64(const Integer& n) {
    std::uint64_t out = 0;
    mpz_export(&out, nullptr, -1, sizeof(out), 0, 0, n.get_mpz_t());
    return out;
}

Integer from_u64(std::uint64_t v) {
    Integer out;
    mpz_import(out.get_mpz_t(), 1, -1, sizeof(v), 0, 0, &v);
    return out;
}

// Brent's variant of Pollard rho. n must be odd and composite.
Integer pollard_rho(const Integer& n) {
    for (unsigned long c = 1;; ++c) {
        Integer y = 2, x, q = 1, g = 1, ys;
        std::uint64_t r = 1;
        auto step = [&](const Integer& v) {
            Integer t = v * v + c;
            mpz_mod(t.get_mpz_t(), t.get_mpz_t(), n.get_mpz_t());
            return t;
        };
        do {
            x = y;
            for (std::uint64_t i = 0; i < r; ++i) y = step(y);
            std::uint64_t k = 0;
            while (k < r && g == 1) {
                ys = y;
                for (std::uint64_t i = 0; i < std::min<std::uint64_t>(128, r - k); ++i) {
                    y = step(y);
                    Integer diff = abs(x - y);
                    q = q * diff % n;
                }
                g = gcd(q, n);
                k += 128;
            }
            r *= 2;
        } while (g == 1);
        if (g == n) {
            do {
                ys = step(ys);
                g = gcd(Integer(abs(x - ys)), n);
            } while (g == 1);
        }
        if (g != n) return g;
    }
}

// Appends the prime factors (with multiplicity) of n, which has no prime
// factor <= bound.
void split_large(const Integer& n, std::vector<Integer>& out) {
    if (n == 1) return;
    if (is_prime(n)) {
        out.push_back(n);
        return;
    }
    Integer f = pollard_rho(n);
    split_large(f, out);
    split_large(Integer(n / f), out);
}

}  // namespace

bool is_prime(const Integer& n) {
    if (n < 2) return false;
    return mpz_probab_prime_p(n.get_mpz_t(), 30) > 0;
}

bool is_prime(const Integer& n, const PrimeTable& table) {
    if (n < 2) return false;
    if (fits_u64(n)) {
        std::uint64_t v = to_u64(n);
        if (v <= table.limit()) return table.is_prime(v);
    }
    return is_prime(n);
}

std::uint64_t smallest_prime_factor(std::uint64_t n, const PrimeTable& table) {
    Integer p = smallest_prime_factor(from_u64(n), table);
    return to_u64(p);
}

Integer smallest_prime_factor(const Integer& n, const PrimeTable& table) {
    if (n < 2) throw DomainError("smallest_prime_factor requires n >= 2");
    if (fits_u64(n)) {
        std::uint64_t v = to_u64(n);
        if (v <= table.limit()) return from_u64(table.lpf(v));
    }
    for (std::uint32_t p : table.primes()) {
        Integer pp = static_cast<unsigned long>(p);
        if (pp * pp > n) return n;
        if (mpz_divisible_ui_p(n.get_mpz_t(), p)) return pp;
    }
    if (is_prime(n)) return n;
    std::vector<Integer> factors;
    split_large(n, factors);
    return *std::min_element(factors.begin(), factors.end());
}

std::vector<PrimePower> factorize(const Integer& n_in, const PrimeTable& table) {
    if (n_in < 1) throw DomainError("factorize requires n >= 1");
    std::vector<PrimePower> out;
    auto push = [&out](const Integer& p) {
        if (!out.empty() && out.back().prime == p) {
            ++out.back().exponent;
        } else {
            out.push_back({p, 1});
        }
    };

    Integer n = n_in;
    if (fits_u64(n) && to_u64(n) <= table.limit()) {
        std::uint64_t v = to_u64(n);
        while (v > 1) {
            std::uint64_t p = table.lpf(v);
            push(from_u64(p));
            v /= p;
        }
        return out;
    }

    for (std::uint32_t p : table.primes()) {
        Integer pp = static_cast<unsigned long>(p);
        if (pp * pp > n) break;
        while (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
            push(pp);
            mpz_divexact_ui(n.get_mpz_t(), n.get_mpz_t(), p);
        }
        if (fits_u64(n) && to_u64(n) <= table.limit()) {
            std::uint64_t v = to_u64(n);
            while (v > 1) {
                std::uint64_t q = table.lpf(v);
                push(from_u64(q));
                v /= q;
            }
            return out;
        }
    }
    if (n == 1) return out;

    const std::uint64_t last = table.primes().empty() ? 1 : table.primes().back();
    Integer bound = static_cast<unsigned long>(last);
    if (bound * bound >= n || is_prime(n)) {
        push(n);
        return out;
    }
    std::vector<Integer> rest;
    split_large(n, rest);
    std::sort(rest.begin(), rest.end());
    for (const Integer& p : rest) push(p);
    return out;
}

int mobius(const Integer& n, const PrimeTable& table) {
    int sign = 1;
    for (const PrimePower& pp : factorize(n, table)) {
        if (pp.exponent > 1) return 0;
        sign = -sign;
    }
    return sign;
}

Integer euler_phi(const Integer& n, const PrimeTable& table) {
    Integer phi = 1;
    for (const PrimePower& pp : factorize(n, table)) {
        Integer pk;
        mpz_pow_ui(pk.get_mpz_t(), pp.prime.get_mpz_t(), pp.exponent - 1);
        phi *= pk * (pp.prime - 1);
    }
    return phi;
}

std::uint64_t primorial(std::uint64_t w) {
    std::uint64_t product = 1;
    for (std::uint64_t p : small_primes(w)) {
        if (product > std::numeric_limits<std::uint64_t>::max() / p) {
            throw CapacityError("primorial overflows 64 bits");
        }
        product *= p;
    }
    return product;
}

std::vector<std::uint64_t> prime_divisors(std::uint64_t n) {
    std::vector<std::uint64_t> out;
    for (std::uint64_t p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            out.push_back(p);
            while (n % p == 0) n /= p;
        }
    }
    if (n > 1) out.push_back(n);
    return out;
}

bool is_squarefree(std::uint64_t n) {
    if (n == 0) return false;
    for (std::uint64_t p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            n /= p;
            if (n % p == 0) return false;
        }
    }
    return true;
}

std::uint64_t gcd_u64(std::uint64_t a, std::uint64_t b) {
    while (b != 0) {
        std::uint64_t t = a % b;
        a = b;
        b = t;
    }
    return a;
}

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
    std::uint64_t result = 1 % m;
    base %= m;
    while (exp > 0) {
        if (exp & 1) result = mul_mod(result, base, m);
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    return result;
}

std::uint64_t inverse_mod(std::uint64_t a, std::uint64_t m) {
    std::int64_t old_r = static_cast<std::int64_t>(a % m), r = static_cast<std::int64_t>(m);
    std::int64_t old_s = 1, s = 0;
    while (r != 0) {
        std::int64_t q = old_r / r;
        std::int64_t t = old_r - q * r;
        old_r = r;
        r = t;
        t = old_s - q * s;
        old_s = s;
        s = t;
    }
    if (old_r != 1) throw DomainError("element is not invertible modulo m");
    return residue(old_s, m);
}

std::uint64_t residue(std::int64_t a, std::uint64_t m) {
    const std::int64_t mm = static_cast<std::int64_t>(m);
    std::int64_t r = a % mm;
    return static_cast<std::uint64_t>(r < 0 ? r + mm : r);
}

std::uint64_t residue(const Integer& a, std::uint64_t m) {
    // mpz_fdiv_ui returns the non-negative remainder for positive m.
    if (m <= std::numeric_limits<unsigned long>::max()) {
        return mpz_fdiv_ui(a.get_mpz_t(), static_cast<unsigned long>(m));
    }
    Integer r;
    mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), from_u64(m).get_mpz_t());
    return to_u64(r);
}

std::vector<std::uint64_t> small_primes(std::uint64_t limit) {
    std::vector<std::uint64_t> out;
    if (limit < 2) return out;
    std::vector<bool> composite(limit + 1, false);
    for (std::uint64_t n = 2; n <= limit; ++n) {
        if (composite[n]) continue;
        out.push_back(n);
        for (std::uint64_t m = n * n; m <= limit; m += n) composite[m] = true;
    }
    return out;
}

std::uint64_t isqrt(std::uint64_t n) {
    auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<long double>(n)));
    while (r > 0 && r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

std::uint64_t ceil_sqrt(std::uint64_t n) {
    std::uint64_t r = isqrt(n);
    return r * r == n ? r : r + 1;
}

}  // namespace bgp
