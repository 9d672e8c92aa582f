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

#include "bgp/local_factors.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "bgp/errors.hpp"

namespace bgp {

Integer LinearFormSystem::constant(std::size_t q) const {
    const std::size_t i = q % k(), j = q / k();
    return Integer(static_cast<unsigned long>(W)) * Integer(static_cast<long>(shifts[j])) +
           Integer(static_cast<long>(b)) + Integer(static_cast<long>(offsets[i]));
}

IntPolynomial LinearFormSystem::form(std::size_t q) const {
    std::vector<Integer> coefficients{constant(q), Integer(static_cast<unsigned long>(W))};
    return IntPolynomial::from_coefficients(coefficients);
}

std::vector<IntPolynomial> LinearFormSystem::forms() const {
    std::vector<IntPolynomial> out;
    for (std::size_t q = 0; q < form_count(); ++q) out.push_back(form(q));
    return out;
}

LinearFormSystem parse_form_system(std::string_view text) {
    LinearFormSystem sys;
    bool have_W = false, have_w = false;
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream fields(line);
        std::string key;
        if (!(fields >> key) || key[0] == '#') continue;
        std::vector<std::int64_t> values;
        std::int64_t v;
        while (fields >> v) values.push_back(v);
        if (!fields.eof()) throw DomainError("non-integer value on line '" + line + "'");
        auto single = [&]() {
            if (values.size() != 1) throw DomainError("key '" + key + "' takes one value");
            return values[0];
        };
        if (key == "W") {
            std::int64_t W = single();
            if (W < 1) throw DomainError("W must be positive");
            sys.W = static_cast<std::uint64_t>(W);
            have_W = true;
        } else if (key == "w") {
            std::int64_t w = single();
            if (w < 0) throw DomainError("w must be non-negative");
            sys.w = static_cast<std::uint64_t>(w);
            have_w = true;
        } else if (key == "b") {
            sys.b = single();
        } else if (key == "r") {
            sys.shifts = values;
        } else if (key == "h") {
            sys.offsets = values;
        } else {
            throw DomainError("unknown key '" + key + "' in form system");
        }
    }
    if (!have_W) throw DomainError("form system needs a W line");
    if (sys.shifts.empty() || sys.offsets.empty()) throw DomainError("form system needs r and h lines");
    if (!have_w) {
        // Largest prime dividing W.
        auto divisors = prime_divisors(sys.W);
        sys.w = divisors.empty() ? 1 : divisors.back();
    }
    return sys;
}

LinearFormSystem load_form_system(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DomainError("cannot open form system file " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_form_system(buffer.str());
}

Rational local_factor(std::span<const IntPolynomial> polys, std::uint64_t p) {
    if (polys.empty()) return Rational(1);
    const std::size_t D = polys.front().variables();
    for (const auto& poly : polys) {
        if (poly.variables() != D) throw DomainError("local_factor polys differ in dimension");
    }
    double cells = std::pow(static_cast<double>(p), static_cast<double>(D));
    if (cells > 1e7) throw CapacityError("local_factor enumeration p^D exceeds 10^7");

    std::vector<ModPPolynomial> reduced;
    for (const auto& poly : polys) reduced.push_back(ModPPolynomial::reduce(poly, p));

    std::vector<std::uint64_t> x(D, 0);
    std::uint64_t hits = 0, total = 0;
    for (;;) {
        ++total;
        bool all = std::all_of(reduced.begin(), reduced.end(),
                               [&](const ModPPolynomial& r) { return r.evaluate(x) == 0; });
        if (all) ++hits;
        std::size_t d = 0;
        while (d < D && ++x[d] == p) x[d++] = 0;
        if (d == D) break;
    }
    Rational out(Integer(static_cast<unsigned long>(hits)), Integer(static_cast<unsigned long>(total)));
    out.canonicalize();
    return out;
}

Rational linear_local_factor(const LinearFormSystem& sys, std::uint64_t mask, std::uint64_t p) {
    const std::uint64_t a = sys.W % p;
    std::optional<std::uint64_t> root;
    for (std::size_t q = 0; q < sys.form_count(); ++q) {
        if (!(mask >> q & 1)) continue;
        const std::uint64_t c = residue(sys.constant(q), p);
        if (a == 0) {
            if (c != 0) return Rational(0);
            continue;  // form vanishes identically mod p
        }
        const std::uint64_t r = mul_mod((p - c) % p, inverse_mod(a, p), p);
        if (root && *root != r) return Rational(0);
        root = r;
    }
    return root ? Rational(1, static_cast<unsigned long>(p)) : Rational(1);
}

const char* to_string(PrimeKind kind) {
    switch (kind) {
        case PrimeKind::Good: return "good";
        case PrimeKind::Bad: return "bad";
        case PrimeKind::Terrible: return "terrible";
        case PrimeKind::DegenerateSmallPrime: return "degenerate-small-prime";
    }
    return "?";
}

PrimeClass classify_prime(std::span<const IntPolynomial> polys, std::uint64_t p) {
    for (const auto& poly : polys) {
        if (poly.variables() != 1) {
            throw DomainError("classify_prime supports univariate polynomials or linear form systems");
        }
    }
    std::vector<ModPPolynomial> reduced;
    for (const auto& poly : polys) reduced.push_back(ModPPolynomial::reduce(poly, p));

    PrimeClass out;
    for (std::size_t i = 0; i < reduced.size(); ++i) {
        if (reduced[i].is_zero()) {
            out.kind = PrimeKind::Terrible;
            out.vanishing = i;
            out.obstruction = "polynomial " + std::to_string(i) + " vanishes identically";
            return out;
        }
    }
    for (std::size_t i = 0; i < reduced.size(); ++i) {
        if (reduced[i].degree() != 1) {
            out.kind = PrimeKind::Bad;
            out.nonlinear = i;
            out.obstruction = "polynomial " + std::to_string(i) + " is not linear mod p";
            return out;
        }
    }
    for (std::size_t i = 0; i < reduced.size(); ++i) {
        for (std::size_t j = i + 1; j < reduced.size(); ++j) {
            if (mod_p_gcd(reduced[i], reduced[j]).degree() > 0) {
                out.kind = PrimeKind::Bad;
                out.non_coprime_pair = {i, j};
                out.obstruction = "polynomials " + std::to_string(i) + " and " + std::to_string(j) +
                                  " share a factor";
                return out;
            }
        }
    }
    return out;
}

PrimeClass classify_prime(const LinearFormSystem& sys, std::uint64_t p) {
    PrimeClass out;
    if (sys.W % p == 0) {
        out.kind = PrimeKind::DegenerateSmallPrime;
        out.obstruction = "p divides W; every form is constant mod p";
        return out;
    }
    // W is a unit mod p, so each form is linear with one root; two forms share
    // a factor exactly when their constants agree mod p.
    std::map<std::uint64_t, std::size_t> seen;
    for (std::size_t q = 0; q < sys.form_count(); ++q) {
        auto [it, inserted] = seen.emplace(residue(sys.constant(q), p), q);
        if (!inserted) {
            out.kind = PrimeKind::Bad;
            out.non_coprime_pair = {it->second, q};
            out.obstruction = "forms " + std::to_string(it->second) + " and " + std::to_string(q) +
                              " coincide mod p";
            return out;
        }
    }
    return out;
}

BadPrimeSet bad_primes_linear(const LinearFormSystem& sys, std::uint64_t limit) {
    BadPrimeSet out;
    std::vector<Integer> differences;
    for (std::size_t q = 0; q < sys.form_count(); ++q) {
        for (std::size_t r = q + 1; r < sys.form_count(); ++r) {
            Integer d = abs(sys.constant(q) - sys.constant(r));
            if (d == 0) {
                out.degenerate_pairs.emplace_back(q, r);
            } else {
                differences.push_back(d);
            }
        }
    }
    for (std::uint64_t p : small_primes(limit)) {
        if (p <= sys.w) continue;
        bool divides = std::any_of(differences.begin(), differences.end(), [p](const Integer& d) {
            return mpz_divisible_ui_p(d.get_mpz_t(), static_cast<unsigned long>(p)) != 0;
        });
        if (divides) out.primes.push_back(p);
    }
    return out;
}

double bad_prime_sum(const LinearFormSystem& sys, std::uint64_t limit) {
    double total = 0.0;
    for (std::uint64_t p : bad_primes_linear(sys, limit).primes) total += 1.0 / static_cast<double>(p);
    return total;
}

Rational bad_prime_sum_exact(const LinearFormSystem& sys, std::uint64_t limit) {
    Rational total = 0;
    for (std::uint64_t p : bad_primes_linear(sys, limit).primes) {
        total += Rational(1, static_cast<unsigned long>(p));
    }
    total.canonicalize();
    return total;
}

namespace {

unsigned valuation(const Integer& n, std::uint64_t p) {
    if (n == 0) return ~0u;
    Integer m = abs(n);
    unsigned v = 0;
    while (mpz_divisible_ui_p(m.get_mpz_t(), static_cast<unsigned long>(p))) {
        mpz_divexact_ui(m.get_mpz_t(), m.get_mpz_t(), static_cast<unsigned long>(p));
        ++v;
    }
    return v;
}

Integer power(std::uint64_t p, unsigned e) {
    Integer out;
    mpz_ui_pow_ui(out.get_mpz_t(), static_cast<unsigned long>(p), e);
    return out;
}

}  // namespace

Rational alpha_density(std::span<const DivisibilityConstraint> constraints) {
    Integer M = 1;
    for (const auto& c : constraints) {
        if (c.modulus <= 0) throw DomainError("constraint modulus must be positive");
        mpz_lcm(M.get_mpz_t(), M.get_mpz_t(), c.modulus.get_mpz_t());
        if (M > 1'000'000'000) throw CapacityError("alpha_density lcm exceeds 10^9");
    }

    Rational alpha = 1;
    for (std::uint64_t p : prime_divisors(M.get_ui())) {
        // Each constraint at p becomes y = r (mod p^t), "always", or "never".
        std::vector<std::pair<unsigned, Integer>> classes;
        for (const auto& c : constraints) {
            const unsigned v = valuation(c.modulus, p);
            if (v == 0) continue;
            const unsigned s = valuation(c.coefficient, p);
            if (s >= v) {
                if (valuation(c.constant, p) >= v) continue;
                return Rational(0);
            }
            if (valuation(c.constant, p) < s) return Rational(0);
            const Integer ps = power(p, s);
            const Integer a = c.coefficient / ps, b = c.constant / ps;
            const unsigned t = v - s;
            const Integer pt = power(p, t);
            Integer inv, r;
            mpz_invert(inv.get_mpz_t(), a.get_mpz_t(), pt.get_mpz_t());
            r = -b * inv;
            mpz_fdiv_r(r.get_mpz_t(), r.get_mpz_t(), pt.get_mpz_t());
            classes.emplace_back(t, r);
        }
        if (classes.empty()) continue;
        auto finest = *std::max_element(classes.begin(), classes.end(),
                                        [](const auto& x, const auto& y) { return x.first < y.first; });
        for (const auto& [t, r] : classes) {
            Integer reduced;
            mpz_fdiv_r(reduced.get_mpz_t(), finest.second.get_mpz_t(), power(p, t).get_mpz_t());
            if (reduced != r) return Rational(0);
        }
        alpha /= Rational(power(p, finest.first));
    }
    alpha.canonicalize();
    return alpha;
}

LocalEstimatesReport verify_local_estimates(const LinearFormSystem& sys, std::uint64_t p_lo,
                                            std::uint64_t p_hi, std::uint64_t seed) {
    LocalEstimatesReport report;
    report.p_lo = p_lo;
    report.p_hi = p_hi;
    const std::size_t forms = sys.form_count();
    if (forms > 63) throw CapacityError("verify_local_estimates supports at most 63 forms");
    const auto all_forms = sys.forms();
    std::mt19937_64 rng(seed);

    for (std::uint64_t p : small_primes(p_hi)) {
        if (p < p_lo) continue;
        ++report.primes_checked;
        const PrimeClass cls = classify_prime(sys, p);

        std::set<std::uint64_t> masks;
        masks.insert(0);
        if (forms <= 10) {
            for (std::uint64_t m = 1; m < (std::uint64_t{1} << forms); ++m) masks.insert(m);
        } else {
            for (std::size_t q = 0; q < forms; ++q) masks.insert(std::uint64_t{1} << q);
            std::uniform_int_distribution<std::size_t> pick(0, forms - 1);
            std::uniform_int_distribution<int> size(2, 3);
            for (int s = 0; s < 100; ++s) {
                std::uint64_t m = 0;
                int want = size(rng);
                while (std::popcount(m) < want) m |= std::uint64_t{1} << pick(rng);
                masks.insert(m);
            }
        }

        for (std::uint64_t mask : masks) {
            ++report.subsets_checked;
            std::vector<IntPolynomial> selected;
            for (std::size_t q = 0; q < forms; ++q) {
                if (mask >> q & 1) selected.push_back(all_forms[q]);
            }
            const Rational cp = local_factor(selected, p);
            if (cp < 0 || cp > 1) report.all_in_unit_interval = false;
            const double value = cp.get_d();
            const double pd = static_cast<double>(p);
            const int size = std::popcount(mask);
            if (size == 0) {
                if (cp != 1) report.empty_subset_exact = false;
                continue;
            }
            if (cls.kind != PrimeKind::Terrible) {
                report.max_p_cp = std::max(report.max_p_cp, pd * value);
            }
            if (cls.kind != PrimeKind::Good) continue;
            if (size == 1) {
                Rational err = cp - Rational(1, static_cast<unsigned long>(p));
                report.max_p2_singleton_error =
                    std::max(report.max_p2_singleton_error, pd * pd * std::abs(err.get_d()));
            } else {
                report.max_p2_cp_multi = std::max(report.max_p2_cp_multi, pd * pd * value);
            }
        }
    }
    report.non_terrible_bounded = std::isfinite(report.max_p_cp);
    return report;
}

}  // namespace bgp
