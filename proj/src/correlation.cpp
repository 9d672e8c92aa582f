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

#include "bgp/correlation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "bgp/errors.hpp"
#include "bgp/numeric.hpp"

namespace bgp {

namespace {

Complex prime_power(std::uint64_t p, Complex s) {
    return std::exp(-s * std::log(static_cast<double>(p)));
}

// Grid [H]^d in odometer order, first coordinate fastest.
std::vector<std::vector<Integer>> grid_points(std::uint64_t H, std::size_t d) {
    std::vector<std::vector<Integer>> out;
    std::vector<std::uint64_t> l(d, 1);
    for (;;) {
        std::vector<Integer> point;
        for (auto v : l) point.emplace_back(static_cast<unsigned long>(v));
        out.push_back(std::move(point));
        std::size_t i = 0;
        while (i < d && ++l[i] > H) l[i++] = 1;
        if (i == d) break;
    }
    return out;
}

std::int64_t to_i64(const Integer& v, const char* what) {
    if (!v.fits_slong_p()) throw CapacityError(std::string(what) + " exceeds 64-bit range");
    return v.get_si();
}

// E_{x in [N]} prod_j values[x + s_j - lo], with the first factor as the
// starting product so that a single shift reproduces the plain mean.
double shifted_product_mean(std::span<const double> values, std::int64_t lo,
                            std::span<const std::int64_t> shifts, std::uint64_t N) {
    std::vector<double> products(N);
    for (std::uint64_t x = 1; x <= N; ++x) {
        const std::int64_t base = static_cast<std::int64_t>(x) - lo;
        double prod = values[static_cast<std::size_t>(base + shifts[0])];
        for (std::size_t j = 1; j < shifts.size(); ++j) {
            prod *= values[static_cast<std::size_t>(base + shifts[j])];
        }
        products[x - 1] = prod;
    }
    return pairwise_sum(products) / static_cast<double>(N);
}

}  // namespace

ZMatrix ZMatrix::uniform(std::size_t k, std::size_t J, double log_R, double xi, double xi_prime) {
    std::vector<double> a(k * J, xi), b(k * J, xi_prime);
    return from_xi(k, J, log_R, a, b);
}

ZMatrix ZMatrix::from_xi(std::size_t k, std::size_t J, double log_R, std::span<const double> xi,
                         std::span<const double> xi_prime) {
    if (!(log_R > 0.0)) throw DomainError("ZMatrix needs log R > 0");
    if (xi.size() != k * J || xi_prime.size() != k * J) {
        throw DomainError("ZMatrix needs k*J frequencies for z and z'");
    }
    ZMatrix out;
    out.k = k;
    out.J = J;
    for (std::size_t q = 0; q < k * J; ++q) {
        out.z.emplace_back(1.0 / log_R, xi[q] / log_R);
        out.z_prime.emplace_back(1.0 / log_R, xi_prime[q] / log_R);
    }
    return out;
}

void ZMatrix::validate() const {
    if (z.size() != k * J || z_prime.size() != k * J) throw DomainError("ZMatrix size mismatch");
    if (z.empty()) return;
    const double re = z.front().real();
    if (!(re > 0.0)) throw DomainError("ZMatrix real parts must be positive");
    for (std::size_t q = 0; q < z.size(); ++q) {
        if (z[q].real() != re || z_prime[q].real() != re) {
            throw DomainError("ZMatrix real parts must all equal 1/log R");
        }
    }
}

LinearFormSystem form_system(const SieveContext& ctx, std::span<const std::int64_t> shifts) {
    LinearFormSystem sys;
    sys.W = ctx.W;
    sys.w = ctx.w;
    sys.b = static_cast<std::int64_t>(ctx.residue());
    sys.shifts.assign(shifts.begin(), shifts.end());
    sys.offsets = ctx.params.tuple.values();
    return sys;
}

CorrelationReport empirical_correlation(const NuEvaluator& ev, std::span<const std::int64_t> shifts,
                                        std::uint64_t N, std::uint64_t bad_prime_limit,
                                        unsigned threads) {
    const auto start = std::chrono::steady_clock::now();
    if (shifts.empty()) throw DomainError("empirical_correlation needs at least one shift");
    if (N == 0) throw DomainError("empirical_correlation requires N >= 1");
    const SieveContext& ctx = ev.context();

    CorrelationReport report;
    report.shifts.assign(shifts.begin(), shifts.end());
    report.N = N;

    const auto [rmin, rmax] = std::minmax_element(shifts.begin(), shifts.end());
    const std::int64_t lo = 1 + std::min<std::int64_t>(0, *rmin);
    const std::int64_t hi = static_cast<std::int64_t>(N) + std::max<std::int64_t>(0, *rmax);
    const auto values = nu_bulk(lo, hi, ev, threads);
    report.average = shifted_product_mean(values, lo, shifts, N);

    const auto sys = form_system(ctx, shifts);
    report.bad_prime_limit = bad_prime_limit;
    report.bad_primes = bad_primes_linear(sys, bad_prime_limit).primes;
    for (auto p : report.bad_primes) report.bad_prime_sum += 1.0 / static_cast<double>(p);
    report.correction_magnitude = std::expm1(report.bad_prime_sum);

    const double kJ = static_cast<double>(sys.form_count());
    report.size_condition_met =
        std::log(static_cast<double>(N)) >= (4.0 * kJ + 1.0) * ev.log_R();
    const double reach = static_cast<double>(std::max(std::abs(*rmin), std::abs(*rmax)));
    report.edge_fraction = reach / static_cast<double>(N);
    report.runtime_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

Complex euler_factor_Ep(const LinearFormSystem& sys, std::uint64_t p, const ZMatrix& z) {
    const std::size_t forms = sys.form_count();
    if (z.size() != forms) throw DomainError("ZMatrix does not match the form system");
    if (forms > 8) throw CapacityError("euler_factor_Ep supports kJ <= 8");

    std::vector<Complex> a(forms), b(forms), ab(forms);
    for (std::size_t q = 0; q < forms; ++q) {
        a[q] = prime_power(p, z.z[q]);
        b[q] = prime_power(p, z.z_prime[q]);
        ab[q] = prime_power(p, z.z[q] + z.z_prime[q]);
    }
    std::vector<double> cp(std::size_t{1} << forms, -1.0);

    Complex total = 0.0;
    const std::uint64_t choices = std::uint64_t{1} << (2 * forms);
    for (std::uint64_t choice = 0; choice < choices; ++choice) {
        Complex term = 1.0;
        std::uint64_t mask = 0;
        for (std::size_t q = 0; q < forms; ++q) {
            switch ((choice >> (2 * q)) & 3) {
                case 0: break;
                case 1: term *= -a[q]; break;
                case 2: term *= -b[q]; break;
                case 3: term *= ab[q]; break;
            }
            if ((choice >> (2 * q)) & 3) mask |= std::uint64_t{1} << q;
        }
        if (cp[mask] < 0.0) cp[mask] = linear_local_factor(sys, mask, p).get_d();
        if (cp[mask] == 0.0) continue;
        total += term * cp[mask];
    }
    return total;
}

Complex euler_factor_Ep_prime(std::uint64_t p, const ZMatrix& z) {
    Complex out = 1.0;
    for (std::size_t q = 0; q < z.size(); ++q) {
        out *= (1.0 - prime_power(p, 1.0 + z.z[q])) * (1.0 - prime_power(p, 1.0 + z.z_prime[q])) /
               (1.0 - prime_power(p, 1.0 + z.z[q] + z.z_prime[q]));
    }
    return out;
}

EulerProductReport euler_product_experiment(const LinearFormSystem& sys, const ZMatrix& z,
                                            std::span<const std::uint64_t> checkpoints,
                                            std::uint64_t p_min) {
    z.validate();
    static constexpr std::uint64_t kDefault[] = {100, 1000, 10000, 100000};
    if (checkpoints.empty()) checkpoints = kDefault;
    if (!std::is_sorted(checkpoints.begin(), checkpoints.end())) {
        throw DomainError("checkpoints must be ascending");
    }

    EulerProductReport report;
    std::uint64_t phi = sys.W;
    for (auto p : prime_divisors(sys.W)) phi = phi / p * (p - 1);
    report.target = std::pow(static_cast<double>(sys.W) / static_cast<double>(phi),
                             static_cast<double>(sys.form_count()));

    const std::uint64_t P_max = checkpoints.back();
    const auto bad = bad_primes_linear(sys, P_max).primes;
    auto next_bad = bad.begin();
    double bad_sum = 0.0;

    Complex product = 1.0;
    std::size_t next = 0;
    auto record = [&](std::uint64_t P) {
        EulerCheckpoint cp;
        cp.P = P;
        cp.product = product;
        cp.distance = std::abs(product - report.target);
        if (!report.checkpoints.empty()) cp.difference = std::abs(product - report.checkpoints.back().product);
        cp.bad_prime_sum = bad_sum;
        report.checkpoints.push_back(cp);
    };
    for (std::uint64_t p : small_primes(P_max)) {
        while (next < checkpoints.size() && checkpoints[next] < p) record(checkpoints[next++]);
        while (next_bad != bad.end() && *next_bad <= p) bad_sum += 1.0 / static_cast<double>(*next_bad++);
        if (p < p_min) continue;
        product *= euler_factor_Ep(sys, p, z) / euler_factor_Ep_prime(p, z);
    }
    while (next < checkpoints.size()) record(checkpoints[next++]);

    for (std::size_t i = 0; i < report.checkpoints.size(); ++i) {
        const auto& cp = report.checkpoints[i];
        if (!std::isfinite(cp.product.real()) || !std::isfinite(cp.product.imag())) report.bounded = false;
        if (i >= 2 && !(cp.difference < report.checkpoints[i - 1].difference)) {
            report.differences_decreasing = false;
        }
    }
    return report;
}

PolyFormsReport polynomial_forms_average(const NuEvaluator& ev, std::span<const IntPolynomial> Q,
                                         std::uint64_t H, std::uint64_t N,
                                         std::uint64_t bad_prime_limit, double budget,
                                         unsigned threads) {
    if (Q.empty()) throw DomainError("polynomial_forms_average needs at least one polynomial");
    if (H == 0 || N == 0) throw DomainError("polynomial_forms_average needs H, N >= 1");
    const std::size_t d = Q.front().variables();
    for (const auto& q : Q) {
        if (q.variables() != d) throw DomainError("polynomials differ in number of variables");
    }
    for (std::size_t i = 0; i < Q.size(); ++i) {
        for (std::size_t j = i + 1; j < Q.size(); ++j) {
            if ((Q[i] - Q[j]).is_constant()) {
                throw DomainError("Q_" + std::to_string(i + 1) + " - Q_" + std::to_string(j + 1) +
                                  " is constant");
            }
        }
    }
    const double G = std::pow(static_cast<double>(H), static_cast<double>(d));
    if (G * static_cast<double>(N) * static_cast<double>(Q.size()) > budget) {
        throw CapacityError("H^d * N * J exceeds the evaluation budget");
    }

    const auto points = grid_points(H, d);
    std::vector<std::vector<std::int64_t>> shifts(points.size());
    std::int64_t smin = 0, smax = 0;
    for (std::size_t g = 0; g < points.size(); ++g) {
        for (const auto& q : Q) {
            const std::int64_t s = to_i64(q.evaluate(points[g]), "Q_j(l)");
            shifts[g].push_back(s);
            smin = std::min(smin, s);
            smax = std::max(smax, s);
        }
    }
    const std::int64_t lo = 1 + smin;
    const auto values = nu_bulk(lo, static_cast<std::int64_t>(N) + smax, ev, threads);

    PolyFormsReport report;
    report.N = N;
    report.H = H;
    report.dimension = d;
    report.grid_points = points.size();
    report.per_point.assign(points.size(), 0.0);
    parallel_for_chunks(points.size(), threads, [&](std::size_t g) {
        report.per_point[g] = shifted_product_mean(values, lo, shifts[g], N);
    });
    report.average = pairwise_sum(report.per_point) / static_cast<double>(points.size());

    // S(i,j,i',j',l) over i, i' and j < j'.
    const SieveContext& ctx = ev.context();
    const auto& h = ctx.params.tuple.values();
    report.bad_prime_limit = bad_prime_limit;
    std::vector<std::uint64_t> primes;
    for (auto p : small_primes(bad_prime_limit)) {
        if (p > ctx.w) primes.push_back(p);
    }
    double all_primes = 0.0;
    for (auto p : primes) all_primes += 1.0 / static_cast<double>(p);
    std::vector<double> per_point_bad(points.size(), 0.0);
    const Integer W(static_cast<unsigned long>(ctx.W));
    for (std::size_t g = 0; g < points.size(); ++g) {
        double s = 0.0;
        for (std::size_t j = 0; j < Q.size(); ++j) {
            for (std::size_t jj = j + 1; jj < Q.size(); ++jj) {
                for (auto hi : h) {
                    for (auto hii : h) {
                        Integer diff = W * (Integer(static_cast<long>(shifts[g][j])) -
                                            Integer(static_cast<long>(shifts[g][jj]))) +
                                       Integer(static_cast<long>(hi - hii));
                        if (diff == 0) {
                            s += all_primes;
                            continue;
                        }
                        for (auto p : primes) {
                            if (mpz_divisible_ui_p(diff.get_mpz_t(), static_cast<unsigned long>(p))) {
                                s += 1.0 / static_cast<double>(p);
                            }
                        }
                    }
                }
            }
        }
        per_point_bad[g] = s;
    }
    report.bad_prime_diagnostic = pairwise_sum(per_point_bad) / static_cast<double>(points.size());
    return report;
}

TidySumReport tidy_sum(const IntPolynomial& delta_q, std::uint64_t H, std::uint64_t limit, double c,
                       std::uint64_t w) {
    if (delta_q.is_zero()) throw DomainError("tidy_sum: delta Q is identically zero");
    if (H == 0) throw DomainError("tidy_sum needs H >= 1");

    TidySumReport report;
    const Integer content = delta_q.content();
    std::vector<std::uint64_t> primes;
    for (auto p : small_primes(limit)) {
        if (p <= w) continue;
        if (mpz_divisible_ui_p(content.get_mpz_t(), static_cast<unsigned long>(p))) {
            report.vanishing_primes.push_back(p);
            report.vanishing_sum += 1.0 / static_cast<double>(p);
        } else {
            primes.push_back(p);
        }
    }
    std::vector<double> weight;
    for (auto p : primes) {
        const double lp = std::log(static_cast<double>(p));
        weight.push_back(std::pow(lp, c) / static_cast<double>(p));
    }

    const auto points = grid_points(H, delta_q.variables());
    std::vector<double> per_point(points.size(), 0.0);
    for (std::size_t g = 0; g < points.size(); ++g) {
        const Integer v = delta_q.evaluate(points[g]);
        double s = 0.0;
        for (std::size_t i = 0; i < primes.size(); ++i) {
            if (v == 0 || mpz_divisible_ui_p(v.get_mpz_t(), static_cast<unsigned long>(primes[i]))) {
                s += weight[i];
            }
        }
        per_point[g] = s;
    }
    report.value = pairwise_sum(per_point) / static_cast<double>(points.size());
    return report;
}

}  // namespace bgp
