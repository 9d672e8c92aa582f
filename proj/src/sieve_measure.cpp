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

#include "bgp/sieve_measure.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "bgp/errors.hpp"
#include "bgp/numeric.hpp"

namespace bgp {

namespace {
// exp(1/(t^2-1)) underflows long before this; avoids dividing by ~0.
constexpr double kEdgeGuard = 1e-12;
}  // namespace

CutoffFunction::CutoffFunction(double normalization) : D_(normalization) {
    if (!(normalization > 0.0)) throw DomainError("chi normalization must be positive");
}

double CutoffFunction::operator()(double t) const {
    if (std::abs(t) >= 1.0 - kEdgeGuard) return 0.0;
    return D_ * std::exp(1.0 / (t * t - 1.0));
}

double CutoffFunction::derivative(double t) const {
    if (std::abs(t) >= 1.0 - kEdgeGuard) return 0.0;
    const double q = t * t - 1.0;
    return D_ * std::exp(1.0 / q) * (-2.0 * t / (q * q));
}

double CutoffFunction::at_zero() const { return D_ / std::numbers::e; }

double bump_derivative_squared(double t) {
    if (std::abs(t) >= 1.0 - kEdgeGuard) return 0.0;
    const double q = t * t - 1.0;
    const double d = std::exp(1.0 / q) * (-2.0 * t / (q * q));
    return d * d;
}

CutoffFunction normalize_chi() {
    const QuadratureResult energy = integrate_adaptive(bump_derivative_squared, 0.0, 1.0, 1e-10);
    CutoffFunction chi(1.0 / std::sqrt(energy.value));
    if (!(chi.at_zero() > 0.5)) throw NumericError("normalized chi(0) is not above 1/2");
    return chi;
}

NuEvaluator::NuEvaluator(const SieveContext& ctx, CutoffFunction chi)
    : ctx_(ctx), chi_(chi), log_R_(ctx.log_R()) {
    ctx_.residue();
    if (!(ctx_.R >= 2.0)) throw ConfigurationError("nu requires R >= 2");
    scale_ = std::pow(static_cast<double>(ctx_.phi_W) * log_R_ / static_cast<double>(ctx_.W),
                      static_cast<double>(ctx_.k()));
    for (std::uint64_t p : small_primes(static_cast<std::uint64_t>(std::floor(ctx_.R)))) {
        if (static_cast<double>(p) < ctx_.R) primes_.push_back(p);
    }
}

double NuEvaluator::rough_value() const {
    const double c = chi_.at_zero();
    return scale_ * std::pow(c * c, static_cast<double>(ctx_.k()));
}

namespace {

void divisor_walk(std::span<const std::uint64_t> primes, std::size_t start, double d, double sign,
                  double R, double log_R, const CutoffFunction& chi, double& total) {
    total += sign * chi(std::log(d) / log_R);
    for (std::size_t i = start; i < primes.size(); ++i) {
        const double next = d * static_cast<double>(primes[i]);
        if (next >= R) break;  // ascending primes: later ones overshoot too
        divisor_walk(primes, i + 1, next, -sign, R, log_R, chi, total);
    }
}

}  // namespace

double NuEvaluator::divisor_sum(std::span<const std::uint64_t> small_prime_factors) const {
    double total = 0.0;
    divisor_walk(small_prime_factors, 0, 1.0, 1.0, ctx_.R, log_R_, chi_, total);
    return total;
}

double NuEvaluator::combine(std::span<const double> divisor_sums) const {
    double value = scale_;
    for (double s : divisor_sums) value *= s * s;
    return value;
}

double nu_pointwise(std::int64_t x, const NuEvaluator& ev) {
    const SieveContext& ctx = ev.context();
    const Integer base = Integer(static_cast<long>(ctx.W)) * Integer(static_cast<long>(x)) +
                         Integer(static_cast<unsigned long>(ctx.residue()));
    std::vector<double> sums;
    std::vector<std::uint64_t> divisors;
    for (std::int64_t h : ctx.params.tuple.values()) {
        const Integer n = base + Integer(static_cast<long>(h));
        divisors.clear();
        for (std::uint64_t p : ev.sieve_primes()) {
            if (residue(n, p) == 0) divisors.push_back(p);
        }
        sums.push_back(ev.divisor_sum(divisors));
    }
    return ev.combine(sums);
}

std::vector<double> nu_bulk(std::int64_t x1, std::int64_t x2, const NuEvaluator& ev,
                            unsigned threads) {
    constexpr std::int64_t kMaxValues = std::int64_t{1} << 31;
    if (x2 < x1) return {};
    if (x2 - x1 + 1 > kMaxValues) {
        throw CapacityError("nu_bulk range exceeds 2^31 values; split it into segments");
    }
    const SieveContext& ctx = ev.context();
    const std::uint64_t b = ctx.residue();
    const std::size_t total = static_cast<std::size_t>(x2 - x1 + 1);
    std::vector<double> out(total);
    const std::size_t chunks = (total + kChunkSize - 1) / kChunkSize;
    const auto primes = ev.sieve_primes();

    parallel_for_chunks(chunks, threads, [&](std::size_t c) {
        const std::int64_t lo = x1 + static_cast<std::int64_t>(c * kChunkSize);
        const std::int64_t hi = std::min<std::int64_t>(x2, lo + static_cast<std::int64_t>(kChunkSize) - 1);
        const std::size_t len = static_cast<std::size_t>(hi - lo + 1);
        std::vector<double> acc(len, ev.scale());
        std::vector<std::uint32_t> offsets(len + 1);
        std::vector<std::uint64_t> lists;
        std::vector<std::uint32_t> fill;

        // Residue class mod p of the x with p | W x + b + h, or none.
        struct Marking {
            std::uint64_t p;
            std::size_t first;  // offset into the chunk; len means no x
            bool every;
        };
        std::vector<Marking> marks;

        for (std::int64_t h : ctx.params.tuple.values()) {
            marks.clear();
            for (std::uint64_t p : primes) {
                const std::uint64_t c_mod = (b + residue(h, p)) % p;
                const std::uint64_t w_mod = ctx.W % p;
                if (w_mod == 0) {
                    if (c_mod == 0) marks.push_back({p, 0, true});
                    continue;
                }
                // W x = -(b + h) (mod p)
                const std::uint64_t root = mul_mod((p - c_mod) % p, inverse_mod(w_mod, p), p);
                const std::uint64_t start = (root + p - residue(lo, p)) % p;
                if (start < len) marks.push_back({p, static_cast<std::size_t>(start), false});
            }

            std::fill(offsets.begin(), offsets.end(), 0);
            for (const Marking& m : marks) {
                const std::size_t step = m.every ? 1 : m.p;
                for (std::size_t i = m.first; i < len; i += step) ++offsets[i + 1];
            }
            for (std::size_t i = 0; i < len; ++i) offsets[i + 1] += offsets[i];
            lists.assign(offsets[len], 0);
            fill.assign(offsets.begin(), offsets.end() - 1);
            // Marks are in ascending p, so every list comes out ascending.
            for (const Marking& m : marks) {
                const std::size_t step = m.every ? 1 : m.p;
                for (std::size_t i = m.first; i < len; i += step) lists[fill[i]++] = m.p;
            }
            for (std::size_t i = 0; i < len; ++i) {
                std::span<const std::uint64_t> divisors(lists.data() + offsets[i],
                                                        offsets[i + 1] - offsets[i]);
                const double s = ev.divisor_sum(divisors);
                acc[i] *= s * s;
            }
        }
        std::copy(acc.begin(), acc.end(), out.begin() + static_cast<std::ptrdiff_t>(c * kChunkSize));
    });
    return out;
}

double nu_mean(std::uint64_t N, const NuEvaluator& ev, unsigned threads) {
    if (N == 0) throw DomainError("nu_mean requires N >= 1");
    const auto values = nu_bulk(1, static_cast<std::int64_t>(N), ev, threads);
    return pairwise_sum(values) / static_cast<double>(N);
}

NuStats nu_stats(std::uint64_t N, const NuEvaluator& ev, std::size_t buckets, unsigned threads) {
    if (N == 0) throw DomainError("nu_stats requires N >= 1");
    if (buckets == 0) throw DomainError("nu_stats requires at least one bucket");
    const auto values = nu_bulk(1, static_cast<std::int64_t>(N), ev, threads);
    NuStats stats;
    stats.N = N;
    stats.R = ev.context().R;
    stats.W = ev.context().W;
    stats.b = ev.context().residue();
    stats.mean = pairwise_sum(values) / static_cast<double>(N);
    auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    stats.min = *lo;
    stats.max = *hi;
    const double width = (stats.max - stats.min) / static_cast<double>(buckets);
    for (std::size_t i = 0; i <= buckets; ++i) {
        stats.bucket_edges.push_back(stats.min + width * static_cast<double>(i));
    }
    stats.buckets.assign(buckets, 0);
    for (double v : values) {
        std::size_t idx = width > 0 ? static_cast<std::size_t>((v - stats.min) / width) : 0;
        ++stats.buckets[std::min(idx, buckets - 1)];
    }
    return stats;
}

MajorizationReport verify_majorization(const IndicatorTable& f, const NuEvaluator& ev) {
    MajorizationReport report;
    for (std::uint64_t x : f.positions) {
        ++report.checked;
        const double nu = nu_pointwise(static_cast<std::int64_t>(x), ev);
        if (f.value > nu) {
            ++report.violations;
            if (!report.first_violation) report.first_violation = {x, f.value, nu};
        }
    }
    report.holds = report.violations == 0;
    return report;
}

std::vector<std::complex<double>> fourier_phi(std::span<const double> xi, const CutoffFunction& chi,
                                              std::size_t x_nodes) {
    if (x_nodes < 3) throw NumericError("fourier_phi needs at least 3 nodes");
    // Trapezoid rule: the integrand and all its derivatives vanish at +-1.
    const double h = 2.0 / static_cast<double>(x_nodes - 1);
    std::vector<double> xs(x_nodes), g(x_nodes);
    for (std::size_t j = 0; j < x_nodes; ++j) {
        xs[j] = -1.0 + h * static_cast<double>(j);
        g[j] = std::exp(xs[j]) * chi(xs[j]);
    }
    std::vector<std::complex<double>> out;
    out.reserve(xi.size());
    for (double s : xi) {
        double re = 0.0, im = 0.0;
        for (std::size_t j = 0; j < x_nodes; ++j) {
            if (g[j] == 0.0) continue;
            re += g[j] * std::cos(xs[j] * s);
            im += g[j] * std::sin(xs[j] * s);
        }
        out.emplace_back(re * h / (2.0 * std::numbers::pi), im * h / (2.0 * std::numbers::pi));
    }
    return out;
}

PhiIdentityResult verify_phi_identity(const CutoffFunction& chi, const PhiGrid& grid) {
    if (!(grid.step > 0.0) || grid.step >= std::numbers::pi) {
        throw NumericError("phi grid step must lie in (0, pi); refine the step");
    }
    const std::size_t half = static_cast<std::size_t>(std::floor(grid.half_width / grid.step));
    const std::size_t count = 2 * half + 1;
    std::vector<double> ts(count);
    for (std::size_t m = 0; m < count; ++m) {
        ts[m] = (static_cast<double>(m) - static_cast<double>(half)) * grid.step;
    }
    const auto phi = fourier_phi(ts, chi, grid.x_nodes);
    std::vector<std::complex<double>> a(count);
    double mass = 0.0, band = 0.0;
    for (std::size_t m = 0; m < count; ++m) {
        a[m] = std::complex<double>(1.0, ts[m]) * phi[m];
        mass += std::abs(a[m]) * grid.step;
        if (std::abs(ts[m]) >= 0.9 * grid.half_width) band += std::abs(a[m]) * grid.step;
    }

    PhiIdentityResult result;
    result.grid = grid;
    // Super-exponential decay of phi: the outermost band bounds what lies beyond.
    result.tail_estimate = band * mass;
    if (result.tail_estimate > 1e-4) {
        throw NumericError("phi truncation tail estimate above 1e-4; increase half_width");
    }

    // 1/(2 + i(t + t')) depends on m + m' only.
    std::vector<std::complex<double>> kernel(2 * count - 1);
    for (std::size_t s = 0; s < kernel.size(); ++s) {
        const double t_sum = 2.0 * ts[0] + static_cast<double>(s) * grid.step;
        kernel[s] = 1.0 / std::complex<double>(2.0, t_sum);
    }
    std::complex<double> total = 0.0;
    for (std::size_t m = 0; m < count; ++m) {
        std::complex<double> row = 0.0;
        for (std::size_t n = 0; n < count; ++n) row += a[n] * kernel[m + n];
        total += a[m] * row;
    }
    total *= grid.step * grid.step;
    result.value = total.real();
    result.imaginary = total.imag();
    return result;
}

}  // namespace bgp
