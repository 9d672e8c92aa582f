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

#include "bgp/progressions.hpp"

#include <algorithm>
#include <cmath>

#include "bgp/errors.hpp"
#include "bgp/numeric.hpp"

namespace bgp {

namespace {

void require_univariate(std::span<const IntPolynomial> polys) {
    if (polys.empty()) throw DomainError("at least one polynomial is required");
    for (const auto& p : polys) {
        if (p.variables() != 1) throw DomainError("progression polynomials must be univariate");
    }
}

bool member(std::span<const std::uint64_t> A, const Integer& v) {
    if (v < 1 || !v.fits_ulong_p()) return false;
    return std::binary_search(A.begin(), A.end(), static_cast<std::uint64_t>(v.get_ui()));
}

}  // namespace

double lambda_count(std::span<const double> f, std::span<const IntPolynomial> polys, std::uint64_t M) {
    require_univariate(polys);
    if (M < 1) throw DomainError("lambda_count needs M >= 1");
    const std::uint64_t N = f.size();
    if (N == 0) throw DomainError("lambda_count needs a non-empty f");
    const Integer n(static_cast<unsigned long>(N));

    std::vector<double> per_y(M, 0.0);
    std::vector<std::int64_t> s(polys.size());
    for (std::uint64_t y = 1; y <= M; ++y) {
        // x + s_j must land in [1, N] for every j; elsewhere f is zero.
        std::int64_t lo = 1, hi = static_cast<std::int64_t>(N);
        bool empty = false;
        for (std::size_t j = 0; j < polys.size(); ++j) {
            const Integer v = polys[j](Integer(static_cast<unsigned long>(y)));
            if (abs(v) >= n) {
                empty = true;
                break;
            }
            s[j] = v.get_si();
            lo = std::max(lo, 1 - s[j]);
            hi = std::min(hi, static_cast<std::int64_t>(N) - s[j]);
        }
        if (empty || lo > hi) continue;
        std::vector<double> products(static_cast<std::size_t>(hi - lo + 1));
        for (std::int64_t x = lo; x <= hi; ++x) {
            double prod = 1.0;
            for (std::size_t j = 0; j < s.size(); ++j) prod *= f[static_cast<std::size_t>(x + s[j] - 1)];
            products[static_cast<std::size_t>(x - lo)] = prod;
        }
        per_y[y - 1] = pairwise_sum(products) / static_cast<double>(N);
    }
    return pairwise_sum(per_y) / static_cast<double>(M);
}

std::vector<IntPolynomial> rescale_polys(std::span<const IntPolynomial> polys, std::uint64_t W) {
    if (W < 1) throw DomainError("W must be positive");
    const Integer w(static_cast<unsigned long>(W));
    std::vector<IntPolynomial> out;
    for (std::size_t j = 0; j < polys.size(); ++j) {
        const auto& P = polys[j];
        if (P.constant_term() != 0) {
            throw DomainError("P_" + std::to_string(j + 1) + "(0) must be 0");
        }
        IntPolynomial Q(P.variables());
        for (const auto& [e, a] : P.terms()) {
            unsigned total = 0;
            for (auto v : e) total += v;
            Integer scale;
            mpz_pow_ui(scale.get_mpz_t(), w.get_mpz_t(), total - 1);
            Q.add_term(e, a * scale);
        }
        // Spot-check Q(y) W = P(W y) at y = (1, ..., 1).
        std::vector<Integer> ones(P.variables(), Integer(1)), wy(P.variables(), w);
        if (Q.evaluate(ones) * w != P.evaluate(wy)) throw NumericError("rescale_polys lost exactness");
        out.push_back(std::move(Q));
    }
    return out;
}

std::vector<ProgressionHit> search_in_A(std::span<const std::uint64_t> A,
                                        std::span<const IntPolynomial> polys, std::uint64_t x_max,
                                        std::uint64_t y_max, bool first_only) {
    require_univariate(polys);
    std::vector<ProgressionHit> hits;
    for (std::uint64_t y = 1; y <= y_max; ++y) {
        std::vector<Integer> py;
        for (const auto& P : polys) py.push_back(P(Integer(static_cast<unsigned long>(y))));
        for (std::uint64_t x = 1; x <= x_max; ++x) {
            ProgressionHit hit;
            hit.x = Integer(static_cast<unsigned long>(x));
            hit.y = Integer(static_cast<unsigned long>(y));
            bool ok = true;
            for (const auto& v : py) {
                hit.values.push_back(hit.x + v);
                if (!member(A, hit.values.back())) {
                    ok = false;
                    break;
                }
            }
            if (!ok) continue;
            hits.push_back(std::move(hit));
            if (first_only) return hits;
        }
    }
    return hits;
}

std::vector<ProgressionHit> search_bounded_gap(std::span<const IntPolynomial> polys,
                                               std::uint64_t b_max, std::uint64_t x_max,
                                               std::uint64_t y_max, bool first_only) {
    require_univariate(polys);
    if (b_max < 1) throw DomainError("b_max must be at least 1");

    // (y, x) pairs whose values are already all prime, in (y, x) order.
    std::vector<ProgressionHit> base;
    for (std::uint64_t y = 1; y <= y_max; ++y) {
        std::vector<Integer> py;
        for (const auto& P : polys) py.push_back(P(Integer(static_cast<unsigned long>(y))));
        for (std::uint64_t x = 1; x <= x_max; ++x) {
            ProgressionHit hit;
            hit.x = Integer(static_cast<unsigned long>(x));
            hit.y = Integer(static_cast<unsigned long>(y));
            bool ok = true;
            for (const auto& v : py) {
                hit.values.push_back(hit.x + v);
                if (hit.values.back() < 2 || !is_prime(hit.values.back())) {
                    ok = false;
                    break;
                }
            }
            if (ok) base.push_back(std::move(hit));
        }
    }

    std::vector<ProgressionHit> hits;
    for (std::uint64_t b = 1; b <= b_max; ++b) {
        const Integer gap(static_cast<unsigned long>(b));
        for (const auto& candidate : base) {
            bool ok = std::all_of(candidate.values.begin(), candidate.values.end(),
                                  [&](const Integer& v) { return is_prime(Integer(v + gap)); });
            if (!ok) continue;
            ProgressionHit hit = candidate;
            hit.gap = b;
            hits.push_back(std::move(hit));
            if (first_only) return hits;
        }
    }
    return hits;
}

PipelineReport theorem_one_pipeline(const MaynardParams& params,
                                    std::span<const IntPolynomial> polys,
                                    const PipelineOptions& options) {
    require_univariate(polys);
    for (std::size_t j = 0; j < polys.size(); ++j) {
        if (polys[j].constant_term() != 0) {
            throw DomainError("P_" + std::to_string(j + 1) + "(0) must be 0");
        }
    }
    if (options.M < 1) throw DomainError("M must be at least 1");
    params.validate();

    PipelineReport report;
    report.M = options.M;
    SieveContext ctx = choose_parameters(params, options.j_max, options.overrides);
    const auto A = build_A(params, options.threads);
    report.A_size = A.size();
    report.selection = select_residue(A, params.tuple, ctx.W, ctx.N);
    ctx.b = report.selection.b;
    if (auto problems = ctx.violations(); !problems.empty()) {
        throw ConfigurationError("selected residue is invalid: " + problems.front());
    }
    report.context = ctx;

    const IndicatorTable f = build_f_A(A, ctx);
    report.f_mean = f.mean();
    const auto dense = f.dense();
    report.rescaled = rescale_polys(polys, ctx.W);
    report.lambda = lambda_count(dense, report.rescaled, options.M);

    const Integer W(static_cast<unsigned long>(ctx.W)), b(static_cast<unsigned long>(*ctx.b));
    const auto N = static_cast<std::int64_t>(ctx.N);
    for (std::uint64_t y = 1; y <= options.M; ++y) {
        std::vector<Integer> q;
        for (const auto& Q : report.rescaled) q.push_back(Q(Integer(static_cast<unsigned long>(y))));
        for (std::int64_t x = 1; x <= N; ++x) {
            bool ok = std::all_of(q.begin(), q.end(), [&](const Integer& v) {
                const Integer at = v + x;
                return at >= 1 && at <= N && dense[at.get_ui() - 1] > 0.0;
            });
            if (!ok) continue;
            PipelineHit hit;
            hit.x = static_cast<std::uint64_t>(x);
            hit.y = y;
            hit.x0 = W * x + b;
            hit.y0 = W * static_cast<unsigned long>(y);
            for (const auto& P : polys) {
                hit.values.push_back(hit.x0 + P(hit.y0));
                if (!member(A, hit.values.back())) {
                    throw NumericError("pipeline hit maps outside A");
                }
            }
            report.hits.push_back(std::move(hit));
        }
    }

    const double t = static_cast<double>(polys.size());
    report.lambda_recount = static_cast<double>(report.hits.size()) * std::pow(f.value, t) /
                            (static_cast<double>(ctx.N) * static_cast<double>(options.M));
    const bool positive = report.lambda > 0.0;
    const bool agree = std::abs(report.lambda - report.lambda_recount) <=
                       1e-12 * std::max(report.lambda, report.lambda_recount);
    report.consistent = positive == !report.hits.empty() && agree;
    return report;
}

}  // namespace bgp
