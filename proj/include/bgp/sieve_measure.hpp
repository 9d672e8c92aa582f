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

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "bgp/arith.hpp"
#include "bgp/wtrick.hpp"

namespace bgp {

// chi(t) = D exp(1/(t^2 - 1)) on |t| < 1, zero elsewhere.
class CutoffFunction {
  public:
    explicit CutoffFunction(double normalization);

    double normalization() const { return D_; }
    double operator()(double t) const;
    double derivative(double t) const;
    double at_zero() const;

  private:
    double D_;
};

// Integrand |d/dt exp(1/(t^2-1))|^2 of the unnormalized bump.
double bump_derivative_squared(double t);

// D = I^{-1/2} with I = int_0^1 |d/dt exp(1/(t^2-1))|^2 dt by adaptive
// Gauss-Kronrod. Throws NumericError if chi(0) = D/e <= 1/2.
CutoffFunction normalize_chi();

// Evaluates nu_A(x) = (phi(W) log R / W)^k prod_i (sum_{d | Wx+b+h_i} mu(d) chi(log d / log R))^2.
// Immutable; safe to share across threads.
class NuEvaluator {
  public:
    NuEvaluator(const SieveContext& ctx, CutoffFunction chi);

    const SieveContext& context() const { return ctx_; }
    const CutoffFunction& chi() const { return chi_; }
    double log_R() const { return log_R_; }
    // (phi(W) log R / W)^k
    double scale() const { return scale_; }
    // Value on the support of f_A, where only d = 1 contributes.
    double rough_value() const;
    // Primes p < R.
    std::span<const std::uint64_t> sieve_primes() const { return primes_; }

    // sum_{d | n, d < R} mu(d) chi(log d / log R) given the ascending primes
    // p < R dividing n. Only squarefree d built from those primes can
    // contribute, so the depth-first walk stops once the product reaches R.
    double divisor_sum(std::span<const std::uint64_t> small_prime_factors) const;
    // Combines the per-shift divisor sums into nu.
    double combine(std::span<const double> divisor_sums) const;

  private:
    SieveContext ctx_;
    CutoffFunction chi_;
    double log_R_;
    double scale_;
    std::vector<std::uint64_t> primes_;
};

// Trial division of each W x + b + h_i by the primes below R. Any integer x
// (nu is defined on all of N; the shifts stay exact in arbitrary precision).
double nu_pointwise(std::int64_t x, const NuEvaluator& ev);

// Values for x in [x1, x2]. For each prime p < R and shift i the x with
// p | W x + b + h_i form one residue class mod p, found by solving the
// congruence, so no per-x factoring happens.
std::vector<double> nu_bulk(std::int64_t x1, std::int64_t x2, const NuEvaluator& ev,
                            unsigned threads = 0);

struct NuStats {
    std::uint64_t N = 0;
    double R = 0.0;
    std::uint64_t W = 0;
    std::uint64_t b = 0;
    double mean = 0.0;
    double min = 0.0;
    double max = 0.0;
    std::vector<double> bucket_edges;     // buckets + 1 edges
    std::vector<std::uint64_t> buckets;   // counts
};

// E_{x in [N]} nu(x) via the bulk path.
double nu_mean(std::uint64_t N, const NuEvaluator& ev, unsigned threads = 0);
NuStats nu_stats(std::uint64_t N, const NuEvaluator& ev, std::size_t buckets = 10,
                 unsigned threads = 0);

struct MajorizationReport {
    bool holds = true;
    std::uint64_t checked = 0;
    std::uint64_t violations = 0;
    struct Violation {
        std::uint64_t x;
        double f;
        double nu;
    };
    std::optional<Violation> first_violation;
};

// Checks f_A(x) <= nu(x) on the support of f_A (f_A vanishes elsewhere).
MajorizationReport verify_majorization(const IndicatorTable& f, const NuEvaluator& ev);

struct PhiGrid {
    double half_width = 400.0;   // |xi| <= half_width
    double step = 0.2;
    std::size_t x_nodes = 4001;  // trapezoid nodes on [-1, 1] for the transform
};

// phi(xi) = (1/2pi) int_{-1}^{1} e^x chi(x) e^{i x xi} dx, so that
// e^x chi(x) = int phi(xi) e^{-i x xi} d xi.
std::vector<std::complex<double>> fourier_phi(std::span<const double> xi, const CutoffFunction& chi,
                                              std::size_t x_nodes = 4001);

struct PhiIdentityResult {
    double value = 0.0;
    double imaginary = 0.0;
    double tail_estimate = 0.0;
    PhiGrid grid;
};

// int int (1+it)(1+it')/(2+it+it') phi(t) phi(t') dt dt' on a truncated
// trapezoid grid. Throws NumericError when the grid step is at or above pi
// (aliasing) or the truncation tail estimate exceeds 1e-4.
PhiIdentityResult verify_phi_identity(const CutoffFunction& chi, const PhiGrid& grid = {});

}  // namespace bgp
