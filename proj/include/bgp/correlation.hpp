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
#include <span>
#include <vector>

#include "bgp/local_factors.hpp"
#include "bgp/polynomial.hpp"
#include "bgp/sieve_measure.hpp"

namespace bgp {

using Complex = std::complex<double>;

// z_ij = (1 + i xi_ij) / log R and z'_ij likewise, stored at form_index(i, j).
struct ZMatrix {
    std::size_t k = 0, J = 0;
    std::vector<Complex> z, z_prime;

    static ZMatrix uniform(std::size_t k, std::size_t J, double log_R, double xi = 0.0,
                           double xi_prime = 0.0);
    static ZMatrix from_xi(std::size_t k, std::size_t J, double log_R, std::span<const double> xi,
                           std::span<const double> xi_prime);
    std::size_t size() const { return z.size(); }
    // Throws DomainError unless every real part is the same positive number.
    void validate() const;
};

struct CorrelationReport {
    std::vector<std::int64_t> shifts;
    std::uint64_t N = 0;
    double average = 0.0;
    std::uint64_t bad_prime_limit = 0;
    std::vector<std::uint64_t> bad_primes;
    double bad_prime_sum = 0.0;
    double predicted_main = 1.0;
    // exp(sum 1/p over bad primes) - 1, the size of the bad-prime correction.
    double correction_magnitude = 0.0;
    bool size_condition_met = false;  // N >= R^{4kJ+1}
    double edge_fraction = 0.0;       // max |r_j| / N
    double runtime_seconds = 0.0;
};

// Forms W(x + r_j) + b + h_i as a LinearFormSystem.
LinearFormSystem form_system(const SieveContext& ctx, std::span<const std::int64_t> shifts);

// E_{x in [N]} prod_j nu(x + r_j). Reads outside [1, N] evaluate nu there
// directly rather than truncating.
CorrelationReport empirical_correlation(const NuEvaluator& ev, std::span<const std::int64_t> shifts,
                                        std::uint64_t N, std::uint64_t bad_prime_limit = 10000,
                                        unsigned threads = 0);

// Literal sum over the 4^{kJ} choices m_q, m'_q in {1, p}. kJ <= 8.
Complex euler_factor_Ep(const LinearFormSystem& sys, std::uint64_t p, const ZMatrix& z);
// prod_q (1 - p^{-1-z_q})(1 - p^{-1-z'_q}) / (1 - p^{-1-z_q-z'_q})
Complex euler_factor_Ep_prime(std::uint64_t p, const ZMatrix& z);

struct EulerCheckpoint {
    std::uint64_t P = 0;
    Complex product;           // prod_{p_min <= p <= P} E_p / E'_p
    double distance = 0.0;     // |product - target|
    double difference = 0.0;   // |product - previous checkpoint product|; 0 for the first
    double bad_prime_sum = 0.0;
};

struct EulerProductReport {
    double target = 1.0;  // (W / phi(W))^{kJ}
    std::vector<EulerCheckpoint> checkpoints;
    bool bounded = true;
    bool differences_decreasing = true;
};

EulerProductReport euler_product_experiment(
    const LinearFormSystem& sys, const ZMatrix& z,
    std::span<const std::uint64_t> checkpoints = std::span<const std::uint64_t>(),
    std::uint64_t p_min = 2);

struct PolyFormsReport {
    std::uint64_t N = 0;
    std::uint64_t H = 0;
    std::size_t dimension = 0;
    std::uint64_t grid_points = 0;
    double average = 0.0;
    std::vector<double> per_point;  // inner averages in grid order
    std::uint64_t bad_prime_limit = 0;
    // E_l sum_{i,i', j<j'} S(i,j,i',j',l)
    double bad_prime_diagnostic = 0.0;
};

// E_{l in [H]^d} E_{x in [N]} prod_j nu(x + Q_j(l)). Throws DomainError if
// some Q_i - Q_j is constant, CapacityError if H^d N J exceeds the budget.
PolyFormsReport polynomial_forms_average(const NuEvaluator& ev, std::span<const IntPolynomial> Q,
                                         std::uint64_t H, std::uint64_t N,
                                         std::uint64_t bad_prime_limit = 10000,
                                         double budget = 5e8, unsigned threads = 0);

struct TidySumReport {
    double value = 0.0;
    std::vector<std::uint64_t> vanishing_primes;  // B
    double vanishing_sum = 0.0;                   // sum_{p in B} 1/p
};

// E_{l in [H]^d} sum_{w < p <= limit, p not in B, p | dQ(l)} log^c p / p,
// where B holds the primes above w dividing every coefficient of dQ.
TidySumReport tidy_sum(const IntPolynomial& delta_q, std::uint64_t H, std::uint64_t limit,
                       double c, std::uint64_t w = 1);

}  // namespace bgp
