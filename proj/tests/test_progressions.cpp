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

#include <random>

#include "doctest.h"

#include "bgp/errors.hpp"
#include "bgp/progressions.hpp"

using namespace bgp;

namespace {

bool naive_prime(const Integer& n) {
    if (n < 2) return false;
    for (Integer d = 2; d * d <= n; ++d) {
        if (n % d == 0) return false;
    }
    return true;
}

// E_y E_x prod_j f(x + P_j(y)) by the direct double loop.
double brute_lambda(const std::vector<double>& f, const std::vector<IntPolynomial>& P, std::uint64_t M) {
    const auto N = static_cast<std::int64_t>(f.size());
    double total = 0.0;
    for (std::uint64_t y = 1; y <= M; ++y) {
        for (std::int64_t x = 1; x <= N; ++x) {
            double prod = 1.0;
            for (const auto& p : P) {
                const Integer at = p(Integer(static_cast<unsigned long>(y))) + x;
                prod *= (at >= 1 && at <= N) ? f[at.get_ui() - 1] : 0.0;
            }
            total += prod;
        }
    }
    return total / (static_cast<double>(N) * static_cast<double>(M));
}

std::vector<double> prime_indicator(std::uint64_t N) {
    PrimeTable table(N);
    std::vector<double> f(N, 0.0);
    for (auto p : table.primes()) f[p - 1] = 1.0;
    return f;
}

std::vector<std::uint64_t> primes_up_to(std::uint64_t N) {
    PrimeTable table(N);
    return {table.primes().begin(), table.primes().end()};
}

}  // namespace

TEST_CASE("lambda on constant functions") {
    std::vector<double> ones(100, 1.0), zeros(100, 0.0);
    const auto P0 = parse_polynomial_list("0");
    CHECK(lambda_count(ones, P0, 7) == 1.0);
    CHECK(lambda_count(zeros, parse_polynomial_list("0,y"), 5) == 0.0);
    // Zero extension: x + y must stay inside [1, 100].
    CHECK(lambda_count(ones, parse_polynomial_list("0,y"), 4) == doctest::Approx((99 + 98 + 97 + 96) / 400.0));
    CHECK_THROWS_AS(lambda_count(ones, std::vector<IntPolynomial>{}, 3), DomainError);
    CHECK_THROWS_AS(lambda_count(ones, P0, 0), DomainError);
}

TEST_CASE("lambda matches the double loop") {
    const auto f = prime_indicator(100);
    const auto P = parse_polynomial_list("0,y^2");
    CHECK(lambda_count(f, P, 3) == doctest::Approx(brute_lambda(f, P, 3)).epsilon(1e-15));

    std::mt19937_64 rng(2);
    std::vector<double> weights(1000);
    for (auto& w : weights) w = static_cast<double>(rng() % 1000) / 997.0;
    for (const char* text : {"0,y", "y,2*y,3*y", "0,y^2-y", "-y,y^2"}) {
        const auto polys = parse_polynomial_list(text);
        CHECK(lambda_count(weights, polys, 12) == doctest::Approx(brute_lambda(weights, polys, 12)).epsilon(1e-12));
    }
}

TEST_CASE("lambda of an indicator counts configurations") {
    const std::uint64_t N = 1000, M = 8;
    const auto f = prime_indicator(N);
    const auto A = primes_up_to(N);
    for (const char* text : {"0,2*y", "0,y,2*y", "0,1"}) {
        const auto P = parse_polynomial_list(text);
        const auto hits = search_in_A(A, P, N, M);
        const double lambda = lambda_count(f, P, M);
        CHECK(lambda == doctest::Approx(static_cast<double>(hits.size()) / (N * M)).epsilon(1e-14));
        CHECK((lambda > 0.0) == !hits.empty());
    }
}

TEST_CASE("rescaling") {
    const auto q = rescale_polys(parse_polynomial_list("y^2"), 6);
    CHECK(q.front() == parse_polynomial("6*y^2"));
    CHECK(rescale_polys(parse_polynomial_list("y"), 210).front() == parse_polynomial("y"));
    CHECK_THROWS_AS(rescale_polys(parse_polynomial_list("y^2+1"), 6), DomainError);

    std::mt19937_64 rng(6);
    for (int trial = 0; trial < 100; ++trial) {
        IntPolynomial P(1);
        const unsigned degree = 1 + rng() % 4;
        for (unsigned e = 1; e <= degree; ++e) P.add_term({e}, Integer(static_cast<long>(rng() % 21) - 10));
        if (P.is_zero()) continue;
        const std::uint64_t W = std::vector<std::uint64_t>{1, 2, 6, 30, 210}[rng() % 5];
        std::vector<IntPolynomial> one{P};
        const auto Q = rescale_polys(one, W).front();
        const Integer y(static_cast<long>(rng() % 1000) - 500);
        const Integer Wi(static_cast<unsigned long>(W));
        CHECK(Q(y) * Wi == P(Wi * y));
    }
    const auto multi = rescale_polys(parse_polynomial_list("l*m+l", "lm"), 6);
    CHECK(multi.front() == parse_polynomial("6*l*m+l", "lm"));
}

TEST_CASE("search in A") {
    const auto A = primes_up_to(200);
    const auto hits = search_in_A(A, parse_polynomial_list("y^2,2*y^2"), 100, 10);
    bool found = false;
    for (const auto& h : hits) {
        for (const auto& v : h.values) CHECK(naive_prime(v));
        found = found || (h.x == 3 && h.y == 2 && h.values == std::vector<Integer>{7, 11});
    }
    CHECK(found);
    for (std::size_t i = 1; i < hits.size(); ++i) {
        CHECK(std::make_pair(hits[i - 1].y, hits[i - 1].x) < std::make_pair(hits[i].y, hits[i].x));
    }

    const auto single = search_in_A(A, parse_polynomial_list("0"), 200, 1);
    CHECK(single.size() == A.size());

    std::vector<std::uint64_t> evens;
    for (std::uint64_t n = 2; n <= 200; n += 2) evens.push_back(n);
    CHECK(search_in_A(evens, parse_polynomial_list("0,1"), 200, 5).empty());

    const auto first = search_in_A(A, parse_polynomial_list("0,2*y"), 100, 10, true);
    REQUIRE(first.size() == 1);
    CHECK(first.front().x == 3);
    CHECK(first.front().y == 1);
}

TEST_CASE("bounded gap search") {
    const auto P = parse_polynomial_list("y");
    const auto hits = search_bounded_gap(P, 2, 100, 10);
    const auto it = std::find_if(hits.begin(), hits.end(), [](const ProgressionHit& h) { return h.gap == 2u; });
    REQUIRE(it != hits.end());
    CHECK(it->x == 2);
    CHECK(it->y == 1);
    CHECK(it->values == std::vector<Integer>{3});

    const auto ones = search_bounded_gap(P, 1, 100, 10);
    REQUIRE(ones.size() == 1);
    CHECK(ones.front().x == 1);
    CHECK(ones.front().y == 1);

    const auto squares = search_bounded_gap(parse_polynomial_list("y^2"), 246, 100, 10);
    bool found = false;
    for (const auto& h : squares) {
        REQUIRE(h.gap);
        for (const auto& v : h.values) {
            CHECK(naive_prime(v));
            CHECK(naive_prime(v + *h.gap));
        }
        found = found || (h.x == 3 && h.y == 2 && h.gap == 4u);
    }
    CHECK(found);
    for (std::size_t i = 1; i < squares.size(); ++i) {
        const auto key = [](const ProgressionHit& h) { return std::make_tuple(*h.gap, h.y, h.x); };
        CHECK(key(squares[i - 1]) < key(squares[i]));
    }
    CHECK_THROWS_AS(search_bounded_gap(P, 0, 10, 10), DomainError);
    CHECK(search_bounded_gap(parse_polynomial_list("y^2"), 246, 100, 10, true).size() == 1);
}

TEST_CASE("pipeline") {
    MaynardParams p;
    p.tuple = Tuple({0, 2});
    p.m = 1;
    p.epsilon0 = 0.3;
    p.n_prime = 100000;
    PipelineOptions o;
    o.overrides.w = 2;
    o.overrides.eta0 = 0.11;
    o.M = 20;

    const auto r = theorem_one_pipeline(p, parse_polynomial_list("y,2*y"), o);
    CHECK(r.consistent);
    CHECK(r.lambda > 0.0);
    CHECK_FALSE(r.hits.empty());
    const auto A = build_A(p);
    for (const auto& h : r.hits) {
        CHECK(h.x0 == r.context.W * h.x + *r.context.b);
        CHECK(h.y0 == r.context.W * h.y);
        for (const auto& v : h.values) {
            CHECK(std::binary_search(A.begin(), A.end(), v.get_ui()));
            CHECK(naive_prime(v));
        }
    }

    // P = {0}: Lambda is the mean of f_A.
    const auto flat = theorem_one_pipeline(p, parse_polynomial_list("0"), o);
    CHECK(flat.lambda == doctest::Approx(flat.f_mean).epsilon(1e-12));
    CHECK(flat.hits.size() == flat.selection.count * o.M);

    // Brute-force recount on the first 10^3 values of f_A.
    ParameterOverrides over = o.overrides;
    auto ctx = choose_parameters(p, 1, over);
    ctx.b = r.selection.b;
    auto dense = build_f_A(A, ctx).dense();
    dense.resize(1000);
    const auto Q = rescale_polys(parse_polynomial_list("y,2*y"), ctx.W);
    CHECK(lambda_count(dense, Q, 20) == doctest::Approx(brute_lambda(dense, Q, 20)).epsilon(1e-14));

    // Rejected before any computation, even with unusable parameters.
    MaynardParams broken = p;
    broken.n_prime = 0;
    CHECK_THROWS_AS(theorem_one_pipeline(broken, parse_polynomial_list("y+1"), o), DomainError);
}
