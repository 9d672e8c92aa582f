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

#include <cmath>
#include <filesystem>

#include "doctest.h"

#include "bgp/errors.hpp"
#include "bgp/wtrick.hpp"

using namespace bgp;

namespace {

std::uint64_t naive_spf(std::uint64_t n) {
    for (std::uint64_t d = 2; d * d <= n; ++d) {
        if (n % d == 0) return d;
    }
    return n;
}

// Straight from the definition of A.
std::vector<std::uint64_t> naive_A(const MaynardParams& p) {
    std::vector<std::uint64_t> out;
    for (std::uint64_t n = 1; n <= p.n_prime; ++n) {
        std::uint64_t least = UINT64_MAX;
        unsigned primes = 0;
        for (auto h : p.tuple.values()) {
            const std::uint64_t v = n + static_cast<std::uint64_t>(h);
            if (v == 1) continue;
            const std::uint64_t q = naive_spf(v);
            least = std::min(least, q);
            if (q == v) ++primes;
        }
        if (primes >= p.m + 1 && static_cast<double>(least) > std::pow(static_cast<double>(n), p.epsilon0)) {
            out.push_back(n);
        }
    }
    return out;
}

MaynardParams twin_params(std::uint64_t n_prime) {
    MaynardParams p;
    p.tuple = Tuple({0, 2});
    p.m = 1;
    p.epsilon0 = 0.3;
    p.n_prime = n_prime;
    return p;
}

}  // namespace

TEST_CASE("params validation") {
    MaynardParams p = twin_params(1000);
    CHECK_NOTHROW(p.validate());
    p.epsilon0 = 1.0;
    CHECK_THROWS_AS(p.validate(), ConfigurationError);
    p.epsilon0 = 0.3;
    p.m = 2;
    CHECK_THROWS_AS(p.validate(), ConfigurationError);
}

TEST_CASE("build_A matches the definition") {
    for (auto p : {twin_params(5000), [] {
             MaynardParams q;
             q.tuple = Tuple({0, 2, 6});
             q.m = 1;
             q.epsilon0 = 0.2;
             q.n_prime = 5000;
             return q;
         }()}) {
        const auto A = build_A(p, 1);
        CHECK(A == naive_A(p));
        CHECK(A == build_A(p, 4));
        CHECK(std::is_sorted(A.begin(), A.end()));
    }
}

TEST_CASE("build_A is independent of the thread count across chunks") {
    const auto p = twin_params(300000);  // several chunks
    CHECK(build_A(p, 1) == build_A(p, 3));
}

TEST_CASE("subset by prime pattern") {
    MaynardParams p;
    p.tuple = Tuple({0, 2, 6});
    p.m = 1;
    p.epsilon0 = 0.2;
    p.n_prime = 3000;
    PrimeTable table(4000);
    const auto A = build_A(p, table);
    std::vector<std::size_t> first_two{0, 1};
    const auto twins = subset_by_prime_pattern(A, p.tuple, first_two, table);
    for (auto n : twins) {
        CHECK(table.is_prime(n));
        CHECK(table.is_prime(n + 2));
    }
    std::size_t expected = 0;
    for (auto n : A) expected += table.is_prime(n) && table.is_prime(n + 2);
    CHECK(twins.size() == expected);
    std::vector<std::size_t> bad{5};
    CHECK_THROWS_AS(subset_by_prime_pattern(A, p.tuple, bad, table), DomainError);
}

TEST_CASE("default parameter chain") {
    // log log log N' < 1 here, so w = 2 and W = 2.
    // eta0 = min(0.15, 1/9)/2 = 1/18; at N' = 10^5, R = 50000^{1/18} < 2.
    CHECK_THROWS_AS(choose_parameters(twin_params(100000), 1), ConfigurationError);
    try {
        choose_parameters(twin_params(100000), 1);
    } catch (const ConfigurationError& e) {
        CHECK(std::string(e.what()).find("R = N^eta0") != std::string::npos);
    }

    const auto ctx = choose_parameters(twin_params(1'000'000), 1);
    CHECK(ctx.w == 2);
    CHECK(ctx.W == 2);
    CHECK(ctx.phi_W == 1);
    CHECK(ctx.N == 500000);
    CHECK(ctx.eta0 == doctest::Approx(1.0 / 18.0));
    CHECK(ctx.R == doctest::Approx(std::pow(500000.0, 1.0 / 18.0)));
    CHECK(ctx.c0 == doctest::Approx(std::pow(1.0 / 18.0, 2) / 16.0 / 2.0));
    CHECK(ctx.violations().empty());

    ParameterOverrides o;
    o.eta0 = 0.11;
    const auto over = choose_parameters(twin_params(1'000'000), 1, o);
    CHECK(over.R == doctest::Approx(std::pow(500000.0, 0.11)));
    CHECK(over.c0 == doctest::Approx(0.11 * 0.11 / 16.0 / 2.0));
}

TEST_CASE("w override") {
    // The default w only passes 2 for astronomically large N'; override it.
    MaynardParams p = twin_params(100000);
    ParameterOverrides o;
    o.w = 5;
    o.eta0 = 0.11;
    const auto ctx = choose_parameters(p, 1, o);
    CHECK(ctx.W == 30);
    CHECK(ctx.phi_W == 8);
    CHECK(ctx.N == 3333);
    CHECK(ctx.eta0 == 0.11);
    CHECK(ctx.c0 == doctest::Approx(0.11 * 0.11 / 16.0 / 2.0));
}

TEST_CASE("every violated invariant is reported") {
    MaynardParams p = twin_params(100000);
    ParameterOverrides o;
    o.eta0 = 0.2;   // >= eps0/2 and > 1/9
    o.c0 = 1.0;     // too large
    try {
        choose_parameters(p, 1, o);
        FAIL("expected ConfigurationError");
    } catch (const ConfigurationError& e) {
        const std::string what = e.what();
        CHECK(what.find("eta0 must be < epsilon0/2") != std::string::npos);
        CHECK(what.find("1/(4 k Jmax + 1)") != std::string::npos);
        CHECK(what.find("c0 must be < eta0^k/4^k") != std::string::npos);
    }
    CHECK_THROWS_AS(choose_parameters(twin_params(50), 1), ConfigurationError);
    CHECK_THROWS_AS(choose_parameters(twin_params(1000), 0), ConfigurationError);
}

TEST_CASE("residue selection") {
    const auto p = twin_params(100000);
    const auto A = build_A(p);
    const std::uint64_t W = 6, N = 100000 / 6;
    const auto sel = select_residue(A, p.tuple, W, N);
    CHECK(sel.candidates == std::vector<std::uint64_t>{5});  // X_6 for {0, 2}
    CHECK(sel.b == 5);

    // Brute-force count for each candidate.
    const auto lo = support_begin(N), hi = support_end(N);
    for (std::size_t i = 0; i < sel.candidates.size(); ++i) {
        std::uint64_t count = 0;
        for (std::uint64_t x = lo; x <= hi; ++x) {
            count += std::binary_search(A.begin(), A.end(), W * x + sel.candidates[i]);
        }
        CHECK(sel.counts[i] == count);
    }
    CHECK(sel.count == sel.counts.front());
    CHECK_FALSE(sel.empty_warning);
    CHECK(sel.floor_factor > 0.0);

    // W = 30 leaves two residues; the choice maximizes and breaks ties low.
    const auto sel30 = select_residue(A, p.tuple, 30, 100000 / 30);
    CHECK(sel30.candidates == std::vector<std::uint64_t>{11, 17, 29});
    const auto best = *std::max_element(sel30.counts.begin(), sel30.counts.end());
    for (std::size_t i = 0; i < sel30.candidates.size(); ++i) {
        if (sel30.counts[i] == best) {
            CHECK(sel30.b == sel30.candidates[i]);
            break;
        }
    }
}

TEST_CASE("support window") {
    CHECK(support_begin(100) == 10);
    CHECK(support_end(100) == 90);
    CHECK(support_begin(101) == 11);
    CHECK(support_end(101) == 90);
}

TEST_CASE("f_A table") {
    const auto p = twin_params(100000);
    ParameterOverrides o;
    o.eta0 = 0.11;
    auto ctx = choose_parameters(p, 1, o);
    const auto A = build_A(p);
    ctx.b = select_residue(A, p.tuple, ctx.W, ctx.N).b;
    const auto f = build_f_A(A, ctx);
    const double expected = ctx.c0 * std::pow(std::log(static_cast<double>(ctx.N)) / 2.0, 2.0);
    CHECK(f.value == doctest::Approx(expected).epsilon(1e-14));
    const auto dense = f.dense();
    REQUIRE(dense.size() == ctx.N);
    std::size_t support = 0;
    for (std::uint64_t x = 1; x <= ctx.N; ++x) {
        const bool in = std::binary_search(A.begin(), A.end(), ctx.W * x + *ctx.b) &&
                        x >= support_begin(ctx.N) && x <= support_end(ctx.N);
        CHECK(dense[x - 1] == (in ? f.value : 0.0));
        CHECK(f.at(static_cast<std::int64_t>(x)) == dense[x - 1]);
        support += in;
    }
    CHECK(support == f.positions.size());
    CHECK(f.at(0) == 0.0);
    CHECK(f.at(-5) == 0.0);
    CHECK(f.mean() == doctest::Approx(f.value * static_cast<double>(support) / static_cast<double>(ctx.N)));

    ctx.b.reset();
    CHECK_THROWS_AS(build_f_A(A, ctx), ConfigurationError);
}

TEST_CASE("b outside X_W is a violation") {
    auto ctx = choose_parameters(twin_params(100000), 1, ParameterOverrides{std::uint64_t{5}, 0.11, {}});
    ctx.b = 11;
    CHECK(ctx.violations().empty());
    ctx.b = 13;  // 13 + 2 = 15 is divisible by 3 and 5
    CHECK_FALSE(ctx.violations().empty());
    ctx.b = 12;
    CHECK_FALSE(ctx.violations().empty());
}

TEST_CASE("A export and import") {
    const auto p = twin_params(20000);
    const auto A = build_A(p);
    const auto path = std::filesystem::temp_directory_path() / "bgp_A_test.txt";
    export_A(path, A, p);
    const auto back = import_A(path);
    CHECK(back.values == A);
    CHECK(back.params.tuple == p.tuple);
    CHECK(back.params.m == p.m);
    CHECK(back.params.epsilon0 == p.epsilon0);
    CHECK(back.params.n_prime == p.n_prime);
    std::filesystem::remove(path);
}
