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

#include <filesystem>
#include <numeric>
#include <random>
#include <set>

#include "doctest.h"

#include "bgp/admissible.hpp"
#include "bgp/arith.hpp"
#include "bgp/errors.hpp"

using namespace bgp;

namespace {

// Definition check over every prime up to 100, without the p <= k shortcut.
bool naive_admissible(const std::vector<std::int64_t>& h) {
    for (std::uint64_t p : small_primes(100)) {
        std::set<std::uint64_t> classes;
        for (auto v : h) classes.insert(static_cast<std::uint64_t>(v) % p);
        if (classes.size() == p) return false;
    }
    return true;
}

std::vector<std::uint64_t> naive_X_W(const Tuple& t, std::uint64_t W) {
    std::vector<std::uint64_t> out;
    const auto primes = prime_divisors(W);
    for (std::uint64_t b = 0; b < W; ++b) {
        bool ok = true;
        for (auto p : primes) {
            for (auto h : t.values()) {
                if ((b + static_cast<std::uint64_t>(h)) % p == 0) ok = false;
            }
        }
        if (ok) out.push_back(b);
    }
    return out;
}

}  // namespace

TEST_CASE("tuple validation and parsing") {
    CHECK(parse_tuple("0 2 6") == Tuple({0, 2, 6}));
    CHECK(parse_tuple("  0\t4  ") == Tuple({0, 4}));
    CHECK_THROWS_AS(parse_tuple("0 2 2"), DomainError);
    CHECK_THROWS_AS(parse_tuple("0 6 2"), DomainError);
    CHECK_THROWS_AS(parse_tuple("-1 2"), DomainError);
    CHECK_THROWS_AS(parse_tuple("0 x"), DomainError);
    CHECK(format_tuple(Tuple({0, 2, 6})) == "0 2 6");
    CHECK(Tuple({3, 5, 20}).diameter() == 17);
}

TEST_CASE("tuple file round trip") {
    const auto path = std::filesystem::temp_directory_path() / "bgp_tuple_test.txt";
    const Tuple t({0, 4, 6, 10, 12});
    save_tuple_file(path, t);
    CHECK(load_tuple_file(path) == t);
    std::filesystem::remove(path);
    CHECK_THROWS_AS(load_tuple_file(path), DomainError);
}

TEST_CASE("admissibility examples") {
    auto twin = is_admissible(Tuple({0, 2}));
    CHECK(twin.admissible);
    CHECK(twin.witness.at(2) == 1);

    auto r = is_admissible(Tuple({0, 2, 6}));
    CHECK(r.admissible);
    CHECK(r.witness == std::map<std::uint64_t, std::uint64_t>{{2, 1}, {3, 1}});

    auto bad = is_admissible(Tuple({0, 2, 4}));
    CHECK_FALSE(bad.admissible);
    CHECK(bad.covering_prime == 3u);

    CHECK_FALSE(is_admissible(Tuple({0, 1})).admissible);
    CHECK(is_admissible(Tuple({5})).admissible);
}

TEST_CASE("admissibility agrees with the definition on small tuples") {
    // Every subset of [0, 12] with 1 to 4 elements.
    std::size_t checked = 0;
    for (unsigned mask = 1; mask < (1u << 13); ++mask) {
        if (std::popcount(mask) > 4) continue;
        std::vector<std::int64_t> h;
        for (int i = 0; i < 13; ++i) {
            if (mask >> i & 1) h.push_back(i);
        }
        const auto r = is_admissible(Tuple(h));
        REQUIRE(r.admissible == naive_admissible(h));
        if (r.admissible) {
            for (const auto& [p, a] : r.witness) {
                for (auto v : h) CHECK(static_cast<std::uint64_t>(v) % p != a);
            }
        }
        ++checked;
    }
    CHECK(checked == 1092);
}

TEST_CASE("omega_H and X_W") {
    const Tuple t({0, 2, 6});
    CHECK(omega_H(t, 2) == std::vector<std::uint64_t>{1});
    CHECK(omega_H(t, 3) == std::vector<std::uint64_t>{2});
    CHECK(omega_H(t, 5) == std::vector<std::uint64_t>{1, 2});
    CHECK(enumerate_X_W(t, 30) == std::vector<std::uint64_t>{11, 17});
    CHECK_THROWS_AS(enumerate_X_W(t, 12), DomainError);

    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 30; ++trial) {
        std::set<std::int64_t> values;
        const int k = 1 + static_cast<int>(rng() % 6);
        while (static_cast<int>(values.size()) < k) values.insert(static_cast<std::int64_t>(rng() % 40));
        const Tuple h(std::vector<std::int64_t>(values.begin(), values.end()));
        for (std::uint64_t W : {2, 6, 30, 210, 2310}) {
            const auto xs = enumerate_X_W(h, W);
            CHECK(xs == naive_X_W(h, W));
            std::size_t product = 1;
            for (auto p : prime_divisors(W)) product *= omega_H(h, p).size();
            CHECK(xs.size() == product);
        }
    }
}

TEST_CASE("narrow tuple search") {
    auto r = search_narrow_tuple(3, 6, 1000);
    REQUIRE(r.tuple);
    CHECK(r.tuple->diameter() == 6);
    CHECK(is_admissible(*r.tuple).admissible);

    // Diameter 5 is impossible for k = 3: {0,2,4} covers 3.
    CHECK_FALSE(search_narrow_tuple(3, 5, 2000).tuple);

    auto a = search_narrow_tuple(10, 32, 200000, 3);
    auto b = search_narrow_tuple(10, 32, 200000, 3);
    REQUIRE(a.tuple);
    CHECK(a.tuple == b.tuple);
    CHECK(a.steps == b.steps);
    CHECK(a.tuple->k() == 10);
    CHECK(a.tuple->diameter() <= 32);
    CHECK(is_admissible(*a.tuple).admissible);
}

TEST_CASE("stored 50-tuple") {
    const auto t = load_tuple_file(std::filesystem::path(BGP_DATA_DIR) / "tuple50_d246.txt");
    CHECK(t.k() == 50);
    CHECK(t.diameter() == 246);
    CHECK(is_admissible(t).admissible);
    CHECK(naive_admissible(t.values()));
}
