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

#include "bgp/admissible.hpp"

#include <algorithm>
#include <fstream>
#include <random>
#include <sstream>

#include "bgp/arith.hpp"
#include "bgp/errors.hpp"

namespace bgp {

Tuple::Tuple(std::vector<std::int64_t> values) : h_(std::move(values)) {
    for (std::size_t i = 0; i < h_.size(); ++i) {
        if (h_[i] < 0) throw DomainError("tuple entries must be non-negative");
        if (i > 0 && h_[i] <= h_[i - 1]) {
            throw DomainError(h_[i] == h_[i - 1] ? "tuple entries must be distinct"
                                                 : "tuple entries must be sorted");
        }
    }
}

Tuple parse_tuple(std::string_view text) {
    std::string spaced(text);
    std::replace(spaced.begin(), spaced.end(), ',', ' ');
    std::istringstream in{spaced};
    std::vector<std::int64_t> values;
    std::string token;
    while (in >> token) {
        std::size_t used = 0;
        std::int64_t v;
        try {
            v = std::stoll(token, &used);
        } catch (const std::exception&) {
            throw DomainError("tuple entry '" + token + "' is not an integer");
        }
        if (used != token.size()) throw DomainError("tuple entry '" + token + "' is not an integer");
        values.push_back(v);
    }
    if (values.empty()) throw DomainError("empty tuple");
    return Tuple(std::move(values));
}

std::string format_tuple(const Tuple& t) {
    std::ostringstream out;
    for (std::size_t i = 0; i < t.k(); ++i) out << (i ? " " : "") << t[i];
    return out.str();
}

Tuple load_tuple_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DomainError("cannot open tuple file " + path.string());
    std::string line;
    std::getline(in, line);
    return parse_tuple(line);
}

void save_tuple_file(const std::filesystem::path& path, const Tuple& t) {
    std::ofstream out(path);
    if (!out) throw DomainError("cannot write tuple file " + path.string());
    out << format_tuple(t) << '\n';
}

AdmissibilityResult is_admissible(const Tuple& t) {
    AdmissibilityResult result;
    result.admissible = true;
    for (std::uint64_t p : small_primes(t.k())) {
        std::vector<bool> hit(p, false);
        for (std::int64_t h : t.values()) hit[residue(h, p)] = true;
        auto free = std::find(hit.begin(), hit.end(), false);
        if (free == hit.end()) {
            result.admissible = false;
            result.covering_prime = p;
            result.witness.clear();
            return result;
        }
        result.witness[p] = static_cast<std::uint64_t>(free - hit.begin());
    }
    return result;
}

std::vector<std::uint64_t> omega_H(const Tuple& t, std::uint64_t p) {
    if (p < 2) throw DomainError("omega_H requires a prime modulus");
    std::vector<bool> excluded(p, false);
    for (std::int64_t h : t.values()) excluded[residue(-h, p)] = true;
    std::vector<std::uint64_t> out;
    for (std::uint64_t b = 0; b < p; ++b) {
        if (!excluded[b]) out.push_back(b);
    }
    return out;
}

std::vector<std::uint64_t> enumerate_X_W(const Tuple& t, std::uint64_t W) {
    constexpr std::size_t kMaxResidues = 50'000'000;
    if (W == 0 || !is_squarefree(W)) throw DomainError("W must be a positive squarefree integer");

    std::vector<std::uint64_t> residues{0};
    std::uint64_t modulus = 1;
    for (std::uint64_t p : prime_divisors(W)) {
        const std::vector<std::uint64_t> omega = omega_H(t, p);
        if (residues.size() * omega.size() > kMaxResidues) {
            throw CapacityError("X_W has more than 5e7 residues");
        }
        // x = r + modulus * ((s - r) * modulus^{-1} mod p) solves x = r (modulus), x = s (p).
        const std::uint64_t inv = inverse_mod(modulus % p, p);
        std::vector<std::uint64_t> next;
        next.reserve(residues.size() * omega.size());
        for (std::uint64_t r : residues) {
            for (std::uint64_t s : omega) {
                std::uint64_t lift = mul_mod((s + p - r % p) % p, inv, p);
                next.push_back(r + modulus * lift);
            }
        }
        residues = std::move(next);
        modulus *= p;
    }
    std::sort(residues.begin(), residues.end());
    return residues;
}

namespace {

class ResidueSieveSearch {
  public:
    ResidueSieveSearch(std::size_t k, std::int64_t diameter, const Tuple& seed)
        : k_(k), primes_(small_primes(k)), cover_(static_cast<std::size_t>(diameter) + 1, 0) {
        for (std::uint64_t p : primes_) {
            std::vector<bool> hit(p, false);
            for (std::int64_t h : seed.values()) hit[residue(h, p)] = true;
            auto free = std::find(hit.begin(), hit.end(), false);
            classes_.push_back(static_cast<std::uint64_t>(free - hit.begin()) % p);
        }
        for (std::size_t i = 0; i < primes_.size(); ++i) apply(i, classes_[i], +1);
        survivors_ = static_cast<std::size_t>(std::count(cover_.begin(), cover_.end(), 0));
    }

    std::size_t survivors() const { return survivors_; }
    std::size_t prime_count() const { return primes_.size(); }
    std::uint64_t prime(std::size_t i) const { return primes_[i]; }
    std::uint64_t current(std::size_t i) const { return classes_[i]; }

    // Change in survivor count if class a_i is replaced by r.
    long delta(std::size_t i, std::uint64_t r) const {
        const std::uint64_t p = primes_[i];
        const std::uint64_t old = classes_[i];
        long d = 0;
        for (std::size_t n = old; n < cover_.size(); n += p) {
            if (cover_[n] == 1) ++d;
        }
        for (std::size_t n = r; n < cover_.size(); n += p) {
            unsigned c = cover_[n] - (n % p == old ? 1u : 0u);
            if (c == 0) --d;
        }
        return d;
    }

    void move(std::size_t i, std::uint64_t r, long d) {
        apply(i, classes_[i], -1);
        apply(i, r, +1);
        classes_[i] = r;
        survivors_ = static_cast<std::size_t>(static_cast<long>(survivors_) + d);
    }

    Tuple extract() const {
        std::vector<std::int64_t> values;
        for (std::size_t n = 0; n < cover_.size() && values.size() < k_; ++n) {
            if (cover_[n] == 0) values.push_back(static_cast<std::int64_t>(n));
        }
        const std::int64_t base = values.front();
        for (auto& v : values) v -= base;
        return Tuple(std::move(values));
    }

  private:
    void apply(std::size_t i, std::uint64_t r, int sign) {
        const std::uint64_t p = primes_[i];
        for (std::size_t n = r; n < cover_.size(); n += p) {
            cover_[n] = static_cast<unsigned>(static_cast<int>(cover_[n]) + sign);
        }
    }

    std::size_t k_;
    std::vector<std::uint64_t> primes_;
    std::vector<std::uint64_t> classes_;
    std::vector<unsigned> cover_;
    std::size_t survivors_ = 0;
};

}  // namespace

NarrowTupleSearch search_narrow_tuple(std::size_t k, std::int64_t max_diameter,
                                      std::uint64_t budget, std::uint64_t seed) {
    if (k == 0) throw DomainError("search_narrow_tuple requires k >= 1");
    if (max_diameter < 0) throw DomainError("max_diameter must be non-negative");

    NarrowTupleSearch out;
    std::vector<std::int64_t> seed_values;
    for (std::uint64_t limit = 2 * k + 16; seed_values.size() < k; limit *= 2) {
        seed_values.clear();
        for (std::uint64_t p : small_primes(limit)) {
            if (p > k && seed_values.size() < k) seed_values.push_back(static_cast<std::int64_t>(p));
        }
    }
    const std::int64_t base = seed_values.front();
    for (auto& v : seed_values) v -= base;
    Tuple greedy(std::move(seed_values));
    if (greedy.diameter() <= max_diameter) {
        out.tuple = greedy;
        return out;
    }

    ResidueSieveSearch search(k, max_diameter, greedy);
    std::mt19937_64 rng(seed);
    std::uint64_t& steps = out.steps;

    while (search.survivors() < k && steps < budget) {
        bool improved = false;
        for (std::size_t i = 0; i < search.prime_count() && !improved; ++i) {
            const std::uint64_t p = search.prime(i);
            for (std::uint64_t r = 0; r < p && steps < budget; ++r) {
                if (r == search.current(i)) continue;
                ++steps;
                long d = search.delta(i, r);
                if (d > 0) {
                    search.move(i, r, d);
                    improved = true;
                    break;
                }
            }
        }
        if (improved) continue;

        // Local optimum: wander along plateaus, occasionally stepping down.
        for (std::uint64_t walk = 0; walk < 4096 && steps < budget; ++walk) {
            std::size_t i = rng() % search.prime_count();
            std::uint64_t r = rng() % search.prime(i);
            if (r == search.current(i)) continue;
            ++steps;
            long d = search.delta(i, r);
            if (d >= 0 || rng() % 50 == 0) search.move(i, r, d);
            if (search.survivors() >= k) break;
        }
    }
    if (search.survivors() >= k) {
        Tuple found = search.extract();
        if (!is_admissible(found).admissible) {
            throw std::logic_error("residue search produced an inadmissible tuple");
        }
        out.tuple = std::move(found);
    }
    return out;
}

}  // namespace bgp
