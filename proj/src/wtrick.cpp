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

#include "bgp/wtrick.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include "json.hpp"

#include "bgp/errors.hpp"
#include "bgp/numeric.hpp"

namespace bgp {

void MaynardParams::validate() const {
    if (tuple.k() == 0) throw ConfigurationError("tuple must be non-empty");
    if (!(epsilon0 > 0.0 && epsilon0 < 1.0)) throw ConfigurationError("epsilon0 must lie in (0, 1)");
    if (m + 1 > tuple.k()) throw ConfigurationError("m + 1 must not exceed k");
}

double SieveContext::log_R() const { return eta0 * std::log(static_cast<double>(N)); }

std::uint64_t SieveContext::residue() const {
    if (!b) throw ConfigurationError("residue b has not been selected");
    return *b;
}

std::vector<std::string> SieveContext::violations() const {
    std::vector<std::string> out;
    const double kk = static_cast<double>(k());
    if (N < 1) out.push_back("N = floor(N'/W) must be positive");
    if (!(eta0 > 0.0)) out.push_back("eta0 must be positive");
    if (!(eta0 < params.epsilon0 / 2)) out.push_back("eta0 must be < epsilon0/2");
    if (eta0 > 1.0 / (4.0 * kk * j_max + 1.0)) out.push_back("eta0 must be <= 1/(4 k Jmax + 1)");
    if (!(c0 > 0.0)) out.push_back("c0 must be positive");
    if (!(c0 < std::pow(eta0, kk) / std::pow(4.0, kk))) out.push_back("c0 must be < eta0^k/4^k");
    if (!(R >= 2.0)) out.push_back("R = N^eta0 must be >= 2");
    if (b) {
        if (*b >= W) out.push_back("b must be a residue modulo W");
        if (gcd_u64(*b, W) != 1) out.push_back("gcd(b, W) must be 1");
        const auto allowed = enumerate_X_W(params.tuple, W);
        if (!std::binary_search(allowed.begin(), allowed.end(), *b)) {
            out.push_back("b must avoid -h_i modulo every p | W");
        }
    }
    return out;
}

std::vector<std::uint64_t> build_A(const MaynardParams& params, unsigned threads) {
    params.validate();
    const std::uint64_t top = params.n_prime + static_cast<std::uint64_t>(params.tuple.values().back());
    if (top > PrimeTable::kMaxLimit) throw CapacityError("N' + h_k exceeds the sieve capacity");
    PrimeTable table(std::max<std::uint64_t>(top, 2));
    return build_A(params, table, threads);
}

std::vector<std::uint64_t> build_A(const MaynardParams& params, const PrimeTable& table,
                                   unsigned threads) {
    params.validate();
    const std::uint64_t n_max = params.n_prime;
    if (n_max + static_cast<std::uint64_t>(params.tuple.values().back()) > table.limit()) {
        throw CapacityError("prime table does not cover N' + h_k");
    }
    const std::size_t chunks = static_cast<std::size_t>((n_max + kChunkSize - 1) / kChunkSize);
    std::vector<std::vector<std::uint64_t>> parts(chunks);
    const auto& h = params.tuple.values();
    const long double eps = params.epsilon0;

    parallel_for_chunks(chunks, threads, [&](std::size_t c) {
        const std::uint64_t lo = 1 + c * kChunkSize;
        const std::uint64_t hi = std::min<std::uint64_t>(n_max, lo + kChunkSize - 1);
        for (std::uint64_t n = lo; n <= hi; ++n) {
            std::uint64_t min_factor = std::numeric_limits<std::uint64_t>::max();
            unsigned primes = 0;
            for (std::int64_t shift : h) {
                const std::uint64_t v = n + static_cast<std::uint64_t>(shift);
                if (v < 2) continue;  // 1 has no prime factor
                const std::uint64_t p = table.lpf(v);
                if (p == v) ++primes;
                min_factor = std::min(min_factor, p);
            }
            if (primes < params.m + 1) continue;
            if (static_cast<long double>(min_factor) > std::pow(static_cast<long double>(n), eps)) {
                parts[c].push_back(n);
            }
        }
    });

    std::vector<std::uint64_t> out;
    for (auto& part : parts) out.insert(out.end(), part.begin(), part.end());
    return out;
}

std::vector<std::uint64_t> subset_by_prime_pattern(std::span<const std::uint64_t> A,
                                                   const Tuple& t,
                                                   std::span<const std::size_t> indices,
                                                   const PrimeTable& table) {
    if (indices.empty()) throw DomainError("prime pattern needs at least one index");
    for (std::size_t i : indices) {
        if (i >= t.k()) throw DomainError("prime pattern index out of range");
    }
    std::vector<std::uint64_t> out;
    for (std::uint64_t n : A) {
        bool all = std::all_of(indices.begin(), indices.end(), [&](std::size_t i) {
            return is_prime(Integer(static_cast<unsigned long>(n + static_cast<std::uint64_t>(t[i]))),
                            table);
        });
        if (all) out.push_back(n);
    }
    return out;
}

std::uint64_t support_begin(std::uint64_t N) { return ceil_sqrt(N); }

std::uint64_t support_end(std::uint64_t N) {
    const std::uint64_t s = ceil_sqrt(N);
    return N >= s ? N - s : 0;
}

ResidueSelection select_residue(std::span<const std::uint64_t> A, const Tuple& t,
                                std::uint64_t W, std::uint64_t N) {
    ResidueSelection out;
    for (std::uint64_t b : enumerate_X_W(t, W)) {
        if (gcd_u64(b, W) == 1) out.candidates.push_back(b);
    }
    if (out.candidates.empty()) throw ConfigurationError("X_W has no residue coprime to W");
    out.counts.assign(out.candidates.size(), 0);

    const std::uint64_t lo = support_begin(N), hi = support_end(N);
    for (std::uint64_t n : A) {
        const std::uint64_t b = n % W;
        const std::uint64_t x = n / W;
        if (x < lo || x > hi) continue;
        auto it = std::lower_bound(out.candidates.begin(), out.candidates.end(), b);
        if (it != out.candidates.end() && *it == b) {
            ++out.counts[static_cast<std::size_t>(it - out.candidates.begin())];
        }
    }
    // max_element keeps the first maximum, i.e. the smallest b.
    auto best = std::max_element(out.counts.begin(), out.counts.end());
    const std::size_t idx = static_cast<std::size_t>(best - out.counts.begin());
    out.b = out.candidates[idx];
    out.count = *best;
    out.empty_warning = out.count == 0;

    const double k = static_cast<double>(t.k());
    double phi = static_cast<double>(W);
    for (std::uint64_t p : prime_divisors(W)) phi *= 1.0 - 1.0 / static_cast<double>(p);
    const double logN = std::log(static_cast<double>(N));
    out.floor_factor =
        std::pow(static_cast<double>(W) / phi, k) * static_cast<double>(N) / std::pow(logN, k);
    return out;
}

double IndicatorTable::mean() const {
    return N == 0 ? 0.0 : value * static_cast<double>(positions.size()) / static_cast<double>(N);
}

double IndicatorTable::at(std::int64_t x) const {
    if (x < 1) return 0.0;
    return std::binary_search(positions.begin(), positions.end(), static_cast<std::uint64_t>(x))
               ? value
               : 0.0;
}

std::vector<double> IndicatorTable::dense() const {
    std::vector<double> out(N, 0.0);
    for (std::uint64_t x : positions) out[x - 1] = value;
    return out;
}

IndicatorTable build_f_A(std::span<const std::uint64_t> A, const SieveContext& ctx) {
    IndicatorTable table;
    table.N = ctx.N;
    const std::uint64_t b = ctx.residue();
    const double k = static_cast<double>(ctx.k());
    const double log_N = std::log(static_cast<double>(ctx.N));
    table.value = ctx.c0 * std::pow(static_cast<double>(ctx.phi_W) * log_N / static_cast<double>(ctx.W), k);
    const std::uint64_t lo = support_begin(ctx.N), hi = support_end(ctx.N);
    for (std::uint64_t n : A) {
        if (n < b || (n - b) % ctx.W != 0) continue;
        const std::uint64_t x = (n - b) / ctx.W;
        if (x >= lo && x <= hi) table.positions.push_back(x);
    }
    std::sort(table.positions.begin(), table.positions.end());
    return table;
}

SieveContext choose_parameters(const MaynardParams& params, unsigned j_max,
                               const ParameterOverrides& overrides) {
    params.validate();
    if (params.n_prime < 100) throw ConfigurationError("N' must be at least 100");
    if (j_max == 0) throw ConfigurationError("Jmax must be at least 1");

    SieveContext ctx;
    ctx.params = params;
    ctx.j_max = j_max;
    if (overrides.w) {
        ctx.w = *overrides.w;
    } else {
        const double lll = std::log(std::log(std::log(static_cast<double>(params.n_prime))));
        ctx.w = std::max<std::uint64_t>(2, lll > 0 ? static_cast<std::uint64_t>(std::floor(lll)) : 0);
    }
    ctx.W = primorial(ctx.w);
    ctx.phi_W = 1;
    for (std::uint64_t p : small_primes(ctx.w)) ctx.phi_W *= p - 1;
    ctx.N = params.n_prime / ctx.W;

    const double k = static_cast<double>(params.tuple.k());
    ctx.eta0 = overrides.eta0.value_or(
        std::min(params.epsilon0 / 2.0, 1.0 / (4.0 * k * j_max + 1.0)) / 2.0);
    ctx.c0 = overrides.c0.value_or(std::pow(ctx.eta0, k) / std::pow(4.0, k) / 2.0);
    ctx.R = ctx.N > 0 ? std::pow(static_cast<double>(ctx.N), ctx.eta0) : 0.0;

    auto problems = ctx.violations();
    if (!problems.empty()) {
        std::string what = "infeasible parameters:";
        for (const auto& p : problems) what += " " + p + ";";
        throw ConfigurationError(what);
    }
    return ctx;
}

void export_A(const std::filesystem::path& path, std::span<const std::uint64_t> A,
              const MaynardParams& params) {
    std::ofstream out(path);
    if (!out) throw DomainError("cannot write " + path.string());
    nlohmann::json header = {{"tuple", params.tuple.values()},
                             {"m", params.m},
                             {"epsilon0", params.epsilon0},
                             {"n_prime", params.n_prime},
                             {"count", A.size()}};
    out << header.dump() << '\n';
    for (std::uint64_t n : A) out << n << '\n';
}

ImportedA import_A(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DomainError("cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line)) throw DomainError("missing header line in " + path.string());
    ImportedA out;
    try {
        auto header = nlohmann::json::parse(line);
        out.params.tuple = Tuple(header.at("tuple").get<std::vector<std::int64_t>>());
        out.params.m = header.at("m").get<unsigned>();
        out.params.epsilon0 = header.at("epsilon0").get<double>();
        out.params.n_prime = header.at("n_prime").get<std::uint64_t>();
    } catch (const nlohmann::json::exception& e) {
        throw DomainError(std::string("bad header in ") + path.string() + ": " + e.what());
    }
    std::uint64_t v;
    while (in >> v) out.values.push_back(v);
    if (!std::is_sorted(out.values.begin(), out.values.end())) {
        throw DomainError("set file is not sorted");
    }
    return out;
}

}  // namespace bgp
