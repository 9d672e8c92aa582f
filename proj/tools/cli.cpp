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

#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <gmp.h>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>

#include "bgp/admissible.hpp"
#include "bgp/arith.hpp"
#include "bgp/correlation.hpp"
#include "bgp/errors.hpp"
#include "bgp/local_factors.hpp"
#include "bgp/progressions.hpp"
#include "bgp/sieve_measure.hpp"
#include "bgp/wtrick.hpp"

#ifndef BGP_VERSION
#define BGP_VERSION "unknown"
#endif

namespace bgp::cli {

namespace {

using Json = nlohmann::ordered_json;

Json to_json(const Integer& v) {
    if (v.fits_slong_p()) return v.get_si();
    return v.get_str();
}

Json to_json(const std::vector<Integer>& values) {
    Json out = Json::array();
    for (const auto& v : values) out.push_back(to_json(v));
    return out;
}

std::vector<std::int64_t> parse_int_list(const std::string& text) {
    std::string spaced = text;
    std::replace(spaced.begin(), spaced.end(), ',', ' ');
    std::istringstream in(spaced);
    std::vector<std::int64_t> out;
    std::int64_t v;
    while (in >> v) out.push_back(v);
    if (!in.eof()) throw DomainError("cannot parse integer list '" + text + "'");
    return out;
}

std::vector<std::uint64_t> parse_uint_list(const std::string& text) {
    std::vector<std::uint64_t> out;
    for (auto v : parse_int_list(text)) {
        if (v < 0) throw DomainError("negative value in '" + text + "'");
        out.push_back(static_cast<std::uint64_t>(v));
    }
    return out;
}

std::string join(const std::vector<Integer>& values, char sep) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += sep;
        out += values[i].get_str();
    }
    return out;
}

// Flags shared by every command that builds a SieveContext.
struct ContextFlags {
    std::string tuple;
    std::string tuple_file;
    unsigned m = 1;
    double eps0 = 0.2;
    std::uint64_t nprime = 0;
    std::optional<std::uint64_t> w;
    std::optional<double> eta0;
    std::optional<double> c0;
    std::optional<unsigned> jmax;

    void add(CLI::App* sub) {
        sub->add_option("--tuple", tuple, "Shifts h_1 < ... < h_k, e.g. \"0 2\"");
        sub->add_option("--tuple-file", tuple_file, "File with one line of shifts");
        sub->add_option("--m", m, "At least m+1 shifts must be prime")->capture_default_str();
        sub->add_option("--eps0", eps0, "Roughness exponent epsilon0")->capture_default_str();
        sub->add_option("--nprime", nprime, "Range N' for the set A")->required();
        sub->add_option("--w", w, "Override w");
        sub->add_option("--eta0", eta0, "Override eta0");
        sub->add_option("--c0", c0, "Override c0");
        sub->add_option("--jmax", jmax, "Largest number of shifted forms");
    }

    MaynardParams params() const {
        MaynardParams p;
        if (!tuple.empty() && !tuple_file.empty()) {
            throw ConfigurationError("give --tuple or --tuple-file, not both");
        }
        if (!tuple_file.empty()) {
            p.tuple = load_tuple_file(tuple_file);
        } else if (!tuple.empty()) {
            p.tuple = parse_tuple(tuple);
        } else {
            throw ConfigurationError("a tuple is required (--tuple or --tuple-file)");
        }
        p.m = m;
        p.epsilon0 = eps0;
        p.n_prime = nprime;
        return p;
    }

    ParameterOverrides overrides() const { return {w, eta0, c0}; }
};

struct Prepared {
    SieveContext ctx;
    std::vector<std::uint64_t> A;
    ResidueSelection selection;
};

Prepared prepare(const ContextFlags& flags, unsigned j_default, unsigned threads) {
    Prepared out;
    const auto params = flags.params();
    out.ctx = choose_parameters(params, flags.jmax.value_or(j_default), flags.overrides());
    out.A = build_A(params, threads);
    out.selection = select_residue(out.A, params.tuple, out.ctx.W, out.ctx.N);
    out.ctx.b = out.selection.b;
    if (auto problems = out.ctx.violations(); !problems.empty()) {
        throw ConfigurationError("selected residue is invalid: " + problems.front());
    }
    return out;
}

Json context_json(const SieveContext& ctx) {
    Json j;
    j["tuple"] = ctx.params.tuple.values();
    j["k"] = ctx.k();
    j["m"] = ctx.params.m;
    j["epsilon0"] = ctx.params.epsilon0;
    j["n_prime"] = ctx.params.n_prime;
    j["j_max"] = ctx.j_max;
    j["w"] = ctx.w;
    j["W"] = ctx.W;
    j["phi_W"] = ctx.phi_W;
    j["b"] = ctx.b ? Json(*ctx.b) : Json(nullptr);
    j["N"] = ctx.N;
    j["eta0"] = ctx.eta0;
    j["R"] = ctx.R;
    j["log_R"] = ctx.log_R();
    j["c0"] = ctx.c0;
    return j;
}

Json selection_json(const ResidueSelection& s) {
    Json j;
    j["b"] = s.b;
    j["count"] = s.count;
    j["empty_warning"] = s.empty_warning;
    j["candidates"] = s.candidates;
    j["counts"] = s.counts;
    j["floor_factor"] = s.floor_factor;
    j["floor_symbolic"] = s.floor_symbolic;
    return j;
}

// Appends "--key value" for config-file entries not given on the command
// line, so flags win over the file.
std::vector<std::string> merge_config(const std::vector<std::string>& args) {
    std::optional<std::string> path;
    std::set<std::string> given;
    for (std::size_t i = 0; i < args.size(); ++i) {
        const auto& a = args[i];
        if (a.rfind("--", 0) != 0) continue;
        const auto eq = a.find('=');
        const std::string name = a.substr(2, eq == std::string::npos ? std::string::npos : eq - 2);
        given.insert(name);
        if (name == "config") {
            if (eq != std::string::npos) {
                path = a.substr(eq + 1);
            } else if (i + 1 < args.size()) {
                path = args[i + 1];
            }
        }
    }
    std::vector<std::string> merged = args;
    if (!path) return merged;

    std::ifstream in(*path);
    if (!in) throw ConfigurationError("cannot open config file " + *path);
    Json config;
    try {
        config = Json::parse(in);
    } catch (const Json::exception& e) {
        throw ConfigurationError("config file is not valid JSON: " + std::string(e.what()));
    }
    if (!config.is_object()) throw ConfigurationError("config file must hold a JSON object");
    for (const auto& [key, value] : config.items()) {
        if (given.count(key) || key == "config") continue;
        if (value.is_boolean()) {
            if (value.get<bool>()) merged.push_back("--" + key);
        } else if (value.is_string()) {
            merged.push_back("--" + key);
            merged.push_back(value.get<std::string>());
        } else if (value.is_number()) {
            merged.push_back("--" + key);
            merged.push_back(value.dump());
        } else {
            throw ConfigurationError("config value for '" + key + "' must be a string, number or bool");
        }
    }
    return merged;
}

// Options that were set, keyed by long name; usable as a config file.
Json echo_config(const CLI::App& app, const CLI::App& sub) {
    Json config = Json::object();
    for (const CLI::App* a : {&app, &sub}) {
        for (const CLI::Option* opt : a->get_options()) {
            const std::string name = opt->get_single_name();
            if (name == "help" || name == "version" || name == "config" || opt->count() == 0) continue;
            if (opt->get_expected_min() == 0) {
                config[name] = true;
            } else {
                config[name] = opt->results().back();
            }
        }
    }
    return config;
}

struct Globals {
    bool csv = false;
    std::uint64_t seed = 0;
    unsigned threads = 0;
    std::string config;
    std::string output;
};

// Small exact checks over every module.
Json selftest(unsigned threads) {
    Json checks = Json::array();
    auto check = [&](const std::string& name, bool passed) {
        checks.push_back(Json{{"check", name}, {"passed", passed}});
    };

    auto adm = is_admissible(Tuple({0, 2, 6}));
    check("admissible {0,2,6}", adm.admissible && adm.witness.at(2) == 1 && adm.witness.at(3) == 1);
    auto inadm = is_admissible(Tuple({0, 2, 4}));
    check("inadmissible {0,2,4}", !inadm.admissible && inadm.covering_prime == 3u);
    check("X_30 {0,2,6}", enumerate_X_W(Tuple({0, 2, 6}), 30) == std::vector<std::uint64_t>{11, 17});

    PrimeTable table(1'000'000);
    check("pi(10^6)", table.prime_count(1'000'000) == 78498);
    check("mobius/phi", mobius(Integer(30), table) == -1 && euler_phi(Integer(30), table) == 8);

    auto polys = parse_polynomial_list("y,y+1");
    check("c_5(y, y+1) = 0", local_factor(polys, 5) == 0);
    std::vector<DivisibilityConstraint> parity{{Integer(2), Integer(1), Integer(0)},
                                               {Integer(2), Integer(1), Integer(1)}};
    check("alpha(2|y, 2|y+1) = 0", alpha_density(parity) == 0);

    LinearFormSystem sys = parse_form_system("W 30\nb 11\nr 0\nh 0 2 6\n");
    auto z = ZMatrix::uniform(3, 1, 5.0);
    bool unit = true;
    for (std::uint64_t p : {2, 3, 5}) unit = unit && euler_factor_Ep(sys, p, z) == Complex(1.0);
    check("E_p = 1 for p | W", unit);

    auto chi = normalize_chi();
    check("chi(0) > 1/2", chi.at_zero() > 0.5);

    auto rescaled = rescale_polys(parse_polynomial_list("y^2"), 6);
    check("rescale y^2 by 6", rescaled.front() == parse_polynomial("6*y^2"));

    auto hits = search_bounded_gap(parse_polynomial_list("y^2"), 4, 100, 10);
    bool found = std::any_of(hits.begin(), hits.end(), [](const ProgressionHit& h) {
        return h.x == 3 && h.y == 2 && h.gap == 4u;
    });
    check("bounded gap hit (3, 2, 4)", found);

    MaynardParams params;
    params.tuple = Tuple({0, 2});
    params.n_prime = 2000;
    params.epsilon0 = 0.3;
    auto A = build_A(params, threads);
    check("build_A threads", A == build_A(params, 1));

    return checks;
}

}  // namespace

std::string version_string() {
    std::ostringstream s;
    s << "bgprog " << BGP_VERSION << " (GMP " << gmp_version << ", C++ " << __cplusplus;
#if defined(__clang__)
    s << ", clang " << __clang_major__ << "." << __clang_minor__;
#elif defined(__GNUC__)
    s << ", gcc " << __GNUC__ << "." << __GNUC_MINOR__;
#endif
    s << ")";
    return s.str();
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Desk-scale experiments with sieve majorants and prime progressions", "bgprog"};
    app.fallthrough();
    app.require_subcommand(0, 1);
    app.set_version_flag("--version", version_string());

    Globals g;
    app.add_flag("--csv", g.csv, "Write CSV instead of JSON");
    app.add_option("--seed", g.seed, "Seed for sampled checks")->capture_default_str();
    app.add_option("--threads", g.threads, "Worker threads (0 = all cores)");
    app.add_option("--config", g.config, "JSON file of flag values; flags win");
    app.add_option("--output", g.output, "Write the report here instead of stdout");

    // sieve
    auto* sieve = app.add_subcommand("sieve", "Least-prime-factor sieve statistics");
    std::uint64_t sieve_limit = 0;
    sieve->add_option("--limit", sieve_limit, "Sieve limit")->required();

    // admissible
    auto* admissible = app.add_subcommand("admissible", "Check or search admissible tuples");
    std::string adm_tuple, adm_file;
    std::optional<std::uint64_t> adm_W, adm_search_k;
    std::int64_t adm_max_diameter = 0;
    std::uint64_t adm_budget = 1'000'000;
    admissible->add_option("--tuple", adm_tuple, "Shifts, e.g. \"0 2 6\"");
    admissible->add_option("--tuple-file", adm_file, "File with one line of shifts");
    admissible->add_option("--W", adm_W, "Also list X_W for this squarefree W");
    admissible->add_option("--search-k", adm_search_k, "Search for a narrow k-tuple instead");
    admissible->add_option("--max-diameter", adm_max_diameter, "Diameter bound for --search-k");
    admissible->add_option("--budget", adm_budget, "Move budget for --search-k")->capture_default_str();

    // maynard-set
    auto* maynard = app.add_subcommand("maynard-set", "Build A, choose parameters and the residue b");
    ContextFlags maynard_flags;
    maynard_flags.add(maynard);
    std::string maynard_export;
    maynard->add_option("--export", maynard_export, "Write A to this file");

    // nu-stats
    auto* nu = app.add_subcommand("nu-stats", "Statistics and majorization of nu on [1, N]");
    ContextFlags nu_flags;
    nu_flags.add(nu);
    std::size_t nu_buckets = 10;
    nu->add_option("--buckets", nu_buckets, "Histogram buckets")->capture_default_str();

    // local-factors
    auto* local = app.add_subcommand("local-factors", "Local factors and prime classes of linear forms");
    std::string forms_path;
    std::uint64_t pmax = 100, pmin = 2;
    local->add_option("--forms", forms_path, "Form file with W, b, r, h lines")->required();
    local->add_option("--pmax", pmax, "Largest prime")->capture_default_str();
    local->add_option("--pmin", pmin, "Smallest prime")->capture_default_str();

    // correlation
    auto* corr = app.add_subcommand("correlation", "Empirical correlation of nu along shifts");
    ContextFlags corr_flags;
    corr_flags.add(corr);
    std::string corr_shifts = "0";
    std::uint64_t corr_bad_limit = 10000;
    bool corr_euler = false;
    std::string corr_checkpoints = "100 1000 10000 100000";
    double corr_xi = 0.0;
    corr->add_option("--shifts", corr_shifts, "Shifts r_1 ... r_J")->capture_default_str();
    corr->add_option("--bad-limit", corr_bad_limit, "Bad primes are searched up to here")->capture_default_str();
    corr->add_flag("--euler", corr_euler, "Also run the Euler product experiment");
    corr->add_option("--checkpoints", corr_checkpoints, "Euler product checkpoints")->capture_default_str();
    corr->add_option("--xi", corr_xi, "Frequency for z = z' = (1 + i xi)/log R")->capture_default_str();

    // poly-forms
    auto* poly = app.add_subcommand("poly-forms", "Polynomial forms average of nu");
    ContextFlags poly_flags;
    poly_flags.add(poly);
    std::string poly_polys, poly_vars = "l";
    std::uint64_t poly_H = 10, poly_bad_limit = 10000;
    double poly_budget = 5e8;
    std::optional<std::uint64_t> tidy_limit;
    double tidy_c = 1.0;
    poly->add_option("--polys", poly_polys, "Q_1, ..., Q_J in the variables of --vars")->required();
    poly->add_option("--vars", poly_vars, "Variable letters")->capture_default_str();
    poly->add_option("--H", poly_H, "Grid side")->capture_default_str();
    poly->add_option("--bad-limit", poly_bad_limit, "Bad primes are searched up to here")->capture_default_str();
    poly->add_option("--budget", poly_budget, "Cap on H^d N J")->capture_default_str();
    poly->add_option("--tidy-limit", tidy_limit, "Also report tidy sums with primes up to here");
    poly->add_option("--tidy-c", tidy_c, "Log exponent in the tidy sum")->capture_default_str();

    // search
    auto* search = app.add_subcommand("search", "Search polynomial progressions in primes");
    std::string search_polys;
    std::uint64_t xmax = 100, ymax = 10;
    std::optional<std::uint64_t> bmax;
    bool first_only = false;
    search->add_option("--polys", search_polys, "P_1, ..., P_t in y")->required();
    search->add_option("--xmax", xmax, "Largest x")->capture_default_str();
    search->add_option("--ymax", ymax, "Largest y")->capture_default_str();
    search->add_option("--bmax", bmax, "Search shifted copies with gaps b <= bmax");
    search->add_flag("--first", first_only, "Stop at the first hit");

    // pipeline
    auto* pipe = app.add_subcommand("pipeline", "W-trick search for progressions inside A");
    ContextFlags pipe_flags;
    pipe_flags.add(pipe);
    std::string pipe_polys;
    std::uint64_t pipe_M = 10;
    std::size_t pipe_max_hits = 100;
    pipe->add_option("--polys", pipe_polys, "P_1, ..., P_t in y with P_j(0) = 0")->required();
    pipe->add_option("--M", pipe_M, "Range of y")->capture_default_str();
    pipe->add_option("--max-hits", pipe_max_hits, "Hits listed in the report")->capture_default_str();

    auto* self = app.add_subcommand("selftest", "Run the exact oracle checks");

    std::vector<std::string> merged;
    try {
        merged = merge_config(args);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kPrecondition;
    }
    std::vector<const char*> argv{"bgprog"};
    for (const auto& a : merged) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        if (code == 0) return kOk;
        err << app.help();
        return kUsage;
    }
    if (app.get_subcommands().empty()) {
        err << app.help();
        return kUsage;
    }
    const CLI::App* sub = app.get_subcommands().front();
    const std::string command = sub->get_name();

    std::ofstream file;
    if (!g.output.empty()) {
        file.open(g.output);
        if (!file) {
            err << "error: cannot write " << g.output << "\n";
            return kPrecondition;
        }
    }
    std::ostream& o = g.output.empty() ? out : file;

    Json report;
    report["schema_version"] = kSchemaVersion;
    report["command"] = command;
    report["config"] = echo_config(app, *sub);
    auto emit = [&]() { o << report.dump(2) << "\n"; };

    try {
        if (sub == sieve) {
            PrimeTable table(sieve_limit);
            const auto primes = table.primes();
            const std::uint64_t largest = primes.empty() ? 0 : primes.back();
            if (g.csv) {
                o << "limit,prime_count,largest_prime\n"
                  << sieve_limit << "," << primes.size() << "," << largest << "\n";
                return kOk;
            }
            report["limit"] = sieve_limit;
            report["prime_count"] = primes.size();
            report["largest_prime"] = largest;
            emit();
        } else if (sub == admissible) {
            Tuple t;
            if (adm_search_k) {
                auto found = search_narrow_tuple(*adm_search_k, adm_max_diameter, adm_budget, g.seed);
                report["steps"] = found.steps;
                if (!found.tuple) {
                    report["found"] = false;
                    emit();
                    return kOk;
                }
                report["found"] = true;
                t = *found.tuple;
            } else if (!adm_file.empty()) {
                t = load_tuple_file(adm_file);
            } else if (!adm_tuple.empty()) {
                t = parse_tuple(adm_tuple);
            } else {
                throw ConfigurationError("give --tuple, --tuple-file or --search-k");
            }
            const auto result = is_admissible(t);
            if (g.csv) {
                o << "tuple,k,diameter,admissible,covering_prime\n"
                  << format_tuple(t) << "," << t.k() << "," << t.diameter() << ","
                  << (result.admissible ? "true" : "false") << ","
                  << (result.covering_prime ? std::to_string(*result.covering_prime) : "") << "\n";
                return kOk;
            }
            report["tuple"] = t.values();
            report["k"] = t.k();
            report["diameter"] = t.diameter();
            report["admissible"] = result.admissible;
            Json witness = Json::object();
            for (const auto& [p, a] : result.witness) witness[std::to_string(p)] = a;
            report["witness"] = witness;
            report["covering_prime"] = result.covering_prime ? Json(*result.covering_prime) : Json(nullptr);
            if (adm_W) report["X_W"] = enumerate_X_W(t, *adm_W);
            emit();
        } else if (sub == maynard) {
            auto prep = prepare(maynard_flags, 1, g.threads);
            if (!maynard_export.empty()) export_A(maynard_export, prep.A, prep.ctx.params);
            const auto f = build_f_A(prep.A, prep.ctx);
            if (g.csv) {
                o << "n\n";
                for (auto n : prep.A) o << n << "\n";
                return kOk;
            }
            report["context"] = context_json(prep.ctx);
            report["A_size"] = prep.A.size();
            report["selection"] = selection_json(prep.selection);
            report["f_A"] = Json{{"value", f.value}, {"support_size", f.positions.size()}, {"mean", f.mean()}};
            emit();
        } else if (sub == nu) {
            auto prep = prepare(nu_flags, 1, g.threads);
            NuEvaluator ev(prep.ctx, normalize_chi());
            const auto stats = nu_stats(prep.ctx.N, ev, nu_buckets, g.threads);
            const auto major = verify_majorization(build_f_A(prep.A, prep.ctx), ev);
            if (g.csv) {
                o << "bucket_lo,bucket_hi,count\n";
                for (std::size_t i = 0; i < stats.buckets.size(); ++i) {
                    o << stats.bucket_edges[i] << "," << stats.bucket_edges[i + 1] << "," << stats.buckets[i] << "\n";
                }
                return kOk;
            }
            report["params"] = context_json(prep.ctx);
            report["N"] = stats.N;
            report["mean"] = stats.mean;
            report["min"] = stats.min;
            report["max"] = stats.max;
            report["histogram"] = Json{{"edges", stats.bucket_edges}, {"counts", stats.buckets}};
            Json mj{{"holds", major.holds}, {"checked", major.checked}, {"violations", major.violations}};
            if (major.first_violation) {
                mj["first_violation"] = Json{{"x", major.first_violation->x},
                                             {"f", major.first_violation->f},
                                             {"nu", major.first_violation->nu}};
            }
            report["majorization"] = mj;
            emit();
        } else if (sub == local) {
            const auto sys = load_form_system(forms_path);
            if (sys.form_count() > 63) throw CapacityError("at most 63 forms");
            const std::uint64_t all = sys.form_count() == 63 ? ~std::uint64_t{0} >> 1
                                                             : (std::uint64_t{1} << sys.form_count()) - 1;
            Json rows = Json::array();
            if (g.csv) o << "p,class,cp_num,cp_den\n";
            for (std::uint64_t p : small_primes(pmax)) {
                if (p < pmin) continue;
                const auto cls = classify_prime(sys, p);
                const Rational cp = linear_local_factor(sys, all, p);
                if (g.csv) {
                    o << p << "," << to_string(cls.kind) << "," << cp.get_num().get_str() << ","
                      << cp.get_den().get_str() << "\n";
                } else {
                    rows.push_back(Json{{"p", p},
                                        {"class", to_string(cls.kind)},
                                        {"cp_num", to_json(cp.get_num())},
                                        {"cp_den", to_json(cp.get_den())},
                                        {"obstruction", cls.obstruction}});
                }
            }
            if (g.csv) return kOk;
            const auto bad = bad_primes_linear(sys, pmax);
            report["rows"] = rows;
            report["bad_primes"] = bad.primes;
            Json pairs = Json::array();
            for (auto [a, b] : bad.degenerate_pairs) pairs.push_back(Json::array({a, b}));
            report["degenerate_pairs"] = pairs;
            report["bad_prime_sum"] = bad_prime_sum(sys, pmax);
            const auto est = verify_local_estimates(sys, pmin, pmax, g.seed);
            report["local_estimates"] = Json{{"primes_checked", est.primes_checked},
                                             {"subsets_checked", est.subsets_checked},
                                             {"empty_subset_exact", est.empty_subset_exact},
                                             {"non_terrible_bounded", est.non_terrible_bounded},
                                             {"max_p_cp", est.max_p_cp},
                                             {"max_p2_singleton_error", est.max_p2_singleton_error},
                                             {"max_p2_cp_multi", est.max_p2_cp_multi},
                                             {"all_in_unit_interval", est.all_in_unit_interval}};
            emit();
        } else if (sub == corr) {
            const auto shifts = parse_int_list(corr_shifts);
            if (shifts.empty()) throw DomainError("--shifts needs at least one value");
            auto prep = prepare(corr_flags, static_cast<unsigned>(shifts.size()), g.threads);
            NuEvaluator ev(prep.ctx, normalize_chi());
            const auto r = empirical_correlation(ev, shifts, prep.ctx.N, corr_bad_limit, g.threads);
            std::optional<EulerProductReport> euler;
            if (corr_euler) {
                const auto sys = form_system(prep.ctx, shifts);
                const auto z = ZMatrix::uniform(prep.ctx.k(), shifts.size(), ev.log_R(), corr_xi, corr_xi);
                const auto checkpoints = parse_uint_list(corr_checkpoints);
                euler = euler_product_experiment(sys, z, checkpoints);
            }
            if (g.csv) {
                if (euler) {
                    o << "P,product_re,product_im,distance,difference,bad_prime_sum\n";
                    for (const auto& c : euler->checkpoints) {
                        o << c.P << "," << c.product.real() << "," << c.product.imag() << "," << c.distance
                          << "," << c.difference << "," << c.bad_prime_sum << "\n";
                    }
                } else {
                    o << "N,average,bad_prime_sum,correction_magnitude,size_condition_met\n"
                      << r.N << "," << r.average << "," << r.bad_prime_sum << "," << r.correction_magnitude
                      << "," << (r.size_condition_met ? "true" : "false") << "\n";
                }
                return kOk;
            }
            report["context"] = context_json(prep.ctx);
            report["shifts"] = r.shifts;
            report["N"] = r.N;
            report["average"] = r.average;
            report["bad_prime_limit"] = r.bad_prime_limit;
            report["bad_primes"] = r.bad_primes;
            report["bad_prime_sum"] = r.bad_prime_sum;
            report["predicted_main"] = r.predicted_main;
            report["correction_magnitude"] = r.correction_magnitude;
            report["size_condition_met"] = r.size_condition_met;
            report["edge_fraction"] = r.edge_fraction;
            report["runtime_seconds"] = r.runtime_seconds;
            if (euler) {
                Json cps = Json::array();
                for (const auto& c : euler->checkpoints) {
                    cps.push_back(Json{{"P", c.P},
                                       {"product", {c.product.real(), c.product.imag()}},
                                       {"distance", c.distance},
                                       {"difference", c.difference},
                                       {"bad_prime_sum", c.bad_prime_sum}});
                }
                report["euler"] = Json{{"target", euler->target},
                                       {"checkpoints", cps},
                                       {"bounded", euler->bounded},
                                       {"differences_decreasing", euler->differences_decreasing}};
            }
            emit();
        } else if (sub == poly) {
            const auto Q = parse_polynomial_list(poly_polys, poly_vars);
            auto prep = prepare(poly_flags, static_cast<unsigned>(Q.size()), g.threads);
            NuEvaluator ev(prep.ctx, normalize_chi());
            const auto r = polynomial_forms_average(ev, Q, poly_H, prep.ctx.N, poly_bad_limit, poly_budget,
                                                    g.threads);
            Json tidy = Json::array();
            if (tidy_limit) {
                const Integer W(static_cast<unsigned long>(prep.ctx.W));
                const auto& h = prep.ctx.params.tuple.values();
                for (std::size_t j = 0; j < Q.size(); ++j) {
                    for (std::size_t jj = j + 1; jj < Q.size(); ++jj) {
                        for (std::size_t i = 0; i < h.size(); ++i) {
                            for (std::size_t ii = 0; ii < h.size(); ++ii) {
                                const auto dq = (Q[j] - Q[jj]) * W + Integer(static_cast<long>(h[i] - h[ii]));
                                const auto t = tidy_sum(dq, poly_H, *tidy_limit, tidy_c, prep.ctx.w);
                                tidy.push_back(Json{{"i", i + 1}, {"j", j + 1}, {"i2", ii + 1}, {"j2", jj + 1},
                                                    {"delta_q", dq.to_string(poly_vars)},
                                                    {"value", t.value},
                                                    {"vanishing_primes", t.vanishing_primes},
                                                    {"vanishing_sum", t.vanishing_sum}});
                            }
                        }
                    }
                }
            }
            if (g.csv) {
                o << "index,inner_average\n";
                for (std::size_t i = 0; i < r.per_point.size(); ++i) o << i << "," << r.per_point[i] << "\n";
                return kOk;
            }
            report["context"] = context_json(prep.ctx);
            Json qs = Json::array();
            for (const auto& q : Q) qs.push_back(q.to_string(poly_vars));
            report["polys"] = qs;
            report["N"] = r.N;
            report["H"] = r.H;
            report["dimension"] = r.dimension;
            report["grid_points"] = r.grid_points;
            report["average"] = r.average;
            report["bad_prime_limit"] = r.bad_prime_limit;
            report["bad_prime_diagnostic"] = r.bad_prime_diagnostic;
            if (tidy_limit) report["tidy_sums"] = tidy;
            emit();
        } else if (sub == search) {
            const auto P = parse_polynomial_list(search_polys, "y");
            std::vector<ProgressionHit> hits;
            if (bmax) {
                hits = search_bounded_gap(P, *bmax, xmax, ymax, first_only);
            } else {
                Integer top = 0;
                for (std::uint64_t y = 1; y <= ymax; ++y) {
                    for (const auto& p : P) top = std::max(top, Integer(p(Integer(static_cast<unsigned long>(y)))));
                }
                top += static_cast<unsigned long>(xmax);
                if (top > 1'000'000'000) throw CapacityError("search range exceeds the 10^9 prime table");
                PrimeTable table(std::max<std::uint64_t>(2, top.get_ui()));
                std::vector<std::uint64_t> primes(table.primes().begin(), table.primes().end());
                hits = search_in_A(primes, P, xmax, ymax, first_only);
            }
            if (g.csv) {
                o << "x,y,b,values\n";
                for (const auto& h : hits) {
                    o << h.x.get_str() << "," << h.y.get_str() << "," << (h.gap ? std::to_string(*h.gap) : "")
                      << "," << join(h.values, ';') << "\n";
                }
                return kOk;
            }
            report["hit_count"] = hits.size();
            o << report.dump() << "\n";
            for (const auto& h : hits) {
                Json line{{"x", to_json(h.x)}, {"y", to_json(h.y)}};
                if (h.gap) line["b"] = *h.gap;
                line["values"] = to_json(h.values);
                if (h.gap) {
                    std::vector<Integer> shifted;
                    for (const auto& v : h.values) shifted.push_back(v + static_cast<unsigned long>(*h.gap));
                    line["shifted_values"] = to_json(shifted);
                }
                o << line.dump() << "\n";
            }
        } else if (sub == pipe) {
            const auto P = parse_polynomial_list(pipe_polys, "y");
            PipelineOptions options;
            options.j_max = pipe_flags.jmax.value_or(1);
            options.overrides = pipe_flags.overrides();
            options.M = pipe_M;
            options.threads = g.threads;
            const auto r = theorem_one_pipeline(pipe_flags.params(), P, options);
            if (g.csv) {
                o << "x,y,x0,y0,values\n";
                for (const auto& h : r.hits) {
                    o << h.x << "," << h.y << "," << h.x0.get_str() << "," << h.y0.get_str() << ","
                      << join(h.values, ';') << "\n";
                }
            } else {
                report["context"] = context_json(r.context);
                report["selection"] = selection_json(r.selection);
                report["A_size"] = r.A_size;
                report["f_mean"] = r.f_mean;
                Json qs = Json::array();
                for (const auto& q : r.rescaled) qs.push_back(q.to_string());
                report["rescaled"] = qs;
                report["M"] = r.M;
                report["lambda"] = r.lambda;
                report["lambda_recount"] = r.lambda_recount;
                report["hit_count"] = r.hits.size();
                Json hits = Json::array();
                for (std::size_t i = 0; i < r.hits.size() && i < pipe_max_hits; ++i) {
                    const auto& h = r.hits[i];
                    hits.push_back(Json{{"x", h.x}, {"y", h.y}, {"x0", to_json(h.x0)}, {"y0", to_json(h.y0)},
                                        {"values", to_json(h.values)}});
                }
                report["hits"] = hits;
                report["consistent"] = r.consistent;
                emit();
            }
            if (!r.consistent) {
                err << "error: lambda and the coset search disagree\n";
                return kPrecondition;
            }
        } else if (sub == self) {
            const auto checks = selftest(g.threads);
            const bool passed = std::all_of(checks.begin(), checks.end(),
                                            [](const Json& c) { return c["passed"].get<bool>(); });
            if (g.csv) {
                o << "check,passed\n";
                for (const auto& c : checks) {
                    o << c["check"].get<std::string>() << "," << (c["passed"].get<bool>() ? "true" : "false") << "\n";
                }
            } else {
                report["checks"] = checks;
                report["passed"] = passed;
                emit();
            }
            return passed ? kOk : kPrecondition;
        }
    } catch (const CapacityError& e) {
        err << "capacity error: " << e.what() << "\n";
        return kCapacity;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kPrecondition;
    }
    return kOk;
}

}  // namespace bgp::cli
