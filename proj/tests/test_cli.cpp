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

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"

#include "cli.hpp"

using Json = nlohmann::ordered_json;

namespace {

struct Result {
    int code;
    std::string out, err;
};

Result run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = bgp::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::filesystem::path temp_file(const std::string& name, const std::string& content) {
    const auto path = std::filesystem::temp_directory_path() / name;
    std::ofstream(path) << content;
    return path;
}

const std::vector<std::string> kNuArgs{"nu-stats", "--tuple", "0 2", "--nprime", "100000",
                                       "--eps0", "0.3", "--w", "2", "--eta0", "0.11"};

}  // namespace

TEST_CASE("exit codes") {
    CHECK(run({}).code == bgp::cli::kUsage);
    CHECK(run({"frobnicate"}).code == bgp::cli::kUsage);
    CHECK(run({"sieve", "--limit", "10", "--bogus"}).code == bgp::cli::kUsage);
    CHECK(run({"sieve"}).code == bgp::cli::kUsage);
    CHECK(run({"sieve", "--limit", "ten"}).code == bgp::cli::kUsage);
    CHECK(run({"--help"}).code == bgp::cli::kOk);
    CHECK(run({"sieve", "--limit", "100"}).code == bgp::cli::kOk);

    CHECK(run({"admissible"}).code == bgp::cli::kPrecondition);
    CHECK(run({"admissible", "--tuple", "0 2 2"}).code == bgp::cli::kPrecondition);
    CHECK(run({"search", "--polys", "y^^2"}).code == bgp::cli::kPrecondition);
    CHECK(run({"search", "--polys", "y", "--bmax", "0"}).code == bgp::cli::kPrecondition);
    CHECK(run({"local-factors", "--forms", "/nonexistent/forms.txt"}).code == bgp::cli::kPrecondition);
    CHECK(run({"maynard-set", "--tuple", "0 2", "--nprime", "100000"}).code == bgp::cli::kPrecondition);
    CHECK(run({"pipeline", "--tuple", "0 2", "--nprime", "100000", "--polys", "y+1"}).code ==
          bgp::cli::kPrecondition);
    CHECK(run({"--config", "/nonexistent/config.json", "sieve", "--limit", "10"}).code == bgp::cli::kPrecondition);

    CHECK(run({"sieve", "--limit", "5000000000"}).code == bgp::cli::kCapacity);
    CHECK(run({"search", "--polys", "y^9", "--ymax", "100"}).code == bgp::cli::kCapacity);
}

TEST_CASE("version") {
    const auto r = run({"--version"});
    CHECK(r.code == 0);
    CHECK(r.out.find("bgprog 0.1.0") != std::string::npos);
    CHECK(r.out.find("GMP") != std::string::npos);
}

TEST_CASE("admissible report") {
    const auto r = run({"admissible", "--tuple", "0 2 6"});
    REQUIRE(r.code == 0);
    const auto j = Json::parse(r.out);
    CHECK(j["schema_version"] == bgp::cli::kSchemaVersion);
    CHECK(j["command"] == "admissible");
    CHECK(j["admissible"] == true);
    CHECK(j["witness"] == Json{{"2", 1}, {"3", 1}});
    CHECK(j["config"]["tuple"] == "0 2 6");

    const auto searched = Json::parse(run({"admissible", "--search-k", "3", "--max-diameter", "6"}).out);
    CHECK(searched["found"] == true);
    CHECK(searched["diameter"] == 6);

    const auto xw = Json::parse(run({"admissible", "--tuple", "0 2 6", "--W", "30"}).out);
    CHECK(xw["X_W"] == Json::array({11, 17}));
}

TEST_CASE("search emits one JSON line per hit") {
    const auto r = run({"search", "--polys", "y^2,2*y^2", "--xmax", "100", "--ymax", "10"});
    REQUIRE(r.code == 0);
    std::istringstream lines(r.out);
    std::string line;
    std::getline(lines, line);
    const auto header = Json::parse(line);
    CHECK(header["command"] == "search");
    std::size_t count = 0;
    bool found = false;
    while (std::getline(lines, line)) {
        const auto hit = Json::parse(line);
        found = found || (hit["x"] == 3 && hit["y"] == 2);
        ++count;
    }
    CHECK(count == header["hit_count"]);
    CHECK(found);

    const auto gap = run({"search", "--polys", "y^2", "--bmax", "246", "--xmax", "100", "--ymax", "10", "--first"});
    std::istringstream gl(gap.out);
    std::getline(gl, line);
    std::getline(gl, line);
    const auto first = Json::parse(line);
    CHECK(first.contains("b"));
    CHECK(first.contains("shifted_values"));
}

TEST_CASE("csv output") {
    const auto r = run({"--csv", "sieve", "--limit", "100"});
    CHECK(r.out == "limit,prime_count,largest_prime\n100,25,97\n");

    const auto forms = temp_file("bgp_cli_forms.txt", "W 30\nb 11\nr 0\nh 0 2 6\n");
    const auto lf = run({"local-factors", "--forms", forms.string(), "--pmax", "13", "--csv"});
    REQUIRE(lf.code == 0);
    CHECK(lf.out ==
          "p,class,cp_num,cp_den\n"
          "2,degenerate-small-prime,0,1\n"
          "3,degenerate-small-prime,0,1\n"
          "5,degenerate-small-prime,0,1\n"
          "7,good,0,1\n"
          "11,good,0,1\n"
          "13,good,0,1\n");
    std::filesystem::remove(forms);
}

TEST_CASE("local-factors json") {
    const auto forms = temp_file("bgp_cli_forms2.txt", "W 2\nb 1\nr 0 15\nh 0\n");
    const auto r = run({"local-factors", "--forms", forms.string(), "--pmax", "50"});
    REQUIRE(r.code == 0);
    const auto j = Json::parse(r.out);
    CHECK(j["bad_primes"] == Json::array({3, 5}));
    CHECK(j["rows"][1]["class"] == "bad");
    CHECK(j["local_estimates"]["empty_subset_exact"] == true);
    std::filesystem::remove(forms);
}

TEST_CASE("config round trip") {
    const auto first = run(kNuArgs);
    REQUIRE(first.code == 0);
    const auto report = Json::parse(first.out);
    const auto config = temp_file("bgp_cli_config.json", report["config"].dump());
    const auto second = run({"--config", config.string(), "nu-stats"});
    REQUIRE(second.code == 0);
    CHECK(second.out == first.out);

    // Flags win over the file.
    const auto eta = run({"--config", config.string(), "nu-stats", "--eta0", "0.1"});
    REQUIRE(eta.code == 0);
    CHECK(Json::parse(eta.out)["params"]["eta0"] == 0.1);
    std::filesystem::remove(config);

    const auto junk = temp_file("bgp_cli_junk.json", "{not json");
    CHECK(run({"--config", junk.string(), "sieve", "--limit", "10"}).code == bgp::cli::kPrecondition);
    std::filesystem::remove(junk);
}

TEST_CASE("reports do not depend on the thread count") {
    auto one = kNuArgs, many = kNuArgs;
    one.insert(one.end(), {"--threads", "1"});
    many.insert(many.end(), {"--threads", "4"});
    auto a = Json::parse(run(one).out), b = Json::parse(run(many).out);
    a.erase("config");
    b.erase("config");
    CHECK(a == b);
    CHECK(a["majorization"]["violations"] == 0);
}

TEST_CASE("correlation and poly-forms") {
    const std::vector<std::string> ctx{"--tuple", "0", "--m", "0", "--nprime", "200000", "--eps0", "0.9",
                                       "--w", "2", "--eta0", "0.11"};
    std::vector<std::string> corr{"correlation", "--shifts", "0 1", "--euler", "--checkpoints", "100 1000"};
    corr.insert(corr.end(), ctx.begin(), ctx.end());
    const auto c = run(corr);
    REQUIRE(c.code == 0);
    auto j = Json::parse(c.out);
    CHECK(j["context"]["j_max"] == 2);
    CHECK(j["euler"]["checkpoints"].size() == 2);
    CHECK(j["average"].get<double>() > 0.0);

    // Re-running from the echoed config reproduces everything but the timing.
    const auto config = temp_file("bgp_cli_corr.json", j["config"].dump());
    auto again = Json::parse(run({"--config", config.string(), "correlation"}).out);
    j.erase("runtime_seconds");
    again.erase("runtime_seconds");
    CHECK(again == j);
    std::filesystem::remove(config);

    std::vector<std::string> poly{"poly-forms", "--polys", "0,l", "--H", "5", "--tidy-limit", "100"};
    poly.insert(poly.end(), ctx.begin(), ctx.end());
    const auto p = run(poly);
    REQUIRE(p.code == 0);
    const auto pj = Json::parse(p.out);
    CHECK(pj["grid_points"] == 5);
    CHECK(pj["tidy_sums"].size() == 1);

    std::vector<std::string> degenerate{"poly-forms", "--polys", "l,l+1"};
    degenerate.insert(degenerate.end(), ctx.begin(), ctx.end());
    CHECK(run(degenerate).code == bgp::cli::kPrecondition);
}

TEST_CASE("pipeline, maynard-set and output file") {
    const auto out = std::filesystem::temp_directory_path() / "bgp_cli_pipeline.json";
    const auto r = run({"pipeline", "--tuple", "0 2", "--nprime", "100000", "--eps0", "0.3", "--w", "2", "--eta0",
                        "0.11", "--polys", "y,2*y", "--M", "20", "--output", out.string()});
    REQUIRE(r.code == 0);
    CHECK(r.out.empty());
    std::ifstream in(out);
    const auto j = Json::parse(in);
    CHECK(j["consistent"] == true);
    CHECK(j["hit_count"].get<std::size_t>() > 0);
    CHECK(j["rescaled"] == Json::array({"y", "2*y"}));
    std::filesystem::remove(out);

    const auto A = std::filesystem::temp_directory_path() / "bgp_cli_A.txt";
    const auto m = run({"maynard-set", "--tuple", "0 2", "--nprime", "100000", "--eps0", "0.3", "--w", "2", "--eta0",
                        "0.11", "--export", A.string()});
    REQUIRE(m.code == 0);
    CHECK(Json::parse(m.out)["A_size"] == 1224);
    CHECK(std::filesystem::exists(A));
    std::filesystem::remove(A);
}

TEST_CASE("selftest") {
    const auto r = run({"selftest"});
    CHECK(r.code == 0);
    CHECK(Json::parse(r.out)["passed"] == true);
}
