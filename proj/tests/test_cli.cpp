// Copyright 2026 The oqbsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

#include "oqb/cli.hpp"

namespace fs = std::filesystem;

namespace {

int run_cli(std::initializer_list<std::string> args) {
    std::vector<std::string> storage{"oqbsim"};
    storage.insert(storage.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const std::string& s : storage) argv.push_back(s.c_str());
    return oqb::cli::dispatch(static_cast<int>(argv.size()), argv.data());
}

fs::path fresh_dir(const std::string& tag) {
    static int counter = 0;
    const fs::path dir =
        fs::temp_directory_path() / ("oqbsim_test_" + tag + "_" + std::to_string(counter++));
    fs::remove_all(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) lines.push_back(line);
    return lines;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> fields;
    std::istringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    return fields;
}

}  // namespace

TEST_CASE("bad invocations exit with the configuration error code") {
    CHECK(run_cli({"no_such_command"}) == 2);
    CHECK(run_cli({}) == 2);  // a subcommand is required
    CHECK(run_cli({"figure2", "--no-such-flag"}) == 2);
    CHECK(run_cli({"figure2", "--eta", "1.5"}) == 2);
    CHECK(run_cli({"figure2", "--eta", "-0.1"}) == 2);
    CHECK(run_cli({"figure2", "--dt", "0"}) == 2);
    CHECK(run_cli({"figure2", "--unravelling", "bogus"}) == 2);
    CHECK(run_cli({"figure2", "--scheme", "bogus"}) == 2);
    CHECK(run_cli({"figure2", "--kernel", "bogus"}) == 2);
    CHECK(run_cli({"figure2", "--config", "/no/such/file.json"}) == 2);
    CHECK(run_cli({"steady", "--alpha", "-2"}) == 2);
}

TEST_CASE("config files are strict: unknown keys and bad JSON are refused") {
    const fs::path dir = fresh_dir("cfg");
    fs::create_directories(dir);

    const fs::path bogus_key = dir / "bogus.json";
    std::ofstream(bogus_key) << "{\"bogus\": 1}\n";
    CHECK(run_cli({"figure2", "--config", bogus_key.string()}) == 2);

    const fs::path malformed = dir / "broken.json";
    std::ofstream(malformed) << "{not json";
    CHECK(run_cli({"figure2", "--config", malformed.string()}) == 2);

    const fs::path bad_state = dir / "state.json";
    std::ofstream(bad_state) << "{\"initial_state\": \"warp\"}\n";
    CHECK(run_cli({"figure2", "--config", bad_state.string()}) == 2);

    fs::remove_all(dir);
}

TEST_CASE("transient command writes one CSV per detection scheme plus a manifest") {
    const fs::path dir = fresh_dir("f2");
    CHECK(run_cli({"figure2", "--out", dir.string(), "--n", "24", "--dt", "0.02", "--horizon",
                   "0.4", "--seed", "5"}) == 0);

    for (const char* label : {"pd", "hod_phi0", "hod_phi1p5708", "hed"}) {
        const fs::path csv = dir / (std::string("figure2_") + label + ".csv");
        REQUIRE(fs::exists(csv));
        const auto lines = lines_of(slurp(csv));
        REQUIRE(lines.size() == 22);  // header + 21 samples (20 steps, stride 1)
        CHECK(lines[0] == "time,daemonic_ergotropy,std_error,unconditional_ergotropy,"
                          "unconditional_energy");
        const auto first = split_csv(lines[1]);
        REQUIRE(first.size() == 5);
        CHECK(std::stod(first[0]) == 0.0);        // t = 0
        CHECK(std::stod(first[1]) == 0.0);        // ground state holds no work
        const auto last = split_csv(lines.back());
        CHECK(std::stod(last[0]) == doctest::Approx(0.4).epsilon(1e-12));
        // Daemonic ergotropy never exceeds the unconditional mean energy.
        CHECK(std::stod(last[1]) <= std::stod(last[4]) + 0.05);
    }

    const nlohmann::json manifest = nlohmann::json::parse(slurp(dir / "figure2_manifest.json"));
    CHECK(manifest["command"] == "figure2");
    CHECK(manifest["ensemble"]["n"] == 24);
    CHECK(manifest["ensemble"]["seed"] == 5);
    const std::string kernel = manifest["ensemble"]["kernel"].get<std::string>();
    CHECK((kernel == "scalar" || kernel == "avx2"));
    REQUIRE(manifest["unravellings"].size() == 4);
    // Every unravelling runs on its own derived seed.
    std::vector<std::uint64_t> seeds;
    for (const auto& u : manifest["unravellings"])
        seeds.push_back(u["seed"].get<std::uint64_t>());
    for (std::size_t i = 0; i < seeds.size(); ++i)
        for (std::size_t j = i + 1; j < seeds.size(); ++j) CHECK(seeds[i] != seeds[j]);

    fs::remove_all(dir);
}

TEST_CASE("runs are byte-reproducible for a fixed seed and differ across seeds") {
    const fs::path a = fresh_dir("rep_a");
    const fs::path b = fresh_dir("rep_b");
    const fs::path c = fresh_dir("rep_c");
    const std::initializer_list<std::string> common{"--n",  "16",  "--dt",      "0.02",
                                                    "--horizon", "0.3"};
    std::vector<std::string> args{"figure2"};
    args.insert(args.end(), common.begin(), common.end());

    auto run_into = [&](const fs::path& dir, const std::string& seed) {
        std::vector<std::string> full = args;
        full.insert(full.end(), {"--out", dir.string(), "--seed", seed});
        std::vector<const char*> argv{"oqbsim"};
        for (const std::string& s : full) argv.push_back(s.c_str());
        return oqb::cli::dispatch(static_cast<int>(argv.size()), argv.data());
    };

    CHECK(run_into(a, "9") == 0);
    CHECK(run_into(b, "9") == 0);
    CHECK(run_into(c, "10") == 0);
    CHECK(slurp(a / "figure2_hed.csv") == slurp(b / "figure2_hed.csv"));
    CHECK(slurp(a / "figure2_pd.csv") == slurp(b / "figure2_pd.csv"));
    CHECK(slurp(a / "figure2_hed.csv") != slurp(c / "figure2_hed.csv"));

    fs::remove_all(a);
    fs::remove_all(b);
    fs::remove_all(c);
}

TEST_CASE("a single-trajectory ensemble reports undefined error bars as nan") {
    const fs::path dir = fresh_dir("n1");
    CHECK(run_cli({"figure2", "--out", dir.string(), "--n", "1", "--dt", "0.01", "--horizon",
                   "0.1"}) == 0);
    const auto lines = lines_of(slurp(dir / "figure2_hed.csv"));
    REQUIRE(lines.size() >= 3);
    const auto fields = split_csv(lines[2]);
    REQUIRE(fields.size() == 5);
    CHECK(fields[2] == "nan");
    fs::remove_all(dir);
}

TEST_CASE("flag overrides win over config-file values") {
    const fs::path dir = fresh_dir("prec");
    fs::create_directories(dir);
    const fs::path cfg = dir / "cfg.json";
    std::ofstream(cfg) << "{\"ensemble\": {\"n\": 7}, \"grid\": {\"dt\": 0.02, \"horizon\": 0.2}}\n";

    CHECK(run_cli({"figure2", "--config", cfg.string(), "--n", "9", "--out",
                   (dir / "out").string()}) == 0);
    const nlohmann::json manifest =
        nlohmann::json::parse(slurp(dir / "out" / "figure2_manifest.json"));
    CHECK(manifest["ensemble"]["n"] == 9);
    CHECK(manifest["grid"]["dt_kappa"] == doctest::Approx(0.02));
    fs::remove_all(dir);
}

TEST_CASE("steady command reproduces the closed-form benchmark values") {
    const fs::path dir = fresh_dir("steady");
    CHECK(run_cli({"steady", "--alpha", "1", "--out", dir.string()}) == 0);
    const auto lines = lines_of(slurp(dir / "steady.csv"));
    REQUIRE(lines.size() == 2);
    CHECK(lines[0] == "alpha,kappa,omega0,analytic_steady_energy,analytic_steady_ergotropy,"
                      "peak_alpha_over_kappa,peak_steady_ergotropy");
    const auto f = split_csv(lines[1]);
    REQUIRE(f.size() == 7);
    CHECK(std::stod(f[0]) == 1.0);
    CHECK(std::stod(f[3]) == doctest::Approx(4.0 / 9.0).epsilon(1e-12));
    CHECK(std::stod(f[4]) == doctest::Approx((std::sqrt(17.0) - 1.0) / 18.0).epsilon(1e-12));
    CHECK(std::stod(f[5]) == doctest::Approx(std::sqrt((1.0 + std::sqrt(2.0)) / 8.0)).epsilon(1e-9));
    CHECK(std::stod(f[6]) == doctest::Approx((std::sqrt(2.0) - 1.0) / 2.0).epsilon(1e-9));
    fs::remove_all(dir);
}

TEST_CASE("sweep command emits one row per (alpha, unravelling, eta) combination") {
    const fs::path dir = fresh_dir("f3");
    CHECK(run_cli({"figure3", "--out", dir.string(), "--alpha", "1.0", "--eta", "0.7", "--n",
                   "40", "--dt", "0.005", "--horizon", "3"}) == 0);
    const auto lines = lines_of(slurp(dir / "figure3.csv"));
    REQUIRE(lines.size() == 5);  // header + 4 detection schemes
    CHECK(lines[0] ==
          "alpha,unravelling,eta,daemonic_ergotropy,error,analytic_ergotropy,analytic_energy");
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto f = split_csv(lines[i]);
        REQUIRE(f.size() == 7);
        CHECK(std::stod(f[0]) == 1.0);
        CHECK(std::stod(f[2]) == doctest::Approx(0.7).epsilon(1e-12));
        CHECK(std::stod(f[5]) == doctest::Approx((std::sqrt(17.0) - 1.0) / 18.0).epsilon(1e-12));
    }
    fs::remove_all(dir);
}

TEST_CASE("charging-from-mixed command includes the pure-dephasing-free reference columns") {
    const fs::path dir = fresh_dir("f4");
    CHECK(run_cli({"figure4", "--out", dir.string(), "--n", "16", "--dt", "0.02", "--horizon",
                   "0.5"}) == 0);
    const auto lines = lines_of(slurp(dir / "figure4_hed.csv"));
    REQUIRE(lines.size() == 27);
    CHECK(lines[0] ==
          "time,daemonic_ergotropy,std_error,unconditional_ergotropy_mixed,"
          "unconditional_energy_mixed,unconditional_ergotropy_ground,"
          "unconditional_energy_ground");
    const auto manifest = nlohmann::json::parse(slurp(dir / "figure4_manifest.json"));
    CHECK(manifest["command"] == "figure4");
    CHECK(manifest["initial_state"] == "maximally_mixed");
    fs::remove_all(dir);
}

TEST_CASE("self-test command passes clean and fails under deliberate tampering") {
    CHECK(run_cli({"validate"}) == 0);
    CHECK(run_cli({"validate", "--self-test-tamper", "1.5"}) == 4);
}
