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

#include <cmath>
#include <fstream>

#include "cli_internal.hpp"

namespace oqb::cli {

namespace {

constexpr double kHalfPi = 1.5707963267948966;

std::vector<UnravellingSpec> standard_unravellings(double eta) {
    return {UnravellingSpec::photo_detection(eta), UnravellingSpec::homodyne(0.0, eta),
            UnravellingSpec::homodyne(kHalfPi, eta), UnravellingSpec::heterodyne(eta)};
}

void check_keys(const nlohmann::json& obj, const std::vector<std::string>& allowed,
                const std::string& where) {
    for (const auto& item : obj.items()) {
        bool ok = false;
        for (const std::string& k : allowed)
            if (item.key() == k) ok = true;
        if (!ok) throw ConfigError("config: unknown key '" + item.key() + "' in " + where);
    }
}

double require_number(const nlohmann::json& obj, const std::string& key, double fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_number()) throw ConfigError("config: " + key + " must be a number");
    return obj[key].get<double>();
}

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

}  // namespace

DensityMatrix RunConfig::make_initial_state() const {
    if (initial_bloch)
        return DensityMatrix::from_bloch((*initial_bloch)[0], (*initial_bloch)[1],
                                         (*initial_bloch)[2]);
    if (initial_state == "ground") return DensityMatrix::ground(2);
    if (initial_state == "excited") return DensityMatrix::pure({0.0, 1.0});
    if (initial_state == "maximally_mixed" || initial_state == "maximally-mixed")
        return DensityMatrix::maximally_mixed(2);
    throw ConfigError("config: unknown initial_state '" + initial_state + "'");
}

TimeGrid RunConfig::make_grid() const {
    const int steps = static_cast<int>(std::lround(horizon / dt));
    return TimeGrid(0.0, dt / kappa, steps);
}

Scheme parse_scheme(const std::string& s) {
    if (s == "em") return Scheme::EulerMaruyama;
    if (s == "mo") return Scheme::MeasurementOperator;
    throw ConfigError("config: scheme must be 'em' or 'mo', got '" + s + "'");
}

kern::Backend parse_backend(const std::string& s) {
    if (s == "auto") return kern::Backend::Auto;
    if (s == "scalar") return kern::Backend::Scalar;
    if (s == "avx2") return kern::Backend::Avx2;
    throw ConfigError("config: kernel must be 'auto', 'scalar' or 'avx2', got '" + s + "'");
}

UnravellingSpec parse_unravelling_kind(const std::string& kind, double phi, double eta) {
    if (kind == "pd") return UnravellingSpec::photo_detection(eta);
    if (kind == "hod") return UnravellingSpec::homodyne(phi, eta);
    if (kind == "hed") return UnravellingSpec::heterodyne(eta);
    throw ConfigError("config: unravelling must be 'pd', 'hod' or 'hed', got '" + kind + "'");
}

std::uint64_t ensemble_seed(std::uint64_t master, const std::string& label) {
    return CounterRng::mix(master + fnv1a(label));
}

RunConfig default_config(const std::string& command) {
    RunConfig cfg;
    if (command == "figure2") {
        cfg.horizon = 8.0;
        cfg.n = 5000;
        cfg.initial_state = "ground";
        cfg.unravellings = standard_unravellings(0.4);
    } else if (command == "figure3") {
        cfg.horizon = 15.0;
        cfg.n = 1000;
        cfg.initial_state = "ground";
        cfg.unravellings = standard_unravellings(1.0);
        cfg.etas = {0.1, 0.7};
        for (int i = 1; i <= 30; ++i) cfg.alphas.push_back(0.1 * i);
        cfg.alphas.push_back(BatteryModel::peak_drive_ratio());
    } else if (command == "figure4") {
        cfg.horizon = 12.0;
        cfg.n = 5000;
        cfg.alpha = 0.4;
        cfg.initial_state = "maximally_mixed";
        cfg.unravellings = standard_unravellings(1.0);
    } else {
        cfg.unravellings = standard_unravellings(1.0);
    }
    return cfg;
}

void apply_json_config(RunConfig& cfg, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("config: " + path + ": " + e.what());
    }
    if (!j.is_object()) throw ConfigError("config: top level must be an object");
    check_keys(j, {"model", "initial_state", "grid", "ensemble", "unravellings", "sweep",
                   "output"},
               "top level");

    if (j.contains("model")) {
        const auto& m = j["model"];
        check_keys(m, {"omega0", "alpha", "kappa"}, "model");
        cfg.omega0 = require_number(m, "omega0", cfg.omega0);
        cfg.alpha = require_number(m, "alpha", cfg.alpha);
        cfg.kappa = require_number(m, "kappa", cfg.kappa);
    }

    if (j.contains("initial_state")) {
        const auto& s = j["initial_state"];
        if (s.is_string()) {
            cfg.initial_state = s.get<std::string>();
            cfg.initial_bloch.reset();
        } else if (s.is_object() && s.contains("bloch") && s["bloch"].is_array() &&
                   s["bloch"].size() == 3) {
            cfg.initial_state = "bloch";
            cfg.initial_bloch = {s["bloch"][0].get<double>(), s["bloch"][1].get<double>(),
                                 s["bloch"][2].get<double>()};
        } else {
            throw ConfigError("config: initial_state must be a name or {\"bloch\": [x,y,z]}");
        }
    }

    if (j.contains("grid")) {
        const auto& g = j["grid"];
        check_keys(g, {"dt", "horizon"}, "grid");
        cfg.dt = require_number(g, "dt", cfg.dt);
        cfg.horizon = require_number(g, "horizon", cfg.horizon);
    }

    if (j.contains("ensemble")) {
        const auto& e = j["ensemble"];
        check_keys(e, {"n", "seed", "scheme", "workers", "kernel", "stride"}, "ensemble");
        if (e.contains("n")) cfg.n = e["n"].get<int>();
        if (e.contains("seed")) cfg.seed = e["seed"].get<std::uint64_t>();
        if (e.contains("scheme")) cfg.scheme = parse_scheme(e["scheme"].get<std::string>());
        if (e.contains("workers")) cfg.workers = e["workers"].get<int>();
        if (e.contains("kernel")) cfg.backend = parse_backend(e["kernel"].get<std::string>());
        if (e.contains("stride")) cfg.stride = e["stride"].get<int>();
    }

    if (j.contains("unravellings")) {
        if (!j["unravellings"].is_array() || j["unravellings"].empty())
            throw ConfigError("config: unravellings must be a non-empty array");
        cfg.unravellings.clear();
        for (const auto& u : j["unravellings"]) {
            check_keys(u, {"kind", "phi", "eta"}, "unravellings[]");
            if (!u.contains("kind")) throw ConfigError("config: unravelling needs a kind");
            cfg.unravellings.push_back(
                parse_unravelling_kind(u["kind"].get<std::string>(),
                                       require_number(u, "phi", 0.0),
                                       require_number(u, "eta", 1.0)));
        }
    }

    if (j.contains("sweep")) {
        const auto& s = j["sweep"];
        check_keys(s, {"alphas", "etas"}, "sweep");
        if (s.contains("alphas")) {
            cfg.alphas.clear();
            for (const auto& a : s["alphas"]) cfg.alphas.push_back(a.get<double>());
        }
        if (s.contains("etas")) {
            cfg.etas.clear();
            for (const auto& e : s["etas"]) cfg.etas.push_back(e.get<double>());
        }
    }

    if (j.contains("output")) {
        const auto& o = j["output"];
        check_keys(o, {"directory"}, "output");
        if (o.contains("directory")) cfg.out_dir = o["directory"].get<std::string>();
    }
}

void apply_flags(RunConfig& cfg, const FlagOverrides& flags, const std::string& command) {
    if (flags.out_dir) cfg.out_dir = *flags.out_dir;
    if (flags.n) cfg.n = *flags.n;
    if (flags.seed) cfg.seed = *flags.seed;
    if (flags.alpha) {
        cfg.alpha = *flags.alpha;
        if (command == "figure3") cfg.alphas = {*flags.alpha};
    }
    if (flags.dt) cfg.dt = *flags.dt;
    if (flags.horizon) cfg.horizon = *flags.horizon;
    if (flags.scheme) cfg.scheme = parse_scheme(*flags.scheme);
    if (flags.workers) cfg.workers = *flags.workers;
    if (flags.kernel) cfg.backend = parse_backend(*flags.kernel);
    if (flags.eta && command == "figure3") cfg.etas = {*flags.eta};

    if (flags.unravelling) {
        const double eta = flags.eta.value_or(
            cfg.unravellings.empty() ? 1.0 : cfg.unravellings.front().efficiency);
        cfg.unravellings = {
            parse_unravelling_kind(*flags.unravelling, flags.phi.value_or(0.0), eta)};
    } else if (flags.eta || flags.phi) {
        for (UnravellingSpec& u : cfg.unravellings) {
            const double eta = flags.eta.value_or(u.efficiency);
            const double phi = flags.phi.value_or(u.phi);
            u = UnravellingSpec(u.kind, u.kind == UnravellingKind::Homodyne ? phi : 0.0, eta);
        }
    }
}

void validate_config(const RunConfig& cfg, const std::string& command) {
    if (!(cfg.omega0 > 0.0)) throw ConfigError("config: omega0 must be positive");
    if (cfg.alpha < 0.0) throw ConfigError("config: alpha must be non-negative");
    if (!(cfg.kappa > 0.0)) throw ConfigError("config: kappa must be positive");
    if (!(cfg.dt > 0.0)) throw ConfigError("config: dt must be positive");
    if (!(cfg.horizon > 0.0)) throw ConfigError("config: horizon must be positive");
    if (std::lround(cfg.horizon / cfg.dt) < 1)
        throw ConfigError("config: horizon shorter than one step");
    if (cfg.n < 1) throw ConfigError("config: n must be >= 1");
    if (cfg.workers < 1) throw ConfigError("config: workers must be >= 1");
    if (cfg.stride < 0) throw ConfigError("config: stride must be >= 0");
    if (cfg.unravellings.empty()) throw ConfigError("config: no unravellings selected");
    if (command == "figure3") {
        if (cfg.alphas.empty()) throw ConfigError("config: figure3 needs a non-empty alpha grid");
        if (cfg.etas.empty()) throw ConfigError("config: figure3 needs a non-empty eta list");
        for (double a : cfg.alphas)
            if (a < 0.0) throw ConfigError("config: sweep alphas must be non-negative");
        for (double e : cfg.etas)
            if (!(e >= 0.0 && e <= 1.0))
                throw ConfigError("config: sweep etas must lie in [0, 1]");
    }
    if (cfg.initial_bloch) {
        const auto& b = *cfg.initial_bloch;
        if (b[0] * b[0] + b[1] * b[1] + b[2] * b[2] > 1.0 + 1e-12)
            throw ConfigError("config: initial Bloch vector lies outside the unit ball");
    }
    (void)cfg.make_initial_state();  // rejects unknown initial_state names early
}

nlohmann::json config_manifest(const RunConfig& cfg, const std::string& command) {
    nlohmann::json j;
    j["version"] = kVersion;
    j["command"] = command;
    j["model"] = {{"omega0", cfg.omega0}, {"alpha", cfg.alpha}, {"kappa", cfg.kappa}};
    if (cfg.initial_bloch) {
        j["initial_state"] = {{"bloch", {(*cfg.initial_bloch)[0], (*cfg.initial_bloch)[1],
                                         (*cfg.initial_bloch)[2]}}};
    } else {
        j["initial_state"] = cfg.initial_state;
    }
    const TimeGrid grid = cfg.make_grid();
    j["grid"] = {{"dt_kappa", cfg.dt},
                 {"horizon_kappa", cfg.horizon},
                 {"dt", grid.dt},
                 {"steps", grid.steps}};
    j["ensemble"] = {{"n", cfg.n},
                     {"seed", cfg.seed},
                     {"scheme", cfg.scheme == Scheme::EulerMaruyama ? "em" : "mo"},
                     {"workers", cfg.workers},
                     {"kernel", kern::backend_name(kern::resolve_backend(cfg.backend))},
                     {"stride", cfg.stride}};
    nlohmann::json us = nlohmann::json::array();
    for (const UnravellingSpec& u : cfg.unravellings) {
        const char* kind = u.kind == UnravellingKind::PhotoDetection ? "pd"
                           : u.kind == UnravellingKind::Homodyne     ? "hod"
                                                                     : "hed";
        us.push_back({{"kind", kind},
                      {"phi", u.phi},
                      {"eta", u.efficiency},
                      {"label", u.label()},
                      {"seed", ensemble_seed(cfg.seed, u.label())}});
    }
    j["unravellings"] = us;
    if (command == "figure3") {
        j["sweep"] = {{"alphas", cfg.alphas}, {"etas", cfg.etas}};
    }
    return j;
}

}  // namespace oqb::cli
