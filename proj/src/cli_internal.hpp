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

#pragma once

#include <json.hpp>

#include "oqb/cli.hpp"

namespace oqb::cli {

/// Flag values that were explicitly given on the command line; absent
/// entries leave the config-file/default value in place.
struct FlagOverrides {
    std::optional<std::string> config_path;
    std::optional<std::string> out_dir;
    std::optional<int> n;
    std::optional<std::uint64_t> seed;
    std::optional<double> eta;
    std::optional<double> alpha;
    std::optional<double> dt;
    std::optional<double> horizon;
    std::optional<std::string> unravelling;
    std::optional<double> phi;
    std::optional<std::string> scheme;
    std::optional<int> workers;
    std::optional<std::string> kernel;
};

RunConfig default_config(const std::string& command);
void apply_json_config(RunConfig& cfg, const std::string& path);
void apply_flags(RunConfig& cfg, const FlagOverrides& flags, const std::string& command);
void validate_config(const RunConfig& cfg, const std::string& command);

Scheme parse_scheme(const std::string& s);
kern::Backend parse_backend(const std::string& s);
UnravellingSpec parse_unravelling_kind(const std::string& kind, double phi, double eta);

/// Stable per-ensemble seed derived from the master seed and the
/// unravelling label, independent of which subset of unravellings runs.
std::uint64_t ensemble_seed(std::uint64_t master, const std::string& label);

nlohmann::json config_manifest(const RunConfig& cfg, const std::string& command);

int run_figure2(const RunConfig& cfg);
int run_figure3(const RunConfig& cfg);
int run_figure4(const RunConfig& cfg);
int run_steady(const RunConfig& cfg);
int run_validate(const RunConfig& cfg, const ValidateOptions& options);

}  // namespace oqb::cli
