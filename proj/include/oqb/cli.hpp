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

#include <optional>
#include <string>
#include <vector>

#include "oqb/daemonic.hpp"

namespace oqb::cli {

inline constexpr const char* kVersion = "0.1.0";

/// Exit codes shared by all subcommands.
enum ExitCode : int {
    kOk = 0,
    kConfigError = 2,
    kNumericalError = 3,
    kValidationFailure = 4,
};

/// Fully resolved run configuration: built-in per-command defaults, then the
/// JSON config file, then command-line flags, each layer overriding the
/// previous one.  dt and horizon are in units of 1/kappa.
struct RunConfig {
    double omega0 = 1.0;
    double alpha = 1.0;
    double kappa = 1.0;

    /// "ground", "maximally_mixed", or explicit Bloch coordinates.
    std::string initial_state = "ground";
    std::optional<std::array<double, 3>> initial_bloch;

    double dt = 1e-3;
    double horizon = 8.0;
    int n = 5000;
    std::uint64_t seed = 20260815ull;
    Scheme scheme = Scheme::MeasurementOperator;
    int workers = 1;
    kern::Backend backend = kern::Backend::Auto;
    int stride = 0;

    std::vector<UnravellingSpec> unravellings;

    /// figure3 sweep extras.
    std::vector<double> alphas;
    std::vector<double> etas;

    std::string out_dir = "out";

    DensityMatrix make_initial_state() const;
    TimeGrid make_grid() const;
};

/// Optional knobs for the validate subcommand.  `tamper_scale` deliberately
/// corrupts one analytic formula so tests can confirm the validation
/// actually detects disagreement.
struct ValidateOptions {
    double tamper_scale = 1.0;
};

struct ValidationResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

std::vector<ValidationResult> run_validation(const ValidateOptions& options);

/// Entry point used by the oqbsim binary and by the test-suite; returns the
/// process exit code and writes human-readable progress to stderr.
int dispatch(int argc, const char* const* argv);

}  // namespace oqb::cli
