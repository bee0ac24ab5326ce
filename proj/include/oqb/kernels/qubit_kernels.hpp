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

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "oqb/rng.hpp"
#include "oqb/trajectories.hpp"

namespace oqb::kern {

/// Trajectory-stepping backends.  Scalar is the reference; Avx2 advances
/// four trajectories per register and is bit-identical to Scalar (same
/// operation order, no fused multiply-adds anywhere), so results never
/// depend on the machine the run landed on.
enum class Backend { Auto, Scalar, Avx2 };

/// True when the AVX2 backend is both compiled in and supported by the CPU.
bool avx2_available();

/// Auto resolves to Avx2 when available, Scalar otherwise.  Explicit Avx2 on
/// an unsupported machine throws ConfigError.
Backend resolve_backend(Backend requested);

const char* backend_name(Backend resolved);

/// Per-batch stepping parameters for the qubit battery in Bloch form.
struct StepParams {
    UnravellingKind kind = UnravellingKind::Homodyne;
    Scheme scheme = Scheme::MeasurementOperator;
    double alpha = 1.0;
    double kappa = 1.0;
    double eta = 1.0;
    double phi = 0.0;
    double dt = 1e-3;
};

/// Structure-of-arrays Bloch state for a batch of trajectories.
struct BatchState {
    std::vector<double> x, y, z;

    BatchState(std::size_t n, const std::array<double, 3>& r0)
        : x(n, r0[0]), y(n, r0[1]), z(n, r0[2]) {}

    std::size_t size() const { return x.size(); }
};

/// First lane that failed inside a segment.
struct StepFailure {
    std::size_t lane = 0;
    enum Code { TooLarge = 1, Positivity = 2 } code = TooLarge;
};

/// Advance every lane by `nsteps` steps.  `rngs` holds one stream per lane
/// and is consumed in lane order with the documented draw discipline, so a
/// lane's path depends only on its own stream.  `jump_flags` (optional, one
/// byte per lane) is set to 1 for lanes that click at least once during the
/// segment; photo-detection only.
std::optional<StepFailure> run_segment(Backend backend, const StepParams& params, int nsteps,
                                       BatchState& state, CounterRng* rngs,
                                       std::uint8_t* jump_flags = nullptr);

}  // namespace oqb::kern
