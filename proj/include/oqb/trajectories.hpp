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

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "oqb/ergotropy.hpp"
#include "oqb/lindblad.hpp"
#include "oqb/rng.hpp"

namespace oqb {

enum class UnravellingKind { PhotoDetection, Homodyne, Heterodyne };

/// Continuous-monitoring scheme applied to the emission channel: detector
/// kind, local-oscillator phase (homodyne only) and efficiency eta in [0,1].
struct UnravellingSpec {
    UnravellingKind kind = UnravellingKind::PhotoDetection;
    double phi = 0.0;
    double efficiency = 1.0;

    UnravellingSpec() = default;
    UnravellingSpec(UnravellingKind k, double lo_phase, double eta);

    static UnravellingSpec photo_detection(double eta = 1.0);
    static UnravellingSpec homodyne(double lo_phase, double eta = 1.0);
    static UnravellingSpec heterodyne(double eta = 1.0);

    /// Short stable identifier used in filenames and CSV columns, e.g.
    /// "pd", "hod_phi0", "hod_phi1p5708", "hed".
    std::string label() const;
};

/// Integration scheme for the conditional dynamics.
enum class Scheme {
    EulerMaruyama,        ///< explicit first-order scheme on the raw SME
    MeasurementOperator,  ///< Kraus-style update, positive by construction
};

enum class StoragePolicy { ScalarSummaries, FullStates };

/// Measurement record of a single trajectory: detector click times for
/// photo-detection, integrated quadrature increments otherwise (dy2 is used
/// by the second heterodyne quadrature only).
struct DetectionRecord {
    std::vector<double> jump_times;
    std::vector<double> dy1;
    std::vector<double> dy2;
};

struct TrajectoryRecord {
    TimeGrid grid;
    std::uint64_t master_seed = 0;
    std::uint64_t stream = 0;
    StoragePolicy storage = StoragePolicy::ScalarSummaries;
    /// Grid indices of the stored samples below.
    std::vector<int> sample_indices;
    /// Per-sample scalars (always filled).
    std::vector<double> energy;
    std::vector<double> ergotropy;
    std::vector<double> purity;
    /// Per-sample states (FullStates only).
    std::vector<DensityMatrix> states;
    DetectionRecord detection;
};

struct TrajectoryOptions {
    Scheme scheme = Scheme::MeasurementOperator;
    StoragePolicy storage = StoragePolicy::ScalarSummaries;
    /// Keep every stride-th grid point (plus the final one).
    int sample_stride = 1;
    /// Second component of the stream key; ensemble code passes the
    /// trajectory index here so results are placement-independent.
    std::uint64_t stream = 0;
};

/// One conditional step under photo-detection.  Returns the post-step state
/// and whether the detector clicked.  Click probability eta kappa <n> dt
/// must stay below 0.1, else StepTooLarge.  A click projects onto
/// c rho c^dag / Tr[...]; NullJumpState guards the (unreachable) zero-trace
/// branch.
std::pair<DensityMatrix, bool> step_photodetection(const LindbladModel& model,
                                                   const UnravellingSpec& unr,
                                                   const DensityMatrix& rho, double dt,
                                                   CounterRng& rng,
                                                   Scheme scheme = Scheme::MeasurementOperator);

/// One diffusive homodyne step; also returns the record increment
/// dy = sqrt(eta) <c e^{i phi} + c^dag e^{-i phi}> dt + dW.
std::pair<DensityMatrix, double> step_homodyne(const LindbladModel& model,
                                               const UnravellingSpec& unr,
                                               const DensityMatrix& rho, double dt,
                                               CounterRng& rng,
                                               Scheme scheme = Scheme::MeasurementOperator);

/// One heterodyne step; returns the two quadrature record increments.
std::pair<DensityMatrix, std::array<double, 2>> step_heterodyne(
    const LindbladModel& model, const UnravellingSpec& unr, const DensityMatrix& rho, double dt,
    CounterRng& rng, Scheme scheme = Scheme::MeasurementOperator);

/// Integrate one conditional trajectory on the given grid.  Deterministic in
/// (master_seed, options.stream): the same pair reproduces the record
/// exactly.  `energy_ref` feeds the stored energy/ergotropy summaries.
TrajectoryRecord run_trajectory(const LindbladModel& model, const UnravellingSpec& unr,
                                const DensityMatrix& rho0, const TimeGrid& grid,
                                const EnergySpec& energy_ref, std::uint64_t master_seed,
                                const TrajectoryOptions& options = TrajectoryOptions{});

}  // namespace oqb
