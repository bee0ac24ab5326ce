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
#include <vector>

#include "oqb/battery.hpp"
#include "oqb/kernels/qubit_kernels.hpp"
#include "oqb/trajectories.hpp"

namespace oqb {

/// Time window (absolute times) over which per-trajectory observables are
/// averaged, e.g. for steady-state extraction.
struct WindowSpec {
    double t_lo = 0.0;
    double t_hi = 0.0;
};

struct EnsembleSpec {
    int n_trajectories = 1000;
    std::uint64_t master_seed = 1;
    UnravellingSpec unravelling;
    Scheme scheme = Scheme::MeasurementOperator;
    int workers = 1;
    kern::Backend backend = kern::Backend::Auto;
    /// Keep every stride-th grid point; 0 picks a stride giving ~800 samples.
    int sample_stride = 0;
    std::optional<WindowSpec> window;
};

/// Ensemble statistics of the per-trajectory window averages: mean and
/// standard error of the full-window average, plus the half-window split
/// used as a convergence diagnostic (trend = second half - first half).
struct WindowStats {
    double t_lo = 0.0, t_hi = 0.0;
    int samples = 0;
    double mean = 0.0, std_error = 0.0;
    double first_half_mean = 0.0, second_half_mean = 0.0;
    double trend = 0.0, trend_std_error = 0.0;
};

/// Per-time-point ensemble statistics.  Trajectory sums are accumulated in
/// fixed blocks of 64 trajectories and reduced in block order, so results
/// are bitwise independent of the worker count.
struct EnsembleStats {
    std::vector<int> sample_indices;
    std::vector<double> times;

    /// Daemonic ergotropy: ensemble mean of conditional-state ergotropy.
    std::vector<double> daemonic_ergotropy;
    std::vector<double> std_error;

    /// Ensemble-mean Bloch vector with standard errors.
    std::vector<double> mean_x, mean_y, mean_z;
    std::vector<double> se_x, se_y, se_z;

    /// Ergotropy of the ensemble-mean state, with delete-one-block
    /// jackknife errors.
    std::vector<double> mean_state_ergotropy;
    std::vector<double> mean_state_ergotropy_se;

    /// Unconditional (master equation, RK4) reference on the same grid.
    std::vector<double> unconditional_energy;
    std::vector<double> unconditional_ergotropy;

    int n = 0;
    double omega0 = 1.0;
    double kappa = 1.0;
    double dt = 0.0;
    kern::Backend backend_used = kern::Backend::Scalar;
    std::optional<WindowStats> window;

    /// Ensemble-mean state at sample k, reconstructed from the mean Bloch
    /// vector.
    DensityMatrix mean_state(std::size_t k) const;
};

/// Monte Carlo ensemble of conditional battery trajectories on `grid`,
/// starting from `rho0`.  Deterministic in (master_seed, n): results do not
/// depend on `workers` or on which backend lanes ran where.
EnsembleStats run_ensemble(const BatteryModel& battery, const EnsembleSpec& spec,
                           const DensityMatrix& rho0, const TimeGrid& grid);

/// Verify the two-sided bound  unconditional ergotropy <= daemonic
/// ergotropy <= unconditional energy  at every sample, within
/// n_sigma standard errors plus an absolute discretization allowance
/// (default 3 omega0 kappa dt, which also covers the eta = 0 case where the
/// statistical error vanishes).
struct BoundsReport {
    bool pass = true;
    int checked = 0;
    int lower_violations = 0;
    int upper_violations = 0;
    /// Worst signed margins (negative = violation), in energy units.
    double worst_lower_margin = 0.0;
    double worst_upper_margin = 0.0;
};

BoundsReport check_bounds(const EnsembleStats& stats, double n_sigma = 3.0,
                          std::optional<double> abs_slack = std::nullopt);

/// One steady-state estimate from the tail window of a finite-horizon run.
struct SteadyPoint {
    double alpha = 0.0;
    UnravellingSpec unravelling;
    double value = 0.0;       ///< window-averaged daemonic ergotropy
    double std_error = 0.0;   ///< statistical + drift, combined in quadrature
    double stat_error = 0.0;
    double trend = 0.0;
    double trend_std_error = 0.0;
    bool converged = true;
    double analytic_ergotropy = 0.0;  ///< unconditional steady-state value
    double analytic_energy = 0.0;
};

struct SweepOptions {
    int n_trajectories = 5000;
    std::uint64_t master_seed = 1;
    Scheme scheme = Scheme::MeasurementOperator;
    int workers = 1;
    kern::Backend backend = kern::Backend::Auto;
    double dt = 1e-3;          ///< in units of 1/kappa
    double horizon = 15.0;     ///< in units of 1/kappa
    double window_fraction = 0.2;
    /// |trend| below max(3 trend_std_error, trend_floor * omega0) counts as
    /// converged; the floor covers deterministic (eta = 0) runs.
    double trend_floor = 2e-3;
};

/// Steady-state daemonic ergotropy for every (alpha, unravelling) pair,
/// each from an independent ensemble (per-point seeds derived from
/// master_seed).  Ground-state initialization.  Points whose tail window
/// still shows a significant trend are flagged converged = false.
std::vector<SteadyPoint> steady_state_sweep(const BatteryModel& base,
                                            const std::vector<double>& alphas,
                                            const std::vector<UnravellingSpec>& unravellings,
                                            const SweepOptions& options);

}  // namespace oqb
