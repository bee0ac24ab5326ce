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

#include <cmath>

#include "oqb/daemonic.hpp"

using namespace oqb;

namespace {

const BatteryModel kBattery(1.0, 1.0, 1.0);

EnsembleSpec base_spec(int n, std::uint64_t seed) {
    EnsembleSpec spec;
    spec.n_trajectories = n;
    spec.master_seed = seed;
    spec.unravelling = UnravellingSpec::heterodyne(0.4);
    spec.scheme = Scheme::MeasurementOperator;
    spec.workers = 1;
    spec.backend = kern::Backend::Auto;
    return spec;
}

bool all_equal(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const bool both_nan = std::isnan(a[i]) && std::isnan(b[i]);
        if (!both_nan && a[i] != b[i]) return false;
    }
    return true;
}

bool stats_equal(const EnsembleStats& a, const EnsembleStats& b) {
    return a.sample_indices == b.sample_indices && all_equal(a.times, b.times) &&
           all_equal(a.daemonic_ergotropy, b.daemonic_ergotropy) &&
           all_equal(a.std_error, b.std_error) && all_equal(a.mean_x, b.mean_x) &&
           all_equal(a.mean_y, b.mean_y) && all_equal(a.mean_z, b.mean_z) &&
           all_equal(a.se_x, b.se_x) && all_equal(a.se_y, b.se_y) &&
           all_equal(a.se_z, b.se_z) &&
           all_equal(a.mean_state_ergotropy, b.mean_state_ergotropy) &&
           all_equal(a.mean_state_ergotropy_se, b.mean_state_ergotropy_se);
}

}  // namespace

TEST_CASE("ensemble statistics are bitwise independent of worker count and backend") {
    const TimeGrid grid(0.0, 2e-3, 400);
    const DensityMatrix rho0 = DensityMatrix::ground(2);

    EnsembleSpec spec = base_spec(130, 99);  // two full blocks plus a partial one
    spec.window = WindowSpec{0.4, 0.8};
    spec.backend = kern::Backend::Scalar;
    const EnsembleStats ref = run_ensemble(kBattery, spec, rho0, grid);

    for (int workers : {3, 8}) {
        EnsembleSpec alt = spec;
        alt.workers = workers;
        const EnsembleStats got = run_ensemble(kBattery, alt, rho0, grid);
        CHECK(stats_equal(ref, got));
        REQUIRE(got.window.has_value());
        CHECK(got.window->mean == ref.window->mean);
        CHECK(got.window->trend == ref.window->trend);
    }

    if (kern::avx2_available()) {
        EnsembleSpec vec = spec;
        vec.backend = kern::Backend::Avx2;
        vec.workers = 4;
        const EnsembleStats got = run_ensemble(kBattery, vec, rho0, grid);
        CHECK(stats_equal(ref, got));
    }

    // Replay is exact; a different master seed is a different ensemble.
    const EnsembleStats again = run_ensemble(kBattery, spec, rho0, grid);
    CHECK(stats_equal(ref, again));
    EnsembleSpec other = spec;
    other.master_seed = 100;
    const EnsembleStats different = run_ensemble(kBattery, other, rho0, grid);
    CHECK(!all_equal(ref.daemonic_ergotropy, different.daemonic_ergotropy));
}

TEST_CASE("sample bookkeeping, mean state, and the convexity inequality") {
    const TimeGrid grid(0.0, 1e-3, 2000);
    EnsembleSpec spec = base_spec(128, 7);
    const EnsembleStats stats = run_ensemble(kBattery, spec, DensityMatrix::ground(2), grid);

    CHECK(stats.n == 128);
    // Auto stride on a 2000-step grid keeps every second point.
    REQUIRE(stats.sample_indices.size() == 1001);
    CHECK(stats.sample_indices.front() == 0);
    CHECK(stats.sample_indices.back() == 2000);
    CHECK(stats.times.front() == 0.0);
    CHECK(stats.times.back() == doctest::Approx(2.0).epsilon(1e-12));

    const EnergySpec h = kBattery.energy_spec();
    for (std::size_t k : {std::size_t{0}, std::size_t{500}, std::size_t{1000}}) {
        const DensityMatrix mean = stats.mean_state(k);
        const auto r = mean.bloch();
        CHECK(r[0] == doctest::Approx(stats.mean_x[k]).epsilon(1e-12));
        CHECK(r[2] == doctest::Approx(stats.mean_z[k]).epsilon(1e-12));
        // Stored mean-state ergotropy agrees with the spectral definition.
        CHECK(stats.mean_state_ergotropy[k] ==
              doctest::Approx(ergotropy_spectral(mean, h).value).epsilon(1e-10));
        // Average of conditional ergotropies dominates the ergotropy of the
        // averaged state, realization by realization.
        CHECK(stats.daemonic_ergotropy[k] >= stats.mean_state_ergotropy[k] - 1e-9);
    }
}

TEST_CASE("bound checking accepts healthy ensembles and flags corrupted ones") {
    const TimeGrid grid(0.0, 1e-3, 3000);
    EnsembleSpec spec = base_spec(256, 11);
    spec.unravelling = UnravellingSpec::homodyne(0.0, 0.4);
    EnsembleStats stats = run_ensemble(kBattery, spec, DensityMatrix::ground(2), grid);

    const BoundsReport healthy = check_bounds(stats);
    CHECK(healthy.pass);
    CHECK(healthy.checked == static_cast<int>(stats.times.size()));
    CHECK(healthy.lower_violations == 0);
    CHECK(healthy.upper_violations == 0);

    EnsembleStats upper = stats;
    upper.daemonic_ergotropy[800] = upper.unconditional_energy[800] + 0.05;
    const BoundsReport broken_upper = check_bounds(upper);
    CHECK(!broken_upper.pass);
    CHECK(broken_upper.upper_violations == 1);
    CHECK(broken_upper.worst_upper_margin < 0.0);

    EnsembleStats lower = stats;
    lower.daemonic_ergotropy[800] = lower.unconditional_ergotropy[800] - 0.05;
    const BoundsReport broken_lower = check_bounds(lower);
    CHECK(!broken_lower.pass);
    CHECK(broken_lower.lower_violations == 1);
}

TEST_CASE("error bars degrade gracefully with ensemble size") {
    const TimeGrid grid(0.0, 2e-3, 100);

    const EnsembleStats one = run_ensemble(kBattery, base_spec(1, 3), DensityMatrix::ground(2),
                                           grid);
    CHECK(std::isnan(one.std_error.back()));

    // A single block leaves the jackknife undefined but the plain standard
    // error finite.
    const EnsembleStats block = run_ensemble(kBattery, base_spec(64, 3),
                                             DensityMatrix::ground(2), grid);
    CHECK(std::isfinite(block.std_error.back()));
    CHECK(std::isnan(block.mean_state_ergotropy_se.back()));

    const EnsembleStats multi = run_ensemble(kBattery, base_spec(130, 3),
                                             DensityMatrix::ground(2), grid);
    CHECK(std::isfinite(multi.std_error.back()));
    CHECK(std::isfinite(multi.mean_state_ergotropy_se.back()));
}

TEST_CASE("unmonitored ensembles collapse to a single deterministic path") {
    const TimeGrid grid(0.0, 1e-3, 1500);
    EnsembleSpec spec = base_spec(65, 5);
    spec.unravelling = UnravellingSpec::heterodyne(0.0);
    const EnsembleStats stats = run_ensemble(kBattery, spec, DensityMatrix::ground(2), grid);

    // Identical trajectories: the statistical error vanishes up to the
    // cancellation residue of the variance accumulation.
    for (double se : stats.std_error) CHECK(se <= 1e-8);
    // The discretization allowance alone must absorb the eta = 0 bias.
    CHECK(check_bounds(stats).pass);
}

TEST_CASE("ensemble specs are validated up front") {
    const TimeGrid grid(0.0, 1e-3, 10);
    EnsembleSpec bad_n = base_spec(0, 1);
    CHECK_THROWS_AS(run_ensemble(kBattery, bad_n, DensityMatrix::ground(2), grid), ConfigError);

    EnsembleSpec bad_workers = base_spec(10, 1);
    bad_workers.workers = 0;
    CHECK_THROWS_AS(run_ensemble(kBattery, bad_workers, DensityMatrix::ground(2), grid),
                    ConfigError);

    EnsembleSpec bad_stride = base_spec(10, 1);
    bad_stride.sample_stride = -1;
    CHECK_THROWS_AS(run_ensemble(kBattery, bad_stride, DensityMatrix::ground(2), grid),
                    ConfigError);

    CHECK_THROWS_AS(run_ensemble(kBattery, base_spec(10, 1), DensityMatrix::ground(3), grid),
                    DimensionMismatch);

    EnsembleSpec thin_window = base_spec(10, 1);
    thin_window.window = WindowSpec{0.0, 0.5e-3};
    CHECK_THROWS_AS(run_ensemble(kBattery, thin_window, DensityMatrix::ground(2), grid),
                    ConfigError);
}

TEST_CASE("steady-state sweep lands on the analytic value and reports convergence") {
    SweepOptions options;
    options.n_trajectories = 600;
    options.master_seed = 12;
    options.workers = 1;
    options.dt = 2e-3;
    options.horizon = 10.0;
    options.window_fraction = 0.3;

    const std::vector<double> alphas{1.0};
    const std::vector<UnravellingSpec> unravellings{UnravellingSpec::heterodyne(0.7)};
    const auto points = steady_state_sweep(kBattery, alphas, unravellings, options);
    REQUIRE(points.size() == 1);
    const SteadyPoint& pt = points[0];

    CHECK(pt.alpha == 1.0);
    CHECK(pt.analytic_energy == doctest::Approx(4.0 / 9.0).epsilon(1e-12));
    CHECK(pt.analytic_ergotropy ==
          doctest::Approx((std::sqrt(17.0) - 1.0) / 18.0).epsilon(1e-12));
    CHECK(pt.converged);
    CHECK(pt.std_error > 0.0);
    CHECK(pt.std_error >= pt.stat_error);
    // Monitored steady-state ergotropy sits between the unconditional value
    // and the mean energy; check we are in that bracket within error.
    CHECK(pt.value >= pt.analytic_ergotropy - 5.0 * pt.std_error);
    CHECK(pt.value <= pt.analytic_energy + 5.0 * pt.std_error);
}
