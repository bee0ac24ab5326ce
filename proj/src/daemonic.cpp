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

#include "oqb/daemonic.hpp"

#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <thread>

namespace oqb {

namespace {

constexpr int kBlockSize = 64;

std::vector<int> build_sample_indices(int steps, int stride) {
    std::vector<int> idx;
    idx.push_back(0);
    for (int k = stride; k < steps; k += stride) idx.push_back(k);
    if (steps > 0) idx.push_back(steps);
    return idx;
}

int auto_stride(int steps, int requested) {
    if (requested > 0) return requested;
    return std::max(1, steps / 800);
}

/// Positions (into the sample-index array) covered by the window, split
/// into halves for the trend diagnostic.
struct WindowLayout {
    std::vector<std::size_t> first_half;
    std::vector<std::size_t> second_half;
};

WindowLayout window_layout(const std::vector<double>& times, const WindowSpec& w) {
    std::vector<std::size_t> inside;
    for (std::size_t i = 0; i < times.size(); ++i)
        if (times[i] >= w.t_lo - 1e-12 && times[i] <= w.t_hi + 1e-12) inside.push_back(i);
    if (inside.size() < 2)
        throw ConfigError("run_ensemble: window covers fewer than two samples");
    WindowLayout layout;
    const std::size_t half = inside.size() / 2;
    layout.first_half.assign(inside.begin(), inside.begin() + half);
    layout.second_half.assign(inside.begin() + half, inside.end());
    return layout;
}

struct BlockAccum {
    std::vector<double> erg_sum, erg2_sum;
    std::vector<double> x_sum, y_sum, z_sum;
    std::vector<double> x2_sum, y2_sum, z2_sum;
    double wa_sum = 0.0, wb_sum = 0.0;
    double w_sum = 0.0, w2_sum = 0.0;
    double d_sum = 0.0, d2_sum = 0.0;
    int count = 0;

    explicit BlockAccum(std::size_t samples)
        : erg_sum(samples), erg2_sum(samples), x_sum(samples), y_sum(samples), z_sum(samples),
          x2_sum(samples), y2_sum(samples), z2_sum(samples) {}
};

struct EnsembleJob {
    kern::StepParams params;
    double omega0 = 1.0;
    std::array<double, 3> r0{};
    std::vector<int> sample_indices;
    std::optional<WindowLayout> window;
    std::uint64_t master_seed = 0;
    int n = 0;
    kern::Backend backend = kern::Backend::Scalar;
};

void translate_failure(const kern::StepFailure& f, std::size_t first_traj) {
    const std::size_t traj = first_traj + f.lane;
    if (f.code == kern::StepFailure::TooLarge)
        throw StepTooLarge("run_ensemble: click probability >= 0.1 in trajectory " +
                           std::to_string(traj) + "; reduce dt");
    throw PositivityLost("run_ensemble: state left the Bloch ball in trajectory " +
                         std::to_string(traj) + "; reduce dt");
}

BlockAccum compute_block(const EnsembleJob& job, std::size_t first, int count) {
    const std::size_t samples = job.sample_indices.size();
    BlockAccum acc(samples);
    acc.count = count;

    kern::BatchState state(static_cast<std::size_t>(count), job.r0);
    std::vector<CounterRng> rngs;
    rngs.reserve(static_cast<std::size_t>(count));
    for (int j = 0; j < count; ++j)
        rngs.emplace_back(job.master_seed, first + static_cast<std::size_t>(j));

    std::vector<double> win_a(static_cast<std::size_t>(count), 0.0);
    std::vector<double> win_b(static_cast<std::size_t>(count), 0.0);

    std::vector<char> in_first(samples, 0), in_second(samples, 0);
    if (job.window) {
        for (std::size_t pos : job.window->first_half) in_first[pos] = 1;
        for (std::size_t pos : job.window->second_half) in_second[pos] = 1;
    }

    auto accumulate = [&](std::size_t s) {
        for (int j = 0; j < count; ++j) {
            const std::size_t lane = static_cast<std::size_t>(j);
            const double x = state.x[lane], y = state.y[lane], z = state.z[lane];
            const double erg = ergotropy_qubit_bloch(x, y, z, job.omega0);
            acc.erg_sum[s] += erg;
            acc.erg2_sum[s] += erg * erg;
            acc.x_sum[s] += x;
            acc.y_sum[s] += y;
            acc.z_sum[s] += z;
            acc.x2_sum[s] += x * x;
            acc.y2_sum[s] += y * y;
            acc.z2_sum[s] += z * z;
            if (in_first[s]) win_a[lane] += erg;
            if (in_second[s]) win_b[lane] += erg;
        }
    };

    accumulate(0);
    for (std::size_t s = 1; s < samples; ++s) {
        const int nsteps = job.sample_indices[s] - job.sample_indices[s - 1];
        if (auto fail = kern::run_segment(job.backend, job.params, nsteps, state, rngs.data()))
            translate_failure(*fail, first);
        accumulate(s);
    }

    if (job.window) {
        const double na = static_cast<double>(job.window->first_half.size());
        const double nb = static_cast<double>(job.window->second_half.size());
        for (int j = 0; j < count; ++j) {
            const std::size_t lane = static_cast<std::size_t>(j);
            const double wa = win_a[lane] / na;
            const double wb = win_b[lane] / nb;
            const double w = (win_a[lane] + win_b[lane]) / (na + nb);
            const double d = wb - wa;
            acc.wa_sum += wa;
            acc.wb_sum += wb;
            acc.w_sum += w;
            acc.w2_sum += w * w;
            acc.d_sum += d;
            acc.d2_sum += d * d;
        }
    }
    return acc;
}

double sample_variance(double sum, double sum2, double n) {
    if (n < 2.0) return std::numeric_limits<double>::quiet_NaN();
    const double var = (sum2 - sum * sum / n) / (n - 1.0);
    return var > 0.0 ? var : 0.0;
}

double standard_error(double sum, double sum2, double n) {
    const double var = sample_variance(sum, sum2, n);
    return std::isnan(var) ? var : std::sqrt(var / n);
}

}  // namespace

DensityMatrix EnsembleStats::mean_state(std::size_t k) const {
    return DensityMatrix::from_bloch(mean_x.at(k), mean_y.at(k), mean_z.at(k));
}

EnsembleStats run_ensemble(const BatteryModel& battery, const EnsembleSpec& spec,
                           const DensityMatrix& rho0, const TimeGrid& grid) {
    if (spec.n_trajectories < 1) throw ConfigError("run_ensemble: need at least one trajectory");
    if (spec.workers < 1) throw ConfigError("run_ensemble: workers must be >= 1");
    if (spec.sample_stride < 0) throw ConfigError("run_ensemble: stride must be >= 0");
    if (grid.steps < 1) throw ConfigError("run_ensemble: empty time grid");
    if (rho0.dim() != 2) throw DimensionMismatch("run_ensemble: battery states are qubits");

    EnsembleJob job;
    job.params.kind = spec.unravelling.kind;
    job.params.scheme = spec.scheme;
    job.params.alpha = battery.alpha;
    job.params.kappa = battery.kappa;
    job.params.eta = spec.unravelling.efficiency;
    job.params.phi = spec.unravelling.phi;
    job.params.dt = grid.dt;
    job.omega0 = battery.omega0;
    job.r0 = rho0.bloch();
    job.master_seed = spec.master_seed;
    job.n = spec.n_trajectories;
    job.backend = kern::resolve_backend(spec.backend);

    const int stride = auto_stride(grid.steps, spec.sample_stride);
    job.sample_indices = build_sample_indices(grid.steps, stride);
    const std::size_t samples = job.sample_indices.size();

    EnsembleStats stats;
    stats.sample_indices = job.sample_indices;
    stats.times.reserve(samples);
    for (int k : job.sample_indices) stats.times.push_back(grid.time(k));
    stats.n = job.n;
    stats.omega0 = battery.omega0;
    stats.kappa = battery.kappa;
    stats.dt = grid.dt;
    stats.backend_used = job.backend;

    if (spec.window) job.window = window_layout(stats.times, *spec.window);

    // Fill every block slot, handing blocks to workers dynamically; the
    // content of each slot is independent of which worker computed it.
    const std::size_t nblocks =
        (static_cast<std::size_t>(job.n) + kBlockSize - 1) / kBlockSize;
    std::vector<std::optional<BlockAccum>> blocks(nblocks);
    std::atomic<std::size_t> next{0};
    std::atomic<bool> abort{false};
    std::exception_ptr error;
    std::mutex error_mutex;

    auto worker = [&]() {
        while (!abort.load(std::memory_order_relaxed)) {
            const std::size_t b = next.fetch_add(1);
            if (b >= nblocks) return;
            const std::size_t first = b * kBlockSize;
            const int count = static_cast<int>(
                std::min<std::size_t>(kBlockSize, static_cast<std::size_t>(job.n) - first));
            try {
                blocks[b].emplace(compute_block(job, first, count));
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
                abort.store(true, std::memory_order_relaxed);
                return;
            }
        }
    };

    const int nworkers = std::min<int>(spec.workers, static_cast<int>(nblocks));
    if (nworkers <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(nworkers));
        for (int t = 0; t < nworkers; ++t) pool.emplace_back(worker);
        for (std::thread& t : pool) t.join();
    }
    if (error) std::rethrow_exception(error);

    // Block-ordered reduction keeps the floating-point result identical for
    // any worker count.
    const double n = static_cast<double>(job.n);
    std::vector<double> erg_sum(samples), erg2_sum(samples);
    std::vector<double> x_sum(samples), y_sum(samples), z_sum(samples);
    std::vector<double> x2_sum(samples), y2_sum(samples), z2_sum(samples);
    double wa_sum = 0.0, wb_sum = 0.0, w_sum = 0.0, w2_sum = 0.0, d_sum = 0.0, d2_sum = 0.0;
    for (const auto& slot : blocks) {
        const BlockAccum& b = *slot;
        for (std::size_t s = 0; s < samples; ++s) {
            erg_sum[s] += b.erg_sum[s];
            erg2_sum[s] += b.erg2_sum[s];
            x_sum[s] += b.x_sum[s];
            y_sum[s] += b.y_sum[s];
            z_sum[s] += b.z_sum[s];
            x2_sum[s] += b.x2_sum[s];
            y2_sum[s] += b.y2_sum[s];
            z2_sum[s] += b.z2_sum[s];
        }
        wa_sum += b.wa_sum;
        wb_sum += b.wb_sum;
        w_sum += b.w_sum;
        w2_sum += b.w2_sum;
        d_sum += b.d_sum;
        d2_sum += b.d2_sum;
    }

    stats.daemonic_ergotropy.resize(samples);
    stats.std_error.resize(samples);
    stats.mean_x.resize(samples);
    stats.mean_y.resize(samples);
    stats.mean_z.resize(samples);
    stats.se_x.resize(samples);
    stats.se_y.resize(samples);
    stats.se_z.resize(samples);
    stats.mean_state_ergotropy.resize(samples);
    stats.mean_state_ergotropy_se.resize(samples);

    for (std::size_t s = 0; s < samples; ++s) {
        stats.daemonic_ergotropy[s] = erg_sum[s] / n;
        stats.std_error[s] = standard_error(erg_sum[s], erg2_sum[s], n);
        stats.mean_x[s] = x_sum[s] / n;
        stats.mean_y[s] = y_sum[s] / n;
        stats.mean_z[s] = z_sum[s] / n;
        stats.se_x[s] = standard_error(x_sum[s], x2_sum[s], n);
        stats.se_y[s] = standard_error(y_sum[s], y2_sum[s], n);
        stats.se_z[s] = standard_error(z_sum[s], z2_sum[s], n);
        stats.mean_state_ergotropy[s] =
            ergotropy_qubit_bloch(stats.mean_x[s], stats.mean_y[s], stats.mean_z[s],
                                  battery.omega0);

        // Delete-one-block jackknife for the nonlinear mean-state statistic.
        if (nblocks >= 2) {
            double theta_sum = 0.0, theta2_sum = 0.0;
            for (const auto& slot : blocks) {
                const BlockAccum& b = *slot;
                const double m = n - static_cast<double>(b.count);
                const double theta = ergotropy_qubit_bloch(
                    (x_sum[s] - b.x_sum[s]) / m, (y_sum[s] - b.y_sum[s]) / m,
                    (z_sum[s] - b.z_sum[s]) / m, battery.omega0);
                theta_sum += theta;
                theta2_sum += theta * theta;
            }
            const double nb = static_cast<double>(nblocks);
            const double spread = theta2_sum / nb - (theta_sum / nb) * (theta_sum / nb);
            stats.mean_state_ergotropy_se[s] =
                std::sqrt(std::max(spread, 0.0) * (nb - 1.0));
        } else {
            stats.mean_state_ergotropy_se[s] = std::numeric_limits<double>::quiet_NaN();
        }
    }

    if (job.window) {
        WindowStats w;
        w.t_lo = spec.window->t_lo;
        w.t_hi = spec.window->t_hi;
        w.samples = static_cast<int>(job.window->first_half.size() +
                                     job.window->second_half.size());
        w.mean = w_sum / n;
        w.std_error = standard_error(w_sum, w2_sum, n);
        w.first_half_mean = wa_sum / n;
        w.second_half_mean = wb_sum / n;
        w.trend = d_sum / n;
        w.trend_std_error = standard_error(d_sum, d2_sum, n);
        stats.window = w;
    }

    // Unconditional reference on the same grid and discretization.
    const LindbladModel lindblad = battery.to_lindblad();
    const EnergySpec h = battery.energy_spec();
    const std::vector<DensityMatrix> path = evolve_unconditional(lindblad, rho0, grid);
    stats.unconditional_energy.reserve(samples);
    stats.unconditional_ergotropy.reserve(samples);
    for (int k : job.sample_indices) {
        const DensityMatrix& state = path[static_cast<std::size_t>(k)];
        stats.unconditional_energy.push_back(energy(state, h));
        stats.unconditional_ergotropy.push_back(ergotropy_qubit_closed_form(state, h));
    }
    return stats;
}

BoundsReport check_bounds(const EnsembleStats& stats, double n_sigma,
                          std::optional<double> abs_slack) {
    BoundsReport rep;
    const std::size_t samples = stats.times.size();
    // Discretization allowance: first-order schemes carry an O(dt) bias that
    // statistics cannot see when eta (and hence the standard error) is small.
    const double slack0 = abs_slack.value_or(3.0 * stats.omega0 * stats.kappa * stats.dt);
    rep.worst_lower_margin = std::numeric_limits<double>::infinity();
    rep.worst_upper_margin = std::numeric_limits<double>::infinity();

    for (std::size_t s = 0; s < samples; ++s) {
        const double se = std::isnan(stats.std_error[s]) ? 0.0 : stats.std_error[s];
        const double slack = n_sigma * se + slack0;
        const double lower =
            stats.daemonic_ergotropy[s] - (stats.unconditional_ergotropy[s] - slack);
        const double upper =
            (stats.unconditional_energy[s] + slack) - stats.daemonic_ergotropy[s];
        rep.checked += 1;
        if (lower < 0.0) rep.lower_violations += 1;
        if (upper < 0.0) rep.upper_violations += 1;
        rep.worst_lower_margin = std::min(rep.worst_lower_margin, lower);
        rep.worst_upper_margin = std::min(rep.worst_upper_margin, upper);
    }
    rep.pass = rep.lower_violations == 0 && rep.upper_violations == 0;
    return rep;
}

std::vector<SteadyPoint> steady_state_sweep(const BatteryModel& base,
                                            const std::vector<double>& alphas,
                                            const std::vector<UnravellingSpec>& unravellings,
                                            const SweepOptions& options) {
    if (alphas.empty() || unravellings.empty())
        throw ConfigError("steady_state_sweep: empty alpha grid or unravelling list");
    if (!(options.horizon > 0.0) || !(options.dt > 0.0))
        throw ConfigError("steady_state_sweep: horizon and dt must be positive");
    if (!(options.window_fraction > 0.0 && options.window_fraction < 1.0))
        throw ConfigError("steady_state_sweep: window_fraction must lie in (0, 1)");

    const double dt_abs = options.dt / base.kappa;
    const int steps = static_cast<int>(std::lround(options.horizon / options.dt));
    const TimeGrid grid(0.0, dt_abs, steps);
    const double t_end = grid.time(steps);

    std::vector<SteadyPoint> out;
    out.reserve(alphas.size() * unravellings.size());
    std::size_t point_index = 0;
    for (double alpha : alphas) {
        const BatteryModel battery(base.omega0, alpha, base.kappa);
        for (const UnravellingSpec& unr : unravellings) {
            EnsembleSpec spec;
            spec.n_trajectories = options.n_trajectories;
            // Independent noise per sweep point, still reproducible.
            spec.master_seed =
                CounterRng::mix(options.master_seed + 0x9E3779B97F4A7C15ull * (point_index + 1));
            spec.unravelling = unr;
            spec.scheme = options.scheme;
            spec.workers = options.workers;
            spec.backend = options.backend;
            spec.window = WindowSpec{t_end * (1.0 - options.window_fraction), t_end};

            const EnsembleStats stats =
                run_ensemble(battery, spec, DensityMatrix::ground(2), grid);
            const WindowStats& w = *stats.window;

            SteadyPoint pt;
            pt.alpha = alpha;
            pt.unravelling = unr;
            pt.value = w.mean;
            pt.stat_error = std::isnan(w.std_error) ? 0.0 : w.std_error;
            pt.trend = w.trend;
            pt.trend_std_error = std::isnan(w.trend_std_error) ? 0.0 : w.trend_std_error;
            // Residual relaxation bounded by the half-window drift.
            pt.std_error = std::sqrt(pt.stat_error * pt.stat_error +
                                     0.25 * pt.trend * pt.trend);
            pt.converged = std::abs(pt.trend) <=
                           std::max(3.0 * pt.trend_std_error,
                                    options.trend_floor * battery.omega0);
            pt.analytic_ergotropy = battery.steady_ergotropy_analytic();
            pt.analytic_energy = battery.steady_energy_analytic();
            out.push_back(pt);
            ++point_index;
        }
    }
    return out;
}

}  // namespace oqb
