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

#include "oqb/trajectories.hpp"

#include <cmath>
#include <cstdio>

namespace oqb {

UnravellingSpec::UnravellingSpec(UnravellingKind k, double lo_phase, double eta)
    : kind(k), phi(lo_phase), efficiency(eta) {
    if (!(eta >= 0.0 && eta <= 1.0))
        throw ConfigError("UnravellingSpec: efficiency must lie in [0, 1]");
    if (!std::isfinite(phi)) throw ConfigError("UnravellingSpec: phi must be finite");
}

UnravellingSpec UnravellingSpec::photo_detection(double eta) {
    return UnravellingSpec(UnravellingKind::PhotoDetection, 0.0, eta);
}

UnravellingSpec UnravellingSpec::homodyne(double lo_phase, double eta) {
    return UnravellingSpec(UnravellingKind::Homodyne, lo_phase, eta);
}

UnravellingSpec UnravellingSpec::heterodyne(double eta) {
    return UnravellingSpec(UnravellingKind::Heterodyne, 0.0, eta);
}

std::string UnravellingSpec::label() const {
    switch (kind) {
        case UnravellingKind::PhotoDetection:
            return "pd";
        case UnravellingKind::Heterodyne:
            return "hed";
        case UnravellingKind::Homodyne: {
            char buf[48];
            std::snprintf(buf, sizeof buf, "%.6g", phi);
            std::string s(buf);
            for (char& ch : s) {
                if (ch == '.') ch = 'p';
                if (ch == '-') ch = 'm';
            }
            return "hod_phi" + s;
        }
    }
    return "unknown";
}

namespace {

struct StepWorkspace {
    ComplexMatrix cdag;
    ComplexMatrix cdc;

    explicit StepWorkspace(const LindbladModel& model)
        : cdag(model.jump.adjoint()), cdc(cdag * model.jump) {}
};

/// H[A]rho = A rho + rho A^dag - Tr[A rho + rho A^dag] rho.
ComplexMatrix innovation_superop(const ComplexMatrix& a, const ComplexMatrix& rho) {
    ComplexMatrix out = a * rho + rho * a.adjoint();
    const double tr = out.trace().real();
    ComplexMatrix scaled = rho;
    scaled *= cplx(tr, 0.0);
    out -= scaled;
    return out;
}

/// Hermitize, renormalize, clip roundoff negativity.  Negativity beyond the
/// 1e-6 slack means the discretization broke down.
ComplexMatrix repair_conditional(ComplexMatrix rho, const char* who) {
    const int d = rho.dim();
    ComplexMatrix herm(d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) herm(i, j) = 0.5 * (rho(i, j) + std::conj(rho(j, i)));
    const double tr = herm.trace().real();
    if (!(tr > 0.0) || std::abs(tr - 1.0) > 1e-2)
        throw PositivityLost(std::string(who) + ": trace drifted to " + std::to_string(tr));
    herm *= cplx(1.0 / tr, 0.0);

    const Spectrum s = hermitian_eigendecompose(herm);
    const double wmin = s.eigenvalues.back();
    if (wmin >= 0.0) return herm;
    if (wmin < -1e-6)
        throw PositivityLost(std::string(who) + ": eigenvalue " + std::to_string(wmin) +
                             "; reduce dt");
    ComplexMatrix fixed(d);
    double norm = 0.0;
    for (int k = 0; k < d; ++k) {
        const double w = std::max(s.eigenvalues[static_cast<std::size_t>(k)], 0.0);
        norm += w;
        if (w == 0.0) continue;
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j)
                fixed(i, j) += w * s.eigenvectors(i, k) * std::conj(s.eigenvectors(j, k));
    }
    fixed *= cplx(1.0 / norm, 0.0);
    return fixed;
}

ComplexMatrix jump_state(const LindbladModel& model, const StepWorkspace& ws,
                         const ComplexMatrix& rho) {
    ComplexMatrix post = model.jump * rho * ws.cdag;
    const double tr = post.trace().real();
    if (tr <= 1e-14 * std::max(rho.max_abs(), 1.0))
        throw NullJumpState("step_photodetection: jump from a dark state");
    post *= cplx(1.0 / tr, 0.0);
    return post;
}

/// Measurement-operator update M rho M^dag + (1-eta) dt c rho c^dag with
/// M = 1 - (iH + c^dag c / 2) dt + zeta c, normalized.
ComplexMatrix mo_update(const LindbladModel& model, const StepWorkspace& ws,
                        const ComplexMatrix& rho, double dt, double eta, cplx zeta) {
    const int d = rho.dim();
    ComplexMatrix m = ComplexMatrix::identity(d);
    ComplexMatrix drift = model.hamiltonian;
    drift *= cplx(0.0, dt);
    m -= drift;
    ComplexMatrix damp = ws.cdc;
    damp *= cplx(0.5 * dt, 0.0);
    m -= damp;
    if (zeta != cplx(0.0)) {
        ComplexMatrix kick = model.jump;
        kick *= zeta;
        m += kick;
    }
    ComplexMatrix out = m * rho * m.adjoint();
    if (eta < 1.0) {
        ComplexMatrix leak = model.jump * rho * ws.cdag;
        leak *= cplx((1.0 - eta) * dt, 0.0);
        out += leak;
    }
    const double tr = out.trace().real();
    out *= cplx(1.0 / tr, 0.0);
    return out;
}

struct RawStepResult {
    ComplexMatrix rho;
    bool clicked = false;
    double dy1 = 0.0;
    double dy2 = 0.0;
};

RawStepResult raw_step(const LindbladModel& model, const StepWorkspace& ws,
                       const UnravellingSpec& unr, const ComplexMatrix& rho, double dt,
                       CounterRng& rng, Scheme scheme) {
    const double eta = unr.efficiency;
    RawStepResult res;

    switch (unr.kind) {
        case UnravellingKind::PhotoDetection: {
            const double u = rng.next_uniform();
            const double nbar = expectation(ws.cdc, rho).real();
            const double p = eta * dt * nbar;
            if (p >= 0.1)
                throw StepTooLarge("step_photodetection: click probability " +
                                   std::to_string(p) + "; reduce dt");
            if (nbar > 1e-14 && u < p) {
                res.rho = jump_state(model, ws, rho);
                res.clicked = true;
                return res;
            }
            if (scheme == Scheme::EulerMaruyama) {
                // No-click drift: -i[H,.] + (1-eta) D[c] - (eta/2){c^dag c, .}
                // + eta <c^dag c>, which keeps the trace at one.
                ComplexMatrix next = rho;
                ComplexMatrix term = commutator(model.hamiltonian, rho);
                term *= cplx(0.0, -dt);
                next += term;
                if (eta < 1.0) {
                    ComplexMatrix diss = model.jump * rho * ws.cdag;
                    diss -= cplx(0.5, 0.0) * anticommutator(ws.cdc, rho);
                    diss *= cplx((1.0 - eta) * dt, 0.0);
                    next += diss;
                }
                ComplexMatrix damp = anticommutator(ws.cdc, rho);
                damp *= cplx(-0.5 * eta * dt, 0.0);
                next += damp;
                ComplexMatrix gain = rho;
                gain *= cplx(eta * dt * nbar, 0.0);
                next += gain;
                res.rho = repair_conditional(std::move(next), "step_photodetection");
            } else {
                res.rho = repair_conditional(mo_update(model, ws, rho, dt, eta, cplx(0.0)),
                                             "step_photodetection");
            }
            return res;
        }

        case UnravellingKind::Homodyne: {
            const double dw = rng.next_gaussian() * std::sqrt(dt);
            const cplx phase(std::cos(unr.phi), std::sin(unr.phi));
            ComplexMatrix c_phi = model.jump;
            c_phi *= phase;
            const double mean = (expectation(c_phi, rho) +
                                 expectation(c_phi.adjoint(), rho)).real();
            res.dy1 = std::sqrt(eta) * mean * dt + dw;
            if (scheme == Scheme::EulerMaruyama) {
                ComplexMatrix next = rho;
                ComplexMatrix drift = lindblad_rhs(model, rho);
                drift *= cplx(dt, 0.0);
                next += drift;
                ComplexMatrix noise = innovation_superop(c_phi, rho);
                noise *= cplx(std::sqrt(eta) * dw, 0.0);
                next += noise;
                res.rho = repair_conditional(std::move(next), "step_homodyne");
            } else {
                const cplx zeta = std::sqrt(eta) * phase * res.dy1;
                res.rho = repair_conditional(mo_update(model, ws, rho, dt, eta, zeta),
                                             "step_homodyne");
            }
            return res;
        }

        case UnravellingKind::Heterodyne: {
            const double dw1 = rng.next_gaussian() * std::sqrt(dt);
            const double dw2 = rng.next_gaussian() * std::sqrt(dt);
            const ComplexMatrix ic = cplx(0.0, 1.0) * model.jump;
            const double mean1 = (expectation(model.jump, rho) +
                                  expectation(ws.cdag, rho)).real();
            const double mean2 = (expectation(ic, rho) +
                                  expectation(ic.adjoint(), rho)).real();
            const double root = std::sqrt(0.5 * eta);
            res.dy1 = root * mean1 * dt + dw1;
            res.dy2 = root * mean2 * dt + dw2;
            if (scheme == Scheme::EulerMaruyama) {
                ComplexMatrix next = rho;
                ComplexMatrix drift = lindblad_rhs(model, rho);
                drift *= cplx(dt, 0.0);
                next += drift;
                ComplexMatrix n1 = innovation_superop(model.jump, rho);
                n1 *= cplx(root * dw1, 0.0);
                next += n1;
                ComplexMatrix n2 = innovation_superop(ic, rho);
                n2 *= cplx(root * dw2, 0.0);
                next += n2;
                res.rho = repair_conditional(std::move(next), "step_heterodyne");
            } else {
                const cplx zeta = root * cplx(res.dy1, res.dy2);
                res.rho = repair_conditional(mo_update(model, ws, rho, dt, eta, zeta),
                                             "step_heterodyne");
            }
            return res;
        }
    }
    throw Error("raw_step: unreachable");
}

}  // namespace

std::pair<DensityMatrix, bool> step_photodetection(const LindbladModel& model,
                                                   const UnravellingSpec& unr,
                                                   const DensityMatrix& rho, double dt,
                                                   CounterRng& rng, Scheme scheme) {
    if (unr.kind != UnravellingKind::PhotoDetection)
        throw ConfigError("step_photodetection: wrong unravelling kind");
    StepWorkspace ws(model);
    RawStepResult r = raw_step(model, ws, unr, rho.matrix(), dt, rng, scheme);
    return {DensityMatrix(std::move(r.rho)), r.clicked};
}

std::pair<DensityMatrix, double> step_homodyne(const LindbladModel& model,
                                               const UnravellingSpec& unr,
                                               const DensityMatrix& rho, double dt,
                                               CounterRng& rng, Scheme scheme) {
    if (unr.kind != UnravellingKind::Homodyne)
        throw ConfigError("step_homodyne: wrong unravelling kind");
    StepWorkspace ws(model);
    RawStepResult r = raw_step(model, ws, unr, rho.matrix(), dt, rng, scheme);
    return {DensityMatrix(std::move(r.rho)), r.dy1};
}

std::pair<DensityMatrix, std::array<double, 2>> step_heterodyne(
    const LindbladModel& model, const UnravellingSpec& unr, const DensityMatrix& rho, double dt,
    CounterRng& rng, Scheme scheme) {
    if (unr.kind != UnravellingKind::Heterodyne)
        throw ConfigError("step_heterodyne: wrong unravelling kind");
    StepWorkspace ws(model);
    RawStepResult r = raw_step(model, ws, unr, rho.matrix(), dt, rng, scheme);
    return {DensityMatrix(std::move(r.rho)), {r.dy1, r.dy2}};
}

TrajectoryRecord run_trajectory(const LindbladModel& model, const UnravellingSpec& unr,
                                const DensityMatrix& rho0, const TimeGrid& grid,
                                const EnergySpec& energy_ref, std::uint64_t master_seed,
                                const TrajectoryOptions& options) {
    if (rho0.dim() != model.hamiltonian.dim())
        throw DimensionMismatch("run_trajectory: state and model dimensions differ");
    if (options.sample_stride < 1) throw ConfigError("run_trajectory: stride must be >= 1");

    TrajectoryRecord rec;
    rec.grid = grid;
    rec.master_seed = master_seed;
    rec.stream = options.stream;
    rec.storage = options.storage;

    CounterRng rng(master_seed, options.stream);
    StepWorkspace ws(model);
    ComplexMatrix rho = rho0.matrix();

    auto store = [&](int k, const ComplexMatrix& state) {
        rec.sample_indices.push_back(k);
        const DensityMatrix dm(state);
        rec.energy.push_back(energy(dm, energy_ref));
        rec.ergotropy.push_back(ergotropy_spectral(dm, energy_ref).value);
        rec.purity.push_back(purity(dm));
        if (options.storage == StoragePolicy::FullStates) rec.states.push_back(dm);
    };

    store(0, rho);
    for (int k = 0; k < grid.steps; ++k) {
        RawStepResult r = raw_step(model, ws, unr, rho, grid.dt, rng, options.scheme);
        rho = std::move(r.rho);
        switch (unr.kind) {
            case UnravellingKind::PhotoDetection:
                if (r.clicked) rec.detection.jump_times.push_back(grid.time(k + 1));
                break;
            case UnravellingKind::Homodyne:
                rec.detection.dy1.push_back(r.dy1);
                break;
            case UnravellingKind::Heterodyne:
                rec.detection.dy1.push_back(r.dy1);
                rec.detection.dy2.push_back(r.dy2);
                break;
        }
        const int idx = k + 1;
        if (idx % options.sample_stride == 0 || idx == grid.steps) store(idx, rho);
    }
    return rec;
}

}  // namespace oqb
