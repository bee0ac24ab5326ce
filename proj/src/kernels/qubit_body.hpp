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

//
// Bloch-vector step bodies for the qubit battery (H = alpha sigma_x,
// c = sqrt(kappa) sigma_minus), shared by all kernel backends.  One body per
// (unravelling, scheme) pair, templated over the pack type.  The matrix-path
// steppers in trajectories.cpp integrate the same equations on the density
// matrix; the two implementations are cross-checked pathwise in the tests.

#pragma once

#include "oqb/kernels/qubit_kernels.hpp"
#include "pack.hpp"

namespace oqb::kern {

/// Scalars precomputed once per segment.
struct Consts {
    double dt = 0.0;
    double sqdt = 0.0;       // sqrt(dt)
    double half_kdt = 0.0;   // kappa dt / 2
    double kdt = 0.0;        // kappa dt
    double two_adt = 0.0;    // 2 alpha dt
    double alpha_dt = 0.0;   // alpha dt
    double pj = 0.0;         // eta kappa dt / 2 : click probability per (1+z)
    double ehalf = 0.0;      // eta kappa dt / 2 : no-click drift gain
    double dark_floor = 0.0; // (1+z) below this counts as a dark state
    double g = 0.0;          // sqrt(eta kappa)
    double g_dt = 0.0;
    double cphi = 0.0;
    double sphi = 0.0;
    double g2 = 0.0;         // sqrt(eta kappa / 2)
    double g2_dt = 0.0;
    double m_damp = 0.0;     // 1 - kappa dt / 2
    double mm = 0.0;         // m_damp^2
    double m2a = 0.0;        // 2 m_damp alpha dt
    double adt2 = 0.0;       // (alpha dt)^2
    double leak = 0.0;       // (1 - eta) kappa dt
};

inline Consts make_consts(const StepParams& p) {
    Consts c;
    c.dt = p.dt;
    c.sqdt = std::sqrt(p.dt);
    c.half_kdt = 0.5 * p.kappa * p.dt;
    c.kdt = p.kappa * p.dt;
    c.two_adt = 2.0 * p.alpha * p.dt;
    c.alpha_dt = p.alpha * p.dt;
    c.pj = 0.5 * p.eta * p.kappa * p.dt;
    c.ehalf = 0.5 * p.eta * p.kappa * p.dt;
    c.dark_floor = 2e-14 / p.kappa;
    c.g = std::sqrt(p.eta * p.kappa);
    c.g_dt = c.g * p.dt;
    c.cphi = std::cos(p.phi);
    c.sphi = std::sin(p.phi);
    c.g2 = std::sqrt(0.5 * p.eta * p.kappa);
    c.g2_dt = c.g2 * p.dt;
    c.m_damp = 1.0 - 0.5 * p.kappa * p.dt;
    c.mm = c.m_damp * c.m_damp;
    c.m2a = 2.0 * c.m_damp * c.alpha_dt;
    c.adt2 = c.alpha_dt * c.alpha_dt;
    c.leak = (1.0 - p.eta) * p.kappa * p.dt;
    return c;
}

template <class M>
struct StepMasks {
    M too_large;
    M bad;
    M jumped;
};

/// Pull the updated Bloch vector back onto the unit ball.  Radii beyond
/// 1 + 2e-6 mean the discretization lost positivity; anything smaller is
/// roundoff and gets rescaled.
template <class P>
inline typename P::Mask clamp_radius(P& x, P& y, P& z) {
    const P one = P::broadcast(1.0);
    const P r2 = x * x + y * y + z * z;
    const P r = P::sqrt(r2);
    const typename P::Mask over = P::greater(r2, one);
    const typename P::Mask bad = P::greater(r, P::broadcast(1.0 + 2e-6));
    const P scale = P::select(over, one / r, one);
    x = x * scale;
    y = y * scale;
    z = z * scale;
    return bad;
}

/// Kraus-style update rho' = M rho M^dag + (1-eta) kappa dt |e><e|-leak,
/// M = [[1, q], [-i alpha dt, 1 - kappa dt/2]], q = -i alpha dt + zeta,
/// written out per entry of the qubit density matrix and renormalized.
template <class P>
inline void mo_core(const Consts& c, P& x, P& y, P& z, P zre, P zim) {
    const P half = P::broadcast(0.5);
    const P adt = P::broadcast(c.alpha_dt);
    const P m = P::broadcast(c.m_damp);

    const P a = half * (P::broadcast(1.0) - z);
    const P b = half * (P::broadcast(1.0) + z);
    const P u = half * x;
    const P w = half * y;

    const P qre = zre;
    const P qim = zim - adt;
    const P quw = qre * u + qim * w;

    const P gg = a + (quw + quw) + (qre * qre + qim * qim) * b + P::broadcast(c.leak) * b;
    const P ee = P::broadcast(c.adt2) * a + P::broadcast(c.m2a) * w + P::broadcast(c.mm) * b;
    const P mb = m * b;
    const P re = m * u + mb * qre - adt * (qim * u - qre * w);
    const P im = adt * a + adt * quw + m * w + mb * qim;

    const P inv = P::broadcast(1.0) / (gg + ee);
    x = (re + re) * inv;
    y = (im + im) * inv;
    z = (ee - gg) * inv;
}

template <class P, UnravellingKind K, Scheme S>
inline StepMasks<typename P::Mask> qubit_step(const Consts& c, P& x, P& y, P& z, P n1, P n2) {
    using M = typename P::Mask;
    const P one = P::broadcast(1.0);
    StepMasks<M> masks{P::mask_none(), P::mask_none(), P::mask_none()};

    if constexpr (K == UnravellingKind::PhotoDetection) {
        const P opz = one + z;
        const P p_click = P::broadcast(c.pj) * opz;
        masks.too_large = P::greater_equal(p_click, P::broadcast(0.1));
        masks.jumped = P::mask_and(P::less(n1, p_click),
                                   P::greater(opz, P::broadcast(c.dark_floor)));

        if constexpr (S == Scheme::EulerMaruyama) {
            const P gain = P::broadcast(c.ehalf) * opz;
            const P x1 = x - P::broadcast(c.half_kdt) * x + gain * x;
            const P y1 = y - P::broadcast(c.half_kdt) * y - P::broadcast(c.two_adt) * z +
                         gain * y;
            const P z1 = z + P::broadcast(c.two_adt) * y - P::broadcast(c.kdt) * opz +
                         gain * opz;
            x = x1;
            y = y1;
            z = z1;
        } else {
            mo_core(c, x, y, z, P::broadcast(0.0), P::broadcast(0.0));
        }
        // A click resets the qubit to the ground state.
        x = P::select(masks.jumped, P::broadcast(0.0), x);
        y = P::select(masks.jumped, P::broadcast(0.0), y);
        z = P::select(masks.jumped, P::broadcast(-1.0), z);
    } else if constexpr (K == UnravellingKind::Homodyne) {
        const P dw = n1 * P::broadcast(c.sqdt);
        const P cphi = P::broadcast(c.cphi);
        const P sphi = P::broadcast(c.sphi);
        const P w = x * cphi + y * sphi;
        // dy = sqrt(eta kappa) <cos phi sx + sin phi sy> dt + dW
        const P dy = P::broadcast(c.g_dt) * w + dw;

        if constexpr (S == Scheme::EulerMaruyama) {
            const P opz = one + z;
            const P gdw = P::broadcast(c.g) * dw;
            const P x1 = x - P::broadcast(c.half_kdt) * x + (opz * cphi - w * x) * gdw;
            const P y1 = y - P::broadcast(c.half_kdt) * y - P::broadcast(c.two_adt) * z +
                         (opz * sphi - w * y) * gdw;
            const P z1 = z + P::broadcast(c.two_adt) * y - P::broadcast(c.kdt) * opz -
                         w * opz * gdw;
            x = x1;
            y = y1;
            z = z1;
        } else {
            const P gdy = P::broadcast(c.g) * dy;
            mo_core(c, x, y, z, cphi * gdy, sphi * gdy);
        }
    } else {
        const P dw1 = n1 * P::broadcast(c.sqdt);
        const P dw2 = n2 * P::broadcast(c.sqdt);
        const P dy1 = P::broadcast(c.g2_dt) * x + dw1;
        const P dy2 = P::broadcast(c.g2_dt) * y + dw2;

        if constexpr (S == Scheme::EulerMaruyama) {
            const P opz = one + z;
            const P a1 = P::broadcast(c.g2) * dw1;
            const P a2 = P::broadcast(c.g2) * dw2;
            const P xy = x * y;
            const P x1 = x - P::broadcast(c.half_kdt) * x + (opz - x * x) * a1 - xy * a2;
            const P y1 = y - P::broadcast(c.half_kdt) * y - P::broadcast(c.two_adt) * z -
                         xy * a1 + (opz - y * y) * a2;
            const P z1 = z + P::broadcast(c.two_adt) * y - P::broadcast(c.kdt) * opz -
                         opz * (x * a1 + y * a2);
            x = x1;
            y = y1;
            z = z1;
        } else {
            mo_core(c, x, y, z, P::broadcast(c.g2) * dy1, P::broadcast(c.g2) * dy2);
        }
    }

    masks.bad = clamp_radius(x, y, z);
    return masks;
}

/// Advance all lanes of `state` by `nsteps`, chunked into full-width packs
/// with a scalar tail.  Returns the first failure, if any.
template <class P, UnravellingKind K, Scheme S>
std::optional<StepFailure> run_segment_body(const StepParams& params, int nsteps,
                                            BatchState& state, CounterRng* rngs,
                                            std::uint8_t* jump_flags) {
    const Consts c = make_consts(params);
    const std::size_t n = state.size();
    const std::size_t full = n - n % static_cast<std::size_t>(P::width);

    constexpr bool needs_two = (K == UnravellingKind::Heterodyne);
    double n1buf[static_cast<std::size_t>(P::width)];
    double n2buf[static_cast<std::size_t>(P::width)];

    auto draw = [&](std::size_t lane, std::size_t j) {
        if constexpr (K == UnravellingKind::PhotoDetection) {
            n1buf[j] = rngs[lane].next_uniform();
        } else if constexpr (needs_two) {
            n1buf[j] = rngs[lane].next_gaussian();
            n2buf[j] = rngs[lane].next_gaussian();
        } else {
            n1buf[j] = rngs[lane].next_gaussian();
        }
    };

    auto report = [&](std::size_t base, const StepMasks<typename P::Mask>& m)
        -> std::optional<StepFailure> {
        if (P::any(m.too_large)) {
            const unsigned b = P::bits(m.too_large);
            for (int j = 0; j < P::width; ++j)
                if (b & (1u << j)) return StepFailure{base + static_cast<std::size_t>(j),
                                                      StepFailure::TooLarge};
        }
        if (P::any(m.bad)) {
            const unsigned b = P::bits(m.bad);
            for (int j = 0; j < P::width; ++j)
                if (b & (1u << j)) return StepFailure{base + static_cast<std::size_t>(j),
                                                      StepFailure::Positivity};
        }
        return std::nullopt;
    };

    for (int step = 0; step < nsteps; ++step) {
        for (std::size_t i0 = 0; i0 < full; i0 += static_cast<std::size_t>(P::width)) {
            for (std::size_t j = 0; j < static_cast<std::size_t>(P::width); ++j)
                draw(i0 + j, j);
            P x = P::load(&state.x[i0]);
            P y = P::load(&state.y[i0]);
            P z = P::load(&state.z[i0]);
            const P n1 = P::load(n1buf);
            const P n2 = needs_two ? P::load(n2buf) : P::broadcast(0.0);
            const StepMasks<typename P::Mask> m = qubit_step<P, K, S>(c, x, y, z, n1, n2);
            x.store(&state.x[i0]);
            y.store(&state.y[i0]);
            z.store(&state.z[i0]);
            if (jump_flags && P::any(m.jumped)) {
                const unsigned b = P::bits(m.jumped);
                for (int j = 0; j < P::width; ++j)
                    if (b & (1u << j)) jump_flags[i0 + static_cast<std::size_t>(j)] = 1;
            }
            if (auto fail = report(i0, m)) return fail;
        }
        for (std::size_t lane = full; lane < n; ++lane) {
            draw(lane, 0);
            ScalarPack x{state.x[lane]}, y{state.y[lane]}, z{state.z[lane]};
            const ScalarPack n1{n1buf[0]};
            const ScalarPack n2{needs_two ? n2buf[0] : 0.0};
            const StepMasks<bool> m =
                qubit_step<ScalarPack, K, S>(c, x, y, z, n1, n2);
            state.x[lane] = x.v;
            state.y[lane] = y.v;
            state.z[lane] = z.v;
            if (jump_flags && m.jumped) jump_flags[lane] = 1;
            if (m.too_large) return StepFailure{lane, StepFailure::TooLarge};
            if (m.bad) return StepFailure{lane, StepFailure::Positivity};
        }
    }
    return std::nullopt;
}

template <class P>
std::optional<StepFailure> run_segment_dispatch(const StepParams& p, int nsteps,
                                                BatchState& s, CounterRng* rngs,
                                                std::uint8_t* jump_flags) {
    using UK = UnravellingKind;
    const bool em = (p.scheme == Scheme::EulerMaruyama);
    switch (p.kind) {
        case UK::PhotoDetection:
            return em ? run_segment_body<P, UK::PhotoDetection, Scheme::EulerMaruyama>(
                            p, nsteps, s, rngs, jump_flags)
                      : run_segment_body<P, UK::PhotoDetection, Scheme::MeasurementOperator>(
                            p, nsteps, s, rngs, jump_flags);
        case UK::Homodyne:
            return em ? run_segment_body<P, UK::Homodyne, Scheme::EulerMaruyama>(
                            p, nsteps, s, rngs, jump_flags)
                      : run_segment_body<P, UK::Homodyne, Scheme::MeasurementOperator>(
                            p, nsteps, s, rngs, jump_flags);
        case UK::Heterodyne:
            return em ? run_segment_body<P, UK::Heterodyne, Scheme::EulerMaruyama>(
                            p, nsteps, s, rngs, jump_flags)
                      : run_segment_body<P, UK::Heterodyne, Scheme::MeasurementOperator>(
                            p, nsteps, s, rngs, jump_flags);
    }
    throw Error("run_segment: unknown unravelling");
}

}  // namespace oqb::kern
