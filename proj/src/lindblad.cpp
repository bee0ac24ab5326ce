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

#include "oqb/lindblad.hpp"

#include <cmath>

namespace oqb {

LindbladModel::LindbladModel(ComplexMatrix h, ComplexMatrix c)
    : hamiltonian(std::move(h)), jump(std::move(c)) {
    if (hamiltonian.dim() == 0 || hamiltonian.dim() != jump.dim())
        throw DimensionMismatch("LindbladModel: Hamiltonian and jump dimensions differ");
    if (hamiltonian.hermiticity_defect() > 1e-10)
        throw NonHermitianInput("LindbladModel: Hamiltonian is not Hermitian");
}

TimeGrid::TimeGrid(double start, double step, int n) : t0(start), dt(step), steps(n) {
    if (!(dt > 0.0)) throw ConfigError("TimeGrid: dt must be positive");
    if (steps < 0) throw ConfigError("TimeGrid: negative step count");
}

std::vector<double> TimeGrid::times() const {
    std::vector<double> t(static_cast<std::size_t>(steps) + 1);
    for (int k = 0; k <= steps; ++k) t[static_cast<std::size_t>(k)] = time(k);
    return t;
}

ComplexMatrix lindblad_rhs(const LindbladModel& model, const ComplexMatrix& rho) {
    const ComplexMatrix& h = model.hamiltonian;
    const ComplexMatrix& c = model.jump;
    const ComplexMatrix cdag = c.adjoint();
    const ComplexMatrix cdc = cdag * c;
    ComplexMatrix out = cplx(0.0, -1.0) * commutator(h, rho);
    out += c * rho * cdag;
    out -= cplx(0.5, 0.0) * anticommutator(cdc, rho);
    return out;
}

namespace {

/// Hermitize, renormalize the trace, and confirm the state has not drifted
/// beyond repairable roundoff.  Used on intermediate integrator output.
ComplexMatrix repair_state(ComplexMatrix rho, const char* who) {
    const int d = rho.dim();
    ComplexMatrix herm(d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) herm(i, j) = 0.5 * (rho(i, j) + std::conj(rho(j, i)));
    const double tr = herm.trace().real();
    if (std::abs(tr - 1.0) > 1e-6)
        throw StepTooLarge(std::string(who) + ": trace drifted to " + std::to_string(tr));
    herm *= cplx(1.0 / tr, 0.0);
    const Spectrum s = hermitian_eigendecompose(herm);
    if (s.eigenvalues.back() < -1e-6)
        throw StepTooLarge(std::string(who) + ": eigenvalue " +
                           std::to_string(s.eigenvalues.back()) + "; reduce dt");
    if (s.eigenvalues.back() < 0.0) {
        // Clip the roundoff-scale negativity and renormalize.
        const int dd = herm.dim();
        ComplexMatrix fixed(dd);
        double norm = 0.0;
        for (int k = 0; k < dd; ++k) {
            const double w = std::max(s.eigenvalues[static_cast<std::size_t>(k)], 0.0);
            norm += w;
            if (w == 0.0) continue;
            for (int i = 0; i < dd; ++i)
                for (int j = 0; j < dd; ++j)
                    fixed(i, j) += w * s.eigenvectors(i, k) * std::conj(s.eigenvectors(j, k));
        }
        fixed *= cplx(1.0 / norm, 0.0);
        return fixed;
    }
    return herm;
}

}  // namespace

std::vector<DensityMatrix> evolve_unconditional(const LindbladModel& model,
                                                const DensityMatrix& rho0, const TimeGrid& grid) {
    if (rho0.dim() != model.hamiltonian.dim())
        throw DimensionMismatch("evolve_unconditional: state and model dimensions differ");
    std::vector<DensityMatrix> out;
    out.reserve(static_cast<std::size_t>(grid.steps) + 1);
    out.push_back(rho0);

    ComplexMatrix rho = rho0.matrix();
    const double dt = grid.dt;
    for (int k = 0; k < grid.steps; ++k) {
        const ComplexMatrix k1 = lindblad_rhs(model, rho);
        const ComplexMatrix k2 = lindblad_rhs(model, rho + cplx(0.5 * dt, 0.0) * k1);
        const ComplexMatrix k3 = lindblad_rhs(model, rho + cplx(0.5 * dt, 0.0) * k2);
        const ComplexMatrix k4 = lindblad_rhs(model, rho + cplx(dt, 0.0) * k3);
        ComplexMatrix sum = k1;
        sum += cplx(2.0, 0.0) * k2;
        sum += cplx(2.0, 0.0) * k3;
        sum += k4;
        rho += cplx(dt / 6.0, 0.0) * sum;
        rho = repair_state(std::move(rho), "evolve_unconditional");
        out.push_back(DensityMatrix(rho));
    }
    return out;
}

namespace {

std::array<double, 3> bloch_of(const ComplexMatrix& m) {
    return {2.0 * m(0, 1).real(), 2.0 * m(0, 1).imag(), m(1, 1).real() - m(0, 0).real()};
}

/// Qubit path: the generator is affine in the Bloch vector, dr/dt = M r + b.
/// Columns of M and the offset b come from applying the rhs to basis states.
DensityMatrix steady_state_bloch(const LindbladModel& model, const Tolerances& tol) {
    ComplexMatrix half_eye(2);
    half_eye(0, 0) = 0.5;
    half_eye(1, 1) = 0.5;
    const std::array<double, 3> b = bloch_of(lindblad_rhs(model, half_eye));

    double m[3][3];
    const ComplexMatrix paulis[3] = {pauli::x(), pauli::y(), pauli::z()};
    for (int c = 0; c < 3; ++c) {
        const std::array<double, 3> col =
            bloch_of(lindblad_rhs(model, cplx(0.5, 0.0) * paulis[c]));
        for (int r = 0; r < 3; ++r) m[r][c] = col[static_cast<std::size_t>(r)];
    }

    // Solve M r = -b by Cramer's rule.
    const double det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
                       m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
                       m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    double scale = 0.0;
    for (auto& row : m)
        for (double v : row) scale = std::max(scale, std::abs(v));
    if (std::abs(det) <= tol.kernel_rank * scale * scale * scale)
        throw DegenerateSteadyState("steady_state: Bloch drift matrix is singular");

    const double rhs[3] = {-b[0], -b[1], -b[2]};
    double r[3];
    for (int c = 0; c < 3; ++c) {
        double mc[3][3];
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) mc[i][j] = (j == c) ? rhs[i] : m[i][j];
        const double detc = mc[0][0] * (mc[1][1] * mc[2][2] - mc[1][2] * mc[2][1]) -
                            mc[0][1] * (mc[1][0] * mc[2][2] - mc[1][2] * mc[2][0]) +
                            mc[0][2] * (mc[1][0] * mc[2][1] - mc[1][1] * mc[2][0]);
        r[c] = detc / det;
    }
    return DensityMatrix::from_bloch(r[0], r[1], r[2]);
}

/// General path: unique null vector of the vectorized generator, found as
/// the lowest eigenvector of L^dag L (column-stacking convention,
/// vec(A rho B) = (B^T x A) vec(rho)).
DensityMatrix steady_state_kernel(const LindbladModel& model, const Tolerances& tol) {
    const int d = model.hamiltonian.dim();
    const int d2 = d * d;
    const ComplexMatrix eye = ComplexMatrix::identity(d);
    const ComplexMatrix& h = model.hamiltonian;
    const ComplexMatrix& c = model.jump;
    const ComplexMatrix cdc = c.adjoint() * c;

    ComplexMatrix lv(d2);
    lv += cplx(0.0, -1.0) * (kron(eye, h) - kron(h.transpose(), eye));
    lv += kron(c.conj(), c);
    lv -= cplx(0.5, 0.0) * (kron(eye, cdc) + kron(cdc.transpose(), eye));

    const ComplexMatrix gram = lv.adjoint() * lv;
    const Spectrum s = hermitian_eigendecompose(gram, tol);

    // Singular values of L are sqrt of the Gram eigenvalues (descending).
    const double smax = std::sqrt(std::max(s.eigenvalues.front(), 0.0));
    const double cut = tol.kernel_rank * std::max(smax, 1e-300);
    int kernel_dim = 0;
    for (double w : s.eigenvalues)
        if (std::sqrt(std::max(w, 0.0)) <= cut) ++kernel_dim;
    if (kernel_dim != 1)
        throw DegenerateSteadyState("steady_state: Liouvillian kernel dimension " +
                                    std::to_string(kernel_dim));

    // Reshape the null vector (column-stacked) into a matrix.
    ComplexMatrix rho(d);
    for (int col = 0; col < d; ++col)
        for (int row = 0; row < d; ++row) rho(row, col) = s.eigenvectors(col * d + row, d2 - 1);

    ComplexMatrix herm(d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) herm(i, j) = 0.5 * (rho(i, j) + std::conj(rho(j, i)));
    const cplx tr = herm.trace();
    if (std::abs(tr) < 1e-10)
        throw DegenerateSteadyState("steady_state: kernel vector is traceless");
    herm *= cplx(1.0, 0.0) / tr;
    return DensityMatrix(std::move(herm));
}

}  // namespace

DensityMatrix steady_state(const LindbladModel& model, SteadyStateMethod method,
                           const Tolerances& tol) {
    switch (method) {
        case SteadyStateMethod::BlochLinearSystem:
            if (model.hamiltonian.dim() != 2)
                throw DimensionMismatch("steady_state: Bloch path needs a qubit model");
            return steady_state_bloch(model, tol);
        case SteadyStateMethod::LiouvillianKernel:
            return steady_state_kernel(model, tol);
        case SteadyStateMethod::Auto:
        default:
            return model.hamiltonian.dim() == 2 ? steady_state_bloch(model, tol)
                                                : steady_state_kernel(model, tol);
    }
}

}  // namespace oqb
