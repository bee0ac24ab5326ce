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

#include "oqb/ergotropy.hpp"

#include <algorithm>
#include <cmath>

namespace oqb {

EnergySpec::EnergySpec(ComplexMatrix h, double scale) : h0(std::move(h)), omega0(scale) {
    if (h0.dim() == 0) throw DimensionMismatch("EnergySpec: empty Hamiltonian");
    if (!(omega0 > 0.0)) throw InvariantViolation("EnergySpec: omega0 must be positive");
    const Spectrum s = hermitian_eigendecompose(h0);
    if (std::abs(s.eigenvalues.back()) > 1e-10)
        throw InvariantViolation("EnergySpec: ground-state energy not pinned to zero (min " +
                                 std::to_string(s.eigenvalues.back()) + ")");
}

EnergySpec EnergySpec::qubit(double omega0) {
    ComplexMatrix h(2);
    h(1, 1) = omega0;
    return EnergySpec(std::move(h), omega0);
}

double energy(const DensityMatrix& rho, const EnergySpec& h) {
    return real_expectation(h.h0, rho.matrix());
}

ErgotropyResult ergotropy_spectral(const DensityMatrix& rho, const EnergySpec& h) {
    if (rho.dim() != h.h0.dim())
        throw DimensionMismatch("ergotropy_spectral: state and Hamiltonian dimensions differ");
    const int d = rho.dim();

    // Populations descending.
    const Spectrum sr = hermitian_eigendecompose(rho.matrix());
    // Energies: hermitian_eigendecompose sorts descending, so reverse for
    // ascending energy order.
    Spectrum sh = hermitian_eigendecompose(h.h0);
    std::reverse(sh.eigenvalues.begin(), sh.eigenvalues.end());
    ComplexMatrix hv(d);
    for (int k = 0; k < d; ++k)
        for (int i = 0; i < d; ++i) hv(i, k) = sh.eigenvectors(i, d - 1 - k);

    // Passive state: k-th largest population on the k-th lowest energy level.
    ComplexMatrix passive(d);
    double passive_energy = 0.0;
    for (int k = 0; k < d; ++k) {
        const double p = std::max(sr.eigenvalues[k], 0.0);
        passive_energy += p * sh.eigenvalues[k];
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) passive(i, j) += p * hv(i, k) * std::conj(hv(j, k));
    }
    // Compensate eigenvalue clipping so the trace check stays exact.
    const double tr = passive.trace().real();
    if (tr > 0.0 && std::abs(tr - 1.0) > 1e-14) passive *= cplx(1.0 / tr, 0.0);

    // U maps the k-th population eigenvector onto the k-th lowest energy
    // eigenvector: U = sum_k |h_k><r_k|.
    ComplexMatrix u(d);
    for (int k = 0; k < d; ++k)
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j)
                u(i, j) += hv(i, k) * std::conj(sr.eigenvectors(j, k));

    ErgotropyResult res{0.0, DensityMatrix(std::move(passive)), std::move(u)};
    const double e = energy(rho, h);
    res.value = std::max(e - passive_energy, 0.0);
    return res;
}

double ergotropy_qubit_closed_form(const DensityMatrix& rho, const EnergySpec& h) {
    if (rho.dim() != 2 || h.h0.dim() != 2)
        throw DimensionMismatch("ergotropy_qubit_closed_form: qubit states only");
    const Spectrum sh = hermitian_eigendecompose(h.h0);
    if (std::abs(sh.eigenvalues.front() - h.omega0) > 1e-8)
        throw InvariantViolation("ergotropy_qubit_closed_form: H0 spectrum is not {0, omega0}");
    const double mu = purity(rho);
    const double r = std::sqrt(std::max(2.0 * mu - 1.0, 0.0));
    const double e = energy(rho, h) + 0.5 * h.omega0 * (r - 1.0);
    return e > 0.0 ? e : 0.0;
}

PovmElement::PovmElement(ComplexMatrix m, std::string lbl, const Tolerances& tol)
    : op(std::move(m)), label(std::move(lbl)) {
    if (op.dim() == 0) throw DimensionMismatch("PovmElement: empty effect");
    if (op.hermiticity_defect() > tol.hermiticity)
        throw InvariantViolation("PovmElement: effect is not Hermitian");
    const Spectrum s = hermitian_eigendecompose(op);
    if (s.eigenvalues.back() < -tol.psd_slack)
        throw InvariantViolation("PovmElement: negative eigenvalue " +
                                 std::to_string(s.eigenvalues.back()));
}

DaemonicResult daemonic_ergotropy_bipartite(const DensityMatrix& rho_sa,
                                            const std::vector<PovmElement>& povm,
                                            const EnergySpec& h_sys, int dim_sys, int dim_anc,
                                            const Tolerances& tol) {
    if (rho_sa.dim() != dim_sys * dim_anc)
        throw DimensionMismatch("daemonic_ergotropy_bipartite: state is not dim_sys*dim_anc");
    if (h_sys.h0.dim() != dim_sys)
        throw DimensionMismatch("daemonic_ergotropy_bipartite: H0 does not act on the system");
    if (povm.empty()) throw IncompletePovm("daemonic_ergotropy_bipartite: empty POVM");

    ComplexMatrix sum(dim_anc);
    for (const PovmElement& e : povm) {
        if (e.op.dim() != dim_anc)
            throw DimensionMismatch("daemonic_ergotropy_bipartite: effect dimension mismatch");
        sum += e.op;
    }
    sum -= ComplexMatrix::identity(dim_anc);
    if (sum.max_abs() > tol.povm_completeness)
        throw IncompletePovm("daemonic_ergotropy_bipartite: effects sum to identity + " +
                             std::to_string(sum.max_abs()));

    const ComplexMatrix& rho = rho_sa.matrix();
    const ComplexMatrix eye_s = ComplexMatrix::identity(dim_sys);

    DaemonicResult res;
    res.outcomes.reserve(povm.size());
    for (const PovmElement& e : povm) {
        // Tr_A[rho (1 x Pi_a)], then normalize by the outcome probability.
        const ComplexMatrix weighted = rho * kron(eye_s, e.op);
        ComplexMatrix cond = partial_trace_ancilla(weighted, dim_sys, dim_anc);
        const double p = cond.trace().real();
        if (p < tol.zero_probability) {
            res.outcomes.push_back(DaemonicOutcome{
                std::max(p, 0.0), DensityMatrix::maximally_mixed(dim_sys), 0.0, true});
        } else {
            cond *= cplx(1.0 / p, 0.0);
            // Hermitize away the roundoff from the product above.
            ComplexMatrix herm(dim_sys);
            for (int i = 0; i < dim_sys; ++i)
                for (int j = 0; j < dim_sys; ++j)
                    herm(i, j) = 0.5 * (cond(i, j) + std::conj(cond(j, i)));
            DensityMatrix cond_state(std::move(herm));
            const double cerg = ergotropy_spectral(cond_state, h_sys).value;
            res.value += p * cerg;
            res.outcomes.push_back(DaemonicOutcome{p, std::move(cond_state), cerg, false});
        }
    }
    return res;
}

}  // namespace oqb
