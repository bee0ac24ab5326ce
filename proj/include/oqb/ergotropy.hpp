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

#include <cmath>
#include <string>
#include <vector>

#include "oqb/qmat.hpp"

namespace oqb {

/// Internal reference Hamiltonian H0 used for energy bookkeeping.  The
/// ground-state energy is pinned to zero (smallest eigenvalue 0 within
/// 1e-10); `omega0` is the overall energy scale used by the qubit fast
/// paths, equal to the qubit gap for two-level systems.
struct EnergySpec {
    ComplexMatrix h0;
    double omega0 = 1.0;

    EnergySpec(ComplexMatrix h, double scale);

    /// H0 = omega0 |1><1|, i.e. (omega0/2)(sigma_z + 1).
    static EnergySpec qubit(double omega0);
};

/// Tr[H0 rho].
double energy(const DensityMatrix& rho, const EnergySpec& h);

/// Maximum work unitarily extractable from `rho` with respect to H0,
/// together with the passive state it lands on and one optimal extraction
/// unitary (eigenbasis permutation pairing descending populations with
/// ascending energies).
struct ErgotropyResult {
    double value = 0.0;
    DensityMatrix passive_state;
    ComplexMatrix extraction_unitary;
};

ErgotropyResult ergotropy_spectral(const DensityMatrix& rho, const EnergySpec& h);

/// Qubit closed form: for H0 with spectrum {0, omega0},
///   ergotropy = E(rho) + (omega0/2) (sqrt(2 mu - 1) - 1),  mu = purity.
/// Agrees with ergotropy_spectral to roundoff; used by the trajectory hot
/// path.  Requires dim == 2.
double ergotropy_qubit_closed_form(const DensityMatrix& rho, const EnergySpec& h);

/// Same closed form directly from Bloch coordinates, bypassing state
/// validation; the batch kernels call this per stored sample.
inline double ergotropy_qubit_bloch(double x, double y, double z, double omega0) {
    const double r = std::sqrt(x * x + y * y + z * z);
    const double e = 0.5 * omega0 * (z + r);
    return e > 0.0 ? e : 0.0;
}

inline double energy_qubit_bloch(double z, double omega0) { return 0.5 * omega0 * (1.0 + z); }

/// One POVM effect on the ancilla.  Must be Hermitian and positive
/// semidefinite within the standard tolerances.
struct PovmElement {
    ComplexMatrix op;
    std::string label;

    PovmElement(ComplexMatrix m, std::string lbl = std::string(),
                const Tolerances& tol = Tolerances{});
};

struct DaemonicOutcome {
    double probability = 0.0;
    DensityMatrix conditional_state;
    double conditional_ergotropy = 0.0;
    /// True when the outcome probability fell below the zero threshold; the
    /// conditional state is then a maximally mixed placeholder and the
    /// outcome contributes nothing.
    bool negligible = false;
};

/// Daemonic ergotropy of a system-ancilla state under an ancilla POVM:
/// the POVM-average of the conditional-state ergotropies,
///   sum_a p_a ergotropy(rho_a),  rho_a = Tr_A[rho (1 x Pi_a)] / p_a.
/// Throws IncompletePovm if sum_a Pi_a deviates from the identity.
struct DaemonicResult {
    double value = 0.0;
    std::vector<DaemonicOutcome> outcomes;
};

DaemonicResult daemonic_ergotropy_bipartite(const DensityMatrix& rho_sa,
                                            const std::vector<PovmElement>& povm,
                                            const EnergySpec& h_sys, int dim_sys, int dim_anc,
                                            const Tolerances& tol = Tolerances{});

}  // namespace oqb
