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

#include "oqb/ergotropy.hpp"
#include "oqb/lindblad.hpp"

namespace oqb {

/// Driven-dissipative qubit battery in the frame rotating at the drive
/// frequency: resonant Rabi drive H = alpha sigma_x, photon loss at rate
/// kappa, and energy bookkeeping against H0 = (omega0/2)(sigma_z + 1).
struct BatteryModel {
    double omega0 = 1.0;
    double alpha = 1.0;
    double kappa = 1.0;

    BatteryModel() = default;
    BatteryModel(double w0, double a, double k);

    /// Dynamics generator: H = alpha sigma_x, c = sqrt(kappa) sigma_minus.
    LindbladModel to_lindblad() const;

    /// Battery Hamiltonian used for energy and ergotropy.
    EnergySpec energy_spec() const { return EnergySpec::qubit(omega0); }

    /// Bloch vector of the unconditional steady state:
    ///   x = 0,  y = 4 alpha kappa / (8 alpha^2 + kappa^2),
    ///   z = -kappa^2 / (8 alpha^2 + kappa^2).
    std::array<double, 3> steady_bloch() const;

    /// Steady-state mean energy omega0 * 4 alpha^2 / (8 alpha^2 + kappa^2).
    double steady_energy_analytic() const;

    /// Steady-state ergotropy of the unconditional state,
    ///   (omega0 kappa / 2) (sqrt(16 alpha^2 + kappa^2) - kappa)
    ///       / (8 alpha^2 + kappa^2).
    double steady_ergotropy_analytic() const;

    /// Drive-to-loss ratio maximizing the steady-state ergotropy,
    /// alpha/kappa = sqrt((1 + sqrt 2) / 8); the peak value is
    /// omega0 (sqrt 2 - 1) / 2.
    static double peak_drive_ratio();
    double peak_steady_ergotropy() const;

    /// Unconditional Bloch drift dr/dt = M r + b in closed form; reference
    /// for the trajectory kernels and the steady-state solvers.
    void bloch_rhs(const double r[3], double out[3]) const;
};

}  // namespace oqb
