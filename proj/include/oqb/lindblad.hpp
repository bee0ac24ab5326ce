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

#include <vector>

#include "oqb/qmat.hpp"

namespace oqb {

/// Markovian open system with one jump operator:
///   drho/dt = -i [H, rho] + c rho c^dag - (1/2){c^dag c, rho}.
struct LindbladModel {
    ComplexMatrix hamiltonian;
    ComplexMatrix jump;

    LindbladModel(ComplexMatrix h, ComplexMatrix c);
};

/// Uniform time grid t_k = t0 + k dt, k = 0..steps.
struct TimeGrid {
    double t0 = 0.0;
    double dt = 1e-3;
    int steps = 0;

    TimeGrid() = default;
    TimeGrid(double start, double step, int n);

    double time(int k) const { return t0 + static_cast<double>(k) * dt; }
    std::vector<double> times() const;
};

/// Right-hand side of the master equation for a (not necessarily valid)
/// Hermitian matrix.
ComplexMatrix lindblad_rhs(const LindbladModel& model, const ComplexMatrix& rho);

/// Fixed-step RK4 integration of the master equation.  Returns the state at
/// every grid point, rho(t0) first.  Throws StepTooLarge if an intermediate
/// state leaves the physical set by more than the repair slack (most
/// negative eigenvalue below -1e-6 or trace off by more than 1e-6).
std::vector<DensityMatrix> evolve_unconditional(const LindbladModel& model,
                                                const DensityMatrix& rho0, const TimeGrid& grid);

enum class SteadyStateMethod {
    Auto,              ///< Bloch linear system for qubits, kernel otherwise.
    BlochLinearSystem, ///< 3x3 affine Bloch solve; qubits only.
    LiouvillianKernel, ///< null space of the vectorized d^2 x d^2 generator.
};

/// Stationary state of the generator.  Throws DegenerateSteadyState when the
/// kernel dimension differs from one (or, on the Bloch path, when the drift
/// matrix is singular).
DensityMatrix steady_state(const LindbladModel& model,
                           SteadyStateMethod method = SteadyStateMethod::Auto,
                           const Tolerances& tol = Tolerances{});

}  // namespace oqb
