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

namespace oqb {

/// Numerical tolerances used by state validation, the eigensolver and the
/// steady-state solver.  All checks in the library read from one record so
/// the thresholds live in a single place.
struct Tolerances {
    /// max |M - M^dag| entry for a matrix to count as Hermitian.
    double hermiticity = 1e-10;
    /// |Tr rho - 1| allowed for a density matrix.
    double unit_trace = 1e-10;
    /// Most negative eigenvalue allowed for a density matrix (roundoff slack).
    double psd_slack = 1e-9;
    /// Hermiticity defect accepted by the eigensolver before it refuses input.
    double eigen_input_hermiticity = 1e-8;
    /// max |A - V diag(w) V^dag| entry demanded after eigendecomposition.
    double eigen_reconstruction = 1e-8;
    /// max |sum_a Pi_a - 1| entry for a POVM to count as complete.
    double povm_completeness = 1e-8;
    /// Outcome probabilities below this are treated as numerically zero.
    double zero_probability = 1e-12;
    /// Relative singular-value threshold separating the Liouvillian kernel
    /// from the rest of its spectrum.
    double kernel_rank = 1e-8;
};

}  // namespace oqb
