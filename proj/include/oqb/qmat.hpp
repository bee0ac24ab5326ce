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
#include <complex>
#include <initializer_list>
#include <vector>

#include "oqb/errors.hpp"
#include "oqb/tolerances.hpp"

namespace oqb {

using cplx = std::complex<double>;

/// Dense square complex matrix, row-major storage.  Dimensions stay small
/// (operators on a few qubits at most), so everything is plain O(d^3) code
/// without blocking or external dependencies.
class ComplexMatrix {
  public:
    ComplexMatrix() = default;
    explicit ComplexMatrix(int dim);

    static ComplexMatrix identity(int dim);
    static ComplexMatrix zero(int dim);
    /// Build from row initializer lists; all rows must have equal length.
    static ComplexMatrix from_rows(std::initializer_list<std::initializer_list<cplx>> rows);

    int dim() const { return dim_; }
    bool empty() const { return dim_ == 0; }

    cplx& operator()(int i, int j) { return a_[static_cast<std::size_t>(i) * dim_ + j]; }
    const cplx& operator()(int i, int j) const { return a_[static_cast<std::size_t>(i) * dim_ + j]; }

    ComplexMatrix adjoint() const;
    ComplexMatrix transpose() const;
    ComplexMatrix conj() const;
    cplx trace() const;

    double max_abs() const;
    double frobenius_norm() const;
    /// max_ij |M_ij - conj(M_ji)|.
    double hermiticity_defect() const;

    ComplexMatrix& operator+=(const ComplexMatrix& o);
    ComplexMatrix& operator-=(const ComplexMatrix& o);
    ComplexMatrix& operator*=(cplx s);

    friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
    friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
    friend ComplexMatrix operator*(cplx s, ComplexMatrix a) { return a *= s; }
    friend ComplexMatrix operator*(ComplexMatrix a, cplx s) { return a *= s; }
    friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);

  private:
    int dim_ = 0;
    std::vector<cplx> a_;
};

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix anticommutator(const ComplexMatrix& a, const ComplexMatrix& b);

/// Tr[op rho].
cplx expectation(const ComplexMatrix& op, const ComplexMatrix& rho);
/// Tr[op rho] for observables; throws InvariantViolation if the imaginary
/// part exceeds `imag_tol`.
double real_expectation(const ComplexMatrix& op, const ComplexMatrix& rho, double imag_tol = 1e-10);

/// Kronecker product; index convention (i1*dimB + i2, j1*dimB + j2).
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// Trace out the second (ancilla) factor of a dS*dA dimensional operator.
ComplexMatrix partial_trace_ancilla(const ComplexMatrix& m, int dim_sys, int dim_anc);
/// Trace out the first (system) factor.
ComplexMatrix partial_trace_system(const ComplexMatrix& m, int dim_sys, int dim_anc);

/// Eigendecomposition of a Hermitian matrix.  `eigenvalues[k]` pairs with
/// column k of `eigenvectors`; eigenvalues sorted descending.
struct Spectrum {
    std::vector<double> eigenvalues;
    ComplexMatrix eigenvectors;
};

/// Cyclic complex Jacobi eigensolver with an analytic 2x2 fast path.
/// Eigenvalues are returned in descending order; ties keep the order the
/// states had before sorting, so the output is deterministic.
/// Throws NonHermitianInput if the Hermiticity defect exceeds
/// `tol.eigen_input_hermiticity` and NoConvergence after 100 sweeps.
Spectrum hermitian_eigendecompose(const ComplexMatrix& m, const Tolerances& tol = Tolerances{});

/// Density matrix: validated Hermitian, unit-trace, positive-semidefinite
/// wrapper around ComplexMatrix.  Construction checks the invariants against
/// the supplied tolerances and throws InvariantViolation on failure.
class DensityMatrix {
  public:
    explicit DensityMatrix(ComplexMatrix m, const Tolerances& tol = Tolerances{});

    static DensityMatrix pure(const std::vector<cplx>& ket);
    static DensityMatrix ground(int dim);
    static DensityMatrix maximally_mixed(int dim);
    /// Qubit state from Bloch coordinates; requires x^2+y^2+z^2 <= 1.
    static DensityMatrix from_bloch(double x, double y, double z);

    const ComplexMatrix& matrix() const { return m_; }
    int dim() const { return m_.dim(); }

    /// Bloch vector (<sx>, <sy>, <sz>); qubit states only.
    std::array<double, 3> bloch() const;

  private:
    ComplexMatrix m_;
};

/// Tr[rho^2].
double purity(const DensityMatrix& rho);

/// (1/2) ||rho - sigma||_1.
double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma);

/// Pauli operators and qubit basis kets in the convention
/// |0> = ground, |1> = excited, sigma_z = diag(-1, +1), so
/// sigma_minus = |0><1| lowers the excited state into the ground state.
namespace pauli {
ComplexMatrix x();
ComplexMatrix y();
ComplexMatrix z();
ComplexMatrix plus();   // |1><0|
ComplexMatrix minus();  // |0><1|
}  // namespace pauli

}  // namespace oqb
