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

#include "oqb/qmat.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace oqb {

namespace {

void require_same_dim(const ComplexMatrix& a, const ComplexMatrix& b, const char* what) {
    if (a.dim() != b.dim())
        throw DimensionMismatch(std::string(what) + ": dimensions " + std::to_string(a.dim()) +
                                " and " + std::to_string(b.dim()) + " differ");
}

}  // namespace

ComplexMatrix::ComplexMatrix(int dim) : dim_(dim), a_(static_cast<std::size_t>(dim) * dim) {
    if (dim < 0) throw DimensionMismatch("ComplexMatrix: negative dimension");
}

ComplexMatrix ComplexMatrix::identity(int dim) {
    ComplexMatrix m(dim);
    for (int i = 0; i < dim; ++i) m(i, i) = 1.0;
    return m;
}

ComplexMatrix ComplexMatrix::zero(int dim) { return ComplexMatrix(dim); }

ComplexMatrix ComplexMatrix::from_rows(std::initializer_list<std::initializer_list<cplx>> rows) {
    const int d = static_cast<int>(rows.size());
    ComplexMatrix m(d);
    int i = 0;
    for (const auto& row : rows) {
        if (static_cast<int>(row.size()) != d)
            throw DimensionMismatch("from_rows: ragged initializer");
        int j = 0;
        for (const cplx& v : row) m(i, j++) = v;
        ++i;
    }
    return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
    ComplexMatrix m(dim_);
    for (int i = 0; i < dim_; ++i)
        for (int j = 0; j < dim_; ++j) m(j, i) = std::conj((*this)(i, j));
    return m;
}

ComplexMatrix ComplexMatrix::transpose() const {
    ComplexMatrix m(dim_);
    for (int i = 0; i < dim_; ++i)
        for (int j = 0; j < dim_; ++j) m(j, i) = (*this)(i, j);
    return m;
}

ComplexMatrix ComplexMatrix::conj() const {
    ComplexMatrix m(dim_);
    for (int i = 0; i < dim_; ++i)
        for (int j = 0; j < dim_; ++j) m(i, j) = std::conj((*this)(i, j));
    return m;
}

cplx ComplexMatrix::trace() const {
    cplx t = 0.0;
    for (int i = 0; i < dim_; ++i) t += (*this)(i, i);
    return t;
}

double ComplexMatrix::max_abs() const {
    double m = 0.0;
    for (const cplx& v : a_) m = std::max(m, std::abs(v));
    return m;
}

double ComplexMatrix::frobenius_norm() const {
    double s = 0.0;
    for (const cplx& v : a_) s += std::norm(v);
    return std::sqrt(s);
}

double ComplexMatrix::hermiticity_defect() const {
    double m = 0.0;
    for (int i = 0; i < dim_; ++i)
        for (int j = i; j < dim_; ++j)
            m = std::max(m, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
    return m;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& o) {
    require_same_dim(*this, o, "operator+=");
    for (std::size_t k = 0; k < a_.size(); ++k) a_[k] += o.a_[k];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& o) {
    require_same_dim(*this, o, "operator-=");
    for (std::size_t k = 0; k < a_.size(); ++k) a_[k] -= o.a_[k];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(cplx s) {
    for (cplx& v : a_) v *= s;
    return *this;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    require_same_dim(a, b, "operator*");
    const int d = a.dim();
    ComplexMatrix c(d);
    for (int i = 0; i < d; ++i) {
        for (int k = 0; k < d; ++k) {
            const cplx aik = a(i, k);
            if (aik == cplx(0.0)) continue;
            for (int j = 0; j < d; ++j) c(i, j) += aik * b(k, j);
        }
    }
    return c;
}

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) {
    return a * b - b * a;
}

ComplexMatrix anticommutator(const ComplexMatrix& a, const ComplexMatrix& b) {
    return a * b + b * a;
}

cplx expectation(const ComplexMatrix& op, const ComplexMatrix& rho) {
    require_same_dim(op, rho, "expectation");
    const int d = op.dim();
    cplx t = 0.0;
    for (int i = 0; i < d; ++i)
        for (int k = 0; k < d; ++k) t += op(i, k) * rho(k, i);
    return t;
}

double real_expectation(const ComplexMatrix& op, const ComplexMatrix& rho, double imag_tol) {
    const cplx v = expectation(op, rho);
    if (std::abs(v.imag()) > imag_tol)
        throw InvariantViolation("real_expectation: imaginary part " + std::to_string(v.imag()));
    return v.real();
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    const int da = a.dim(), db = b.dim();
    ComplexMatrix m(da * db);
    for (int i1 = 0; i1 < da; ++i1)
        for (int j1 = 0; j1 < da; ++j1) {
            const cplx v = a(i1, j1);
            if (v == cplx(0.0)) continue;
            for (int i2 = 0; i2 < db; ++i2)
                for (int j2 = 0; j2 < db; ++j2)
                    m(i1 * db + i2, j1 * db + j2) = v * b(i2, j2);
        }
    return m;
}

ComplexMatrix partial_trace_ancilla(const ComplexMatrix& m, int dim_sys, int dim_anc) {
    if (m.dim() != dim_sys * dim_anc)
        throw DimensionMismatch("partial_trace_ancilla: dimension is not dim_sys*dim_anc");
    ComplexMatrix r(dim_sys);
    for (int i = 0; i < dim_sys; ++i)
        for (int j = 0; j < dim_sys; ++j) {
            cplx s = 0.0;
            for (int k = 0; k < dim_anc; ++k) s += m(i * dim_anc + k, j * dim_anc + k);
            r(i, j) = s;
        }
    return r;
}

ComplexMatrix partial_trace_system(const ComplexMatrix& m, int dim_sys, int dim_anc) {
    if (m.dim() != dim_sys * dim_anc)
        throw DimensionMismatch("partial_trace_system: dimension is not dim_sys*dim_anc");
    ComplexMatrix r(dim_anc);
    for (int i = 0; i < dim_anc; ++i)
        for (int j = 0; j < dim_anc; ++j) {
            cplx s = 0.0;
            for (int k = 0; k < dim_sys; ++k) s += m(k * dim_anc + i, k * dim_anc + j);
            r(i, j) = s;
        }
    return r;
}

namespace {

/// Sort eigenpairs descending; equal values keep their pre-sort column order.
Spectrum sorted_spectrum(std::vector<double> w, ComplexMatrix v) {
    const int d = static_cast<int>(w.size());
    std::vector<int> idx(w.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return w[a] > w[b]; });
    Spectrum s;
    s.eigenvalues.resize(w.size());
    s.eigenvectors = ComplexMatrix(d);
    for (int k = 0; k < d; ++k) {
        s.eigenvalues[k] = w[idx[k]];
        for (int i = 0; i < d; ++i) s.eigenvectors(i, k) = v(i, idx[k]);
    }
    return s;
}

Spectrum eigen_2x2(const ComplexMatrix& m) {
    const double a = m(0, 0).real();
    const double b = m(1, 1).real();
    const cplx c = 0.5 * (m(0, 1) + std::conj(m(1, 0)));
    const double mean = 0.5 * (a + b);
    const double delta = 0.5 * (a - b);
    const double r = std::hypot(delta, std::abs(c));

    if (std::abs(c) == 0.0) {
        // Diagonal input: eigenvectors are the basis kets; sorted_spectrum
        // orders them and breaks ties by index.
        return sorted_spectrum({a, b}, ComplexMatrix::identity(2));
    }

    // Eigenvector of the larger eigenvalue mean + r, using whichever
    // null-space formulation has the larger norm.
    cplx v0, v1;
    if (delta >= 0.0) {
        v0 = cplx(delta + r, 0.0);
        v1 = std::conj(c);
    } else {
        v0 = c;
        v1 = cplx(r - delta, 0.0);
    }
    const double n = std::sqrt(std::norm(v0) + std::norm(v1));
    v0 /= n;
    v1 /= n;
    ComplexMatrix v(2);
    v(0, 0) = v0;
    v(1, 0) = v1;
    v(0, 1) = -std::conj(v1);
    v(1, 1) = std::conj(v0);
    return sorted_spectrum({mean + r, mean - r}, std::move(v));
}

}  // namespace

Spectrum hermitian_eigendecompose(const ComplexMatrix& m, const Tolerances& tol) {
    const int d = m.dim();
    if (d == 0) throw DimensionMismatch("hermitian_eigendecompose: empty matrix");
    if (m.hermiticity_defect() > tol.eigen_input_hermiticity)
        throw NonHermitianInput("hermitian_eigendecompose: Hermiticity defect " +
                                std::to_string(m.hermiticity_defect()));

    // Work on the Hermitized matrix so roundoff in the input cannot bias
    // the rotations.
    ComplexMatrix a(d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) a(i, j) = 0.5 * (m(i, j) + std::conj(m(j, i)));

    if (d == 1) {
        Spectrum s;
        s.eigenvalues = {a(0, 0).real()};
        s.eigenvectors = ComplexMatrix::identity(1);
        return s;
    }
    if (d == 2) return eigen_2x2(a);

    ComplexMatrix v = ComplexMatrix::identity(d);
    const double fro = std::max(1.0, a.frobenius_norm());
    const double off_tol = 1e-14 * fro;

    constexpr int kMaxSweeps = 100;
    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < d; ++p)
            for (int q = p + 1; q < d; ++q) off += std::norm(a(p, q));
        off = std::sqrt(2.0 * off);
        if (off <= off_tol) {
            std::vector<double> w(d);
            for (int i = 0; i < d; ++i) w[i] = a(i, i).real();
            return sorted_spectrum(std::move(w), std::move(v));
        }

        for (int p = 0; p < d; ++p) {
            for (int q = p + 1; q < d; ++q) {
                const cplx apq = a(p, q);
                const double r = std::abs(apq);
                if (r <= 1e-300) continue;
                const cplx phase = apq / r;
                // Real Jacobi angle for [[app, r], [r, aqq]].
                const double theta = (a(q, q).real() - a(p, p).real()) / (2.0 * r);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double cth = 1.0 / std::sqrt(t * t + 1.0);
                const double sth = t * cth;
                const cplx sp = sth * phase;         // G(p,q) entry
                const cplx spc = sth * std::conj(phase);

                // A <- G^dag A G with G = I except G(p,p)=c, G(p,q)=s*phase,
                // G(q,p)=-s*conj(phase), G(q,q)=c.
                for (int k = 0; k < d; ++k) {
                    const cplx akp = a(k, p), akq = a(k, q);
                    a(k, p) = cth * akp - spc * akq;
                    a(k, q) = sp * akp + cth * akq;
                }
                for (int k = 0; k < d; ++k) {
                    const cplx apk = a(p, k), aqk = a(q, k);
                    a(p, k) = cth * apk - sp * aqk;
                    a(q, k) = spc * apk + cth * aqk;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                for (int k = 0; k < d; ++k) {
                    const cplx vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = cth * vkp - spc * vkq;
                    v(k, q) = sp * vkp + cth * vkq;
                }
            }
        }
    }
    throw NoConvergence("hermitian_eigendecompose: no convergence in 100 sweeps");
}

DensityMatrix::DensityMatrix(ComplexMatrix m, const Tolerances& tol) : m_(std::move(m)) {
    if (m_.dim() == 0) throw DimensionMismatch("DensityMatrix: empty matrix");
    if (m_.hermiticity_defect() > tol.hermiticity)
        throw InvariantViolation("DensityMatrix: Hermiticity defect " +
                                 std::to_string(m_.hermiticity_defect()));
    const cplx tr = m_.trace();
    if (std::abs(tr - cplx(1.0)) > tol.unit_trace)
        throw InvariantViolation("DensityMatrix: trace deviates from 1 by " +
                                 std::to_string(std::abs(tr - cplx(1.0))));
    const Spectrum s = hermitian_eigendecompose(m_, tol);
    if (s.eigenvalues.back() < -tol.psd_slack)
        throw InvariantViolation("DensityMatrix: negative eigenvalue " +
                                 std::to_string(s.eigenvalues.back()));
}

DensityMatrix DensityMatrix::pure(const std::vector<cplx>& ket) {
    const int d = static_cast<int>(ket.size());
    if (d == 0) throw DimensionMismatch("DensityMatrix::pure: empty ket");
    double n2 = 0.0;
    for (const cplx& c : ket) n2 += std::norm(c);
    if (n2 <= 0.0) throw InvariantViolation("DensityMatrix::pure: zero ket");
    ComplexMatrix m(d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) m(i, j) = ket[i] * std::conj(ket[j]) / n2;
    return DensityMatrix(std::move(m));
}

DensityMatrix DensityMatrix::ground(int dim) {
    ComplexMatrix m(dim);
    m(0, 0) = 1.0;
    return DensityMatrix(std::move(m));
}

DensityMatrix DensityMatrix::maximally_mixed(int dim) {
    ComplexMatrix m(dim);
    for (int i = 0; i < dim; ++i) m(i, i) = 1.0 / dim;
    return DensityMatrix(std::move(m));
}

DensityMatrix DensityMatrix::from_bloch(double x, double y, double z) {
    const double r2 = x * x + y * y + z * z;
    if (r2 > 1.0 + 1e-12)
        throw InvariantViolation("from_bloch: |r| > 1");
    ComplexMatrix m(2);
    m(0, 0) = 0.5 * (1.0 - z);
    m(1, 1) = 0.5 * (1.0 + z);
    m(0, 1) = cplx(0.5 * x, 0.5 * y);
    m(1, 0) = cplx(0.5 * x, -0.5 * y);
    return DensityMatrix(std::move(m));
}

std::array<double, 3> DensityMatrix::bloch() const {
    if (dim() != 2) throw DimensionMismatch("bloch: qubit states only");
    return {2.0 * m_(0, 1).real(), 2.0 * m_(0, 1).imag(),
            m_(1, 1).real() - m_(0, 0).real()};
}

double purity(const DensityMatrix& rho) {
    const ComplexMatrix& m = rho.matrix();
    double s = 0.0;
    for (int i = 0; i < m.dim(); ++i)
        for (int j = 0; j < m.dim(); ++j) s += (m(i, j) * m(j, i)).real();
    return s;
}

double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma) {
    ComplexMatrix d = rho.matrix();
    d -= sigma.matrix();
    const Spectrum s = hermitian_eigendecompose(d);
    double t = 0.0;
    for (double w : s.eigenvalues) t += std::abs(w);
    return 0.5 * t;
}

namespace pauli {

// Basis order (|0> = ground, |1> = excited); sigma_z = diag(-1, +1).
ComplexMatrix x() { return ComplexMatrix::from_rows({{0.0, 1.0}, {1.0, 0.0}}); }
ComplexMatrix y() {
    return ComplexMatrix::from_rows({{0.0, cplx(0.0, 1.0)}, {cplx(0.0, -1.0), 0.0}});
}
ComplexMatrix z() { return ComplexMatrix::from_rows({{-1.0, 0.0}, {0.0, 1.0}}); }
ComplexMatrix plus() { return ComplexMatrix::from_rows({{0.0, 0.0}, {1.0, 0.0}}); }
ComplexMatrix minus() { return ComplexMatrix::from_rows({{0.0, 1.0}, {0.0, 0.0}}); }

}  // namespace pauli

}  // namespace oqb
