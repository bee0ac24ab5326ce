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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oqb/ergotropy.hpp"
#include "oqb/rng.hpp"

using namespace oqb;

namespace {

// ---- independent oracles (no shared code with the implementation) --------

// Haar-distributed unitary: Gram-Schmidt on a complex Gaussian matrix.
ComplexMatrix haar_unitary(int dim, CounterRng& rng) {
    ComplexMatrix g(dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) g(i, j) = cplx(rng.next_gaussian(), rng.next_gaussian());
    for (int col = 0; col < dim; ++col) {
        for (int prev = 0; prev < col; ++prev) {
            cplx overlap(0.0, 0.0);
            for (int i = 0; i < dim; ++i) overlap += std::conj(g(i, prev)) * g(i, col);
            for (int i = 0; i < dim; ++i) g(i, col) -= overlap * g(i, prev);
        }
        double norm2 = 0.0;
        for (int i = 0; i < dim; ++i) norm2 += std::norm(g(i, col));
        const double inv = 1.0 / std::sqrt(norm2);
        for (int i = 0; i < dim; ++i) g(i, col) *= inv;
    }
    return g;
}

ComplexMatrix random_density(int dim, CounterRng& rng) {
    ComplexMatrix g(dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) g(i, j) = cplx(rng.next_gaussian(), rng.next_gaussian());
    ComplexMatrix p = g * g.adjoint();
    p *= cplx(1.0 / p.trace().real(), 0.0);
    return p;
}

DensityMatrix random_qubit_state(CounterRng& rng) {
    double nx = rng.next_gaussian(), ny = rng.next_gaussian(), nz = rng.next_gaussian();
    const double norm = std::sqrt(nx * nx + ny * ny + nz * nz);
    const double radius = std::cbrt(rng.next_uniform());
    return DensityMatrix::from_bloch(radius * nx / norm, radius * ny / norm, radius * nz / norm);
}

// Energy extracted by the unitary U: E(rho) - E(U rho U^dag).
double extracted(const DensityMatrix& rho, const EnergySpec& h, const ComplexMatrix& u) {
    const ComplexMatrix rotated = u * rho.matrix() * u.adjoint();
    return real_expectation(h.h0, rho.matrix()) - real_expectation(h.h0, rotated);
}

EnergySpec ladder(int dim) {
    ComplexMatrix h0 = ComplexMatrix::zero(dim);
    for (int k = 0; k < dim; ++k) h0(k, k) = cplx(static_cast<double>(k), 0.0);
    return EnergySpec(h0, 1.0);
}

}  // namespace

TEST_CASE("ergotropy: frozen hand-computed values") {
    const EnergySpec h = EnergySpec::qubit(1.0);
    // Ground state is passive.
    CHECK(ergotropy_spectral(DensityMatrix::ground(2), h).value == doctest::Approx(0.0));
    // Excited state releases the full gap.
    const DensityMatrix excited = DensityMatrix::pure({0.0, 1.0});
    CHECK(ergotropy_spectral(excited, h).value == doctest::Approx(1.0).epsilon(1e-12));
    // Maximally mixed state is passive.
    CHECK(ergotropy_spectral(DensityMatrix::maximally_mixed(2), h).value == doctest::Approx(0.0));
    // Equatorial pure state: E = 1/2, plus 1/2 recoverable from coherence.
    CHECK(ergotropy_spectral(DensityMatrix::from_bloch(1.0, 0.0, 0.0), h).value ==
          doctest::Approx(0.5).epsilon(1e-12));
    // Population-inverted diagonal state: populations (0.3, 0.7) swap to (0.7, 0.3).
    const DensityMatrix inverted(ComplexMatrix::from_rows({{0.3, 0.0}, {0.0, 0.7}}));
    CHECK(ergotropy_spectral(inverted, h).value == doctest::Approx(0.4).epsilon(1e-12));

    // Qutrit ladder H0 = diag(0, 1, 2), populations (0.2, 0.5, 0.3):
    // E = 0.5 + 0.6 = 1.1; passive pairs (0.5, 0.3, 0.2) with (0, 1, 2),
    // E_passive = 0.3 + 0.4 = 0.7; ergotropy = 0.4.
    const DensityMatrix qutrit(
        ComplexMatrix::from_rows({{0.2, 0.0, 0.0}, {0.0, 0.5, 0.0}, {0.0, 0.0, 0.3}}));
    const ErgotropyResult res = ergotropy_spectral(qutrit, ladder(3));
    CHECK(res.value == doctest::Approx(0.4).epsilon(1e-12));
    CHECK(energy(res.passive_state, ladder(3)) == doctest::Approx(0.7).epsilon(1e-12));
}

TEST_CASE("ergotropy: no sampled unitary beats the spectral optimum (d = 2, 3)") {
    CounterRng rng(201, 0);
    for (int dim = 2; dim <= 3; ++dim) {
        const EnergySpec h = dim == 2 ? EnergySpec::qubit(1.0) : ladder(3);
        for (int rep = 0; rep < 10; ++rep) {
            const DensityMatrix rho{random_density(dim, rng)};
            const ErgotropyResult res = ergotropy_spectral(rho, h);
            double best = 0.0;
            for (int trial = 0; trial < 2000; ++trial)
                best = std::max(best, extracted(rho, h, haar_unitary(dim, rng)));
            CHECK(best <= res.value + 1e-10);
            // The returned extraction unitary attains the optimum exactly.
            CHECK(extracted(rho, h, res.extraction_unitary) ==
                  doctest::Approx(res.value).epsilon(1e-10));
        }
    }
}

TEST_CASE("ergotropy: structural properties of the spectral result") {
    CounterRng rng(202, 0);
    for (int rep = 0; rep < 50; ++rep) {
        const int dim = 2 + rep % 3;
        const EnergySpec h = ladder(dim);
        const DensityMatrix rho{random_density(dim, rng)};
        const ErgotropyResult res = ergotropy_spectral(rho, h);

        CHECK(res.value >= 0.0);
        // Ground energy is pinned to zero, so energy bounds ergotropy.
        CHECK(res.value <= energy(rho, h) + 1e-12);
        // Energy balance: E(rho) = ergotropy + E(passive).
        CHECK(energy(rho, h) - res.value ==
              doctest::Approx(energy(res.passive_state, h)).epsilon(1e-10));
        // The passive state has no extractable work left.
        CHECK(ergotropy_spectral(res.passive_state, h).value <= 1e-10);
        // Passive energy is invariant under any unitary reshuffling of rho.
        const ComplexMatrix u = haar_unitary(dim, rng);
        const DensityMatrix rotated{u * rho.matrix() * u.adjoint()};
        CHECK(energy(ergotropy_spectral(rotated, h).passive_state, h) ==
              doctest::Approx(energy(res.passive_state, h)).epsilon(1e-9));
    }
}

TEST_CASE("ergotropy: spectral formula equals qubit closed form") {
    CounterRng rng(203, 0);
    const EnergySpec h = EnergySpec::qubit(0.7);
    double worst = 0.0;
    for (int rep = 0; rep < 500; ++rep) {
        const DensityMatrix rho = random_qubit_state(rng);
        worst = std::max(worst, std::abs(ergotropy_spectral(rho, h).value -
                                         ergotropy_qubit_closed_form(rho, h)));
    }
    // Boundary cases: pure states and the fully mixed state.
    for (const DensityMatrix& rho :
         {DensityMatrix::from_bloch(0.0, 0.0, 1.0), DensityMatrix::from_bloch(0.6, 0.0, -0.8),
          DensityMatrix::maximally_mixed(2)})
        worst = std::max(worst, std::abs(ergotropy_spectral(rho, h).value -
                                         ergotropy_qubit_closed_form(rho, h)));
    CHECK(worst <= 1e-10);
}

TEST_CASE("energy spec validation") {
    CHECK_THROWS_AS(EnergySpec::qubit(-1.0), InvariantViolation);
    CHECK_THROWS_AS(EnergySpec::qubit(0.0), InvariantViolation);
    // Ground energy must sit at zero.
    ComplexMatrix shifted = ComplexMatrix::identity(2);
    shifted(1, 1) = cplx(2.0, 0.0);
    CHECK_THROWS_AS(EnergySpec(shifted, 1.0), InvariantViolation);
    // Dimension mismatch between state and Hamiltonian.
    CHECK_THROWS_AS(ergotropy_spectral(DensityMatrix::maximally_mixed(3), EnergySpec::qubit(1.0)),
                    DimensionMismatch);
    CHECK_THROWS_AS(ergotropy_qubit_closed_form(DensityMatrix::maximally_mixed(3), ladder(3)),
                    DimensionMismatch);
}

TEST_CASE("daemonic ergotropy: product states gain nothing from monitoring") {
    CounterRng rng(204, 0);
    const EnergySpec h = EnergySpec::qubit(1.0);
    for (int rep = 0; rep < 10; ++rep) {
        const DensityMatrix rho_s = random_qubit_state(rng);
        const ComplexMatrix rho_a = random_density(2, rng);
        const DensityMatrix joint{kron(rho_s.matrix(), rho_a)};

        const Spectrum basis = hermitian_eigendecompose(random_density(2, rng));
        std::vector<PovmElement> povm;
        for (int a = 0; a < 2; ++a) {
            ComplexMatrix proj = ComplexMatrix::zero(2);
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j)
                    proj(i, j) = basis.eigenvectors(i, a) * std::conj(basis.eigenvectors(j, a));
            povm.emplace_back(proj);
        }
        const DaemonicResult res = daemonic_ergotropy_bipartite(joint, povm, h, 2, 2);
        CHECK(res.value == doctest::Approx(ergotropy_spectral(rho_s, h).value).epsilon(1e-9));
    }
}

TEST_CASE("daemonic ergotropy: classically correlated state, hand-computed") {
    // rho = 1/2 |e><e| x |0><0| + 1/2 |+x><+x| x |1><1|; measuring the
    // ancilla in its basis reveals which branch occurred.  Expected values:
    //   outcome 0: excited state, ergotropy 1;
    //   outcome 1: +x pure state, ergotropy 1/2;
    //   average 3/4.  The reduced state [[1/4, 1/4], [1/4, 3/4]] has
    //   eigenvalues 1/2 +- 1/(2 sqrt 2), energy 3/4, and ergotropy
    //   3/4 - (1/2 - 1/(2 sqrt 2)) ~ 0.6036, strictly below the average.
    const EnergySpec h = EnergySpec::qubit(1.0);
    const DensityMatrix branch0 = DensityMatrix::pure({0.0, 1.0});
    const DensityMatrix branch1 = DensityMatrix::from_bloch(1.0, 0.0, 0.0);
    ComplexMatrix joint = ComplexMatrix::zero(4);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            joint(i * 2 + 0, j * 2 + 0) = 0.5 * branch0.matrix()(i, j);
            joint(i * 2 + 1, j * 2 + 1) = 0.5 * branch1.matrix()(i, j);
        }
    std::vector<PovmElement> povm;
    povm.emplace_back(ComplexMatrix::from_rows({{1.0, 0.0}, {0.0, 0.0}}), "a0");
    povm.emplace_back(ComplexMatrix::from_rows({{0.0, 0.0}, {0.0, 1.0}}), "a1");

    const DaemonicResult res = daemonic_ergotropy_bipartite(DensityMatrix{joint}, povm, h, 2, 2);
    CHECK(res.value == doctest::Approx(0.75).epsilon(1e-12));
    REQUIRE(res.outcomes.size() == 2);
    CHECK(res.outcomes[0].probability == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(res.outcomes[0].conditional_ergotropy == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(res.outcomes[1].conditional_ergotropy == doctest::Approx(0.5).epsilon(1e-12));

    // Ignoring the ancilla: the reduced state has strictly less ergotropy,
    // so the measurement record carries extractable work.
    const DensityMatrix reduced{partial_trace_ancilla(joint, 2, 2)};
    const double expected_reduced = 0.75 - (0.5 - 0.5 / std::sqrt(2.0));
    CHECK(ergotropy_spectral(reduced, h).value ==
          doctest::Approx(expected_reduced).epsilon(1e-12));
    CHECK(ergotropy_spectral(reduced, h).value < res.value - 0.1);
}

TEST_CASE("daemonic ergotropy: bounds against the reduced state") {
    CounterRng rng(205, 0);
    const EnergySpec h = EnergySpec::qubit(1.0);
    for (int rep = 0; rep < 20; ++rep) {
        const int da = 2 + rep % 2;
        const DensityMatrix joint{random_density(2 * da, rng)};
        const Spectrum basis = hermitian_eigendecompose(random_density(da, rng));
        std::vector<PovmElement> povm;
        for (int a = 0; a < da; ++a) {
            ComplexMatrix proj = ComplexMatrix::zero(da);
            for (int i = 0; i < da; ++i)
                for (int j = 0; j < da; ++j)
                    proj(i, j) = basis.eigenvectors(i, a) * std::conj(basis.eigenvectors(j, a));
            povm.emplace_back(proj);
        }
        const DaemonicResult res = daemonic_ergotropy_bipartite(joint, povm, h, 2, da);
        const DensityMatrix reduced{partial_trace_ancilla(joint.matrix(), 2, da)};
        CHECK(res.value >= ergotropy_spectral(reduced, h).value - 1e-9);
        CHECK(res.value <= energy(reduced, h) + 1e-9);
        // Probabilities are a distribution.
        double total = 0.0;
        for (const DaemonicOutcome& o : res.outcomes) {
            CHECK(o.probability >= -1e-12);
            total += o.probability;
        }
        CHECK(total == doctest::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("daemonic ergotropy: pure state + rank-one POVM recovers the mean energy") {
    CounterRng rng(206, 0);
    const EnergySpec h = EnergySpec::qubit(1.0);
    for (int rep = 0; rep < 10; ++rep) {
        const int da = 2 + rep % 2;
        std::vector<cplx> ket(static_cast<std::size_t>(2 * da));
        double norm2 = 0.0;
        for (cplx& a : ket) {
            a = cplx(rng.next_gaussian(), rng.next_gaussian());
            norm2 += std::norm(a);
        }
        for (cplx& a : ket) a /= std::sqrt(norm2);
        const DensityMatrix joint = DensityMatrix::pure(ket);

        const Spectrum basis = hermitian_eigendecompose(random_density(da, rng));
        std::vector<PovmElement> povm;
        for (int a = 0; a < da; ++a) {
            ComplexMatrix proj = ComplexMatrix::zero(da);
            for (int i = 0; i < da; ++i)
                for (int j = 0; j < da; ++j)
                    proj(i, j) = basis.eigenvectors(i, a) * std::conj(basis.eigenvectors(j, a));
            povm.emplace_back(proj);
        }
        const DaemonicResult res = daemonic_ergotropy_bipartite(joint, povm, h, 2, da);
        const DensityMatrix reduced{partial_trace_ancilla(joint.matrix(), 2, da)};
        CHECK(res.value == doctest::Approx(energy(reduced, h)).epsilon(1e-8));
    }
}

TEST_CASE("daemonic ergotropy: zero-probability outcomes are flagged, not divided by") {
    const EnergySpec h = EnergySpec::qubit(1.0);
    const DensityMatrix rho_s = DensityMatrix::from_bloch(0.0, 0.3, 0.2);
    ComplexMatrix anc = ComplexMatrix::zero(2);
    anc(0, 0) = cplx(1.0, 0.0);  // ancilla pinned to |0>
    const DensityMatrix joint{kron(rho_s.matrix(), anc)};
    std::vector<PovmElement> povm;
    povm.emplace_back(ComplexMatrix::from_rows({{1.0, 0.0}, {0.0, 0.0}}));
    povm.emplace_back(ComplexMatrix::from_rows({{0.0, 0.0}, {0.0, 1.0}}));

    const DaemonicResult res = daemonic_ergotropy_bipartite(joint, povm, h, 2, 2);
    REQUIRE(res.outcomes.size() == 2);
    CHECK_FALSE(res.outcomes[0].negligible);
    CHECK(res.outcomes[1].negligible);
    CHECK(res.outcomes[1].probability <= 1e-12);
    CHECK(res.value == doctest::Approx(ergotropy_spectral(rho_s, h).value).epsilon(1e-10));
}

TEST_CASE("daemonic ergotropy: POVM validation") {
    const EnergySpec h = EnergySpec::qubit(1.0);
    const DensityMatrix joint = DensityMatrix::maximally_mixed(4);

    // Effects that do not sum to the identity.
    std::vector<PovmElement> incomplete;
    incomplete.emplace_back(ComplexMatrix::from_rows({{1.0, 0.0}, {0.0, 0.0}}));
    CHECK_THROWS_AS(daemonic_ergotropy_bipartite(joint, incomplete, h, 2, 2), IncompletePovm);
    CHECK_THROWS_AS(daemonic_ergotropy_bipartite(joint, {}, h, 2, 2), IncompletePovm);

    // Effects must be PSD and Hermitian.
    CHECK_THROWS_AS(PovmElement(ComplexMatrix::from_rows({{1.0, 0.0}, {0.0, -0.2}})),
                    InvariantViolation);
    ComplexMatrix nh = ComplexMatrix::zero(2);
    nh(0, 1) = cplx(1.0, 0.0);
    CHECK_THROWS_AS(PovmElement{nh}, InvariantViolation);

    // Non-projective but valid POVM still works (smeared two-outcome).
    std::vector<PovmElement> smeared;
    smeared.emplace_back(ComplexMatrix::from_rows({{0.7, 0.0}, {0.0, 0.4}}));
    smeared.emplace_back(ComplexMatrix::from_rows({{0.3, 0.0}, {0.0, 0.6}}));
    CHECK_NOTHROW(daemonic_ergotropy_bipartite(joint, smeared, h, 2, 2));

    // Wrong bipartition.
    CHECK_THROWS_AS(daemonic_ergotropy_bipartite(joint, smeared, h, 3, 2), DimensionMismatch);
}
