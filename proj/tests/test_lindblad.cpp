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

#include "oqb/lindblad.hpp"

using namespace oqb;

namespace {

LindbladModel decay_model(double alpha, double kappa) {
    return LindbladModel(cplx(alpha, 0.0) * pauli::x(),
                         cplx(std::sqrt(kappa), 0.0) * pauli::minus());
}

}  // namespace

TEST_CASE("time grid") {
    const TimeGrid g(0.5, 0.25, 4);
    const std::vector<double> t = g.times();
    REQUIRE(t.size() == 5);
    CHECK(t.front() == 0.5);
    CHECK(t.back() == doctest::Approx(1.5).epsilon(1e-15));
    CHECK(g.time(2) == doctest::Approx(1.0).epsilon(1e-15));

    CHECK_THROWS_AS(TimeGrid(0.0, 0.0, 4), ConfigError);
    CHECK_THROWS_AS(TimeGrid(0.0, -1e-3, 4), ConfigError);
    CHECK_THROWS_AS(TimeGrid(0.0, 1e-3, -1), ConfigError);
}

TEST_CASE("generator: right-hand side is traceless and Hermiticity-preserving") {
    const LindbladModel model = decay_model(0.8, 1.3);
    const DensityMatrix rho = DensityMatrix::from_bloch(0.2, -0.5, 0.4);
    const ComplexMatrix rhs = lindblad_rhs(model, rho.matrix());
    CHECK(std::abs(rhs.trace()) <= 1e-14);
    CHECK(rhs.hermiticity_defect() <= 1e-14);
}

TEST_CASE("pure decay (no drive) matches the exponential closed form") {
    // With drive off: x, y decay at kappa/2; the excited population at kappa.
    const double kappa = 0.7;
    const LindbladModel model = decay_model(0.0, kappa);
    const DensityMatrix rho0 = DensityMatrix::from_bloch(0.6, -0.3, 0.2);
    const TimeGrid grid(0.0, 1e-3, 2000);
    const std::vector<DensityMatrix> path = evolve_unconditional(model, rho0, grid);
    REQUIRE(path.size() == 2001);

    for (int k : {1, 137, 500, 2000}) {
        const double t = grid.time(k);
        const auto r = path[static_cast<std::size_t>(k)].bloch();
        CHECK(r[0] == doctest::Approx(0.6 * std::exp(-0.5 * kappa * t)).epsilon(1e-9));
        CHECK(r[1] == doctest::Approx(-0.3 * std::exp(-0.5 * kappa * t)).epsilon(1e-9));
        CHECK(r[2] ==
              doctest::Approx(-1.0 + 1.2 * std::exp(-kappa * t)).epsilon(1e-9));
    }
}

TEST_CASE("integration conserves trace and physicality along the path") {
    const LindbladModel model = decay_model(1.7, 0.9);
    const TimeGrid grid(0.0, 2e-3, 1500);
    const std::vector<DensityMatrix> path =
        evolve_unconditional(model, DensityMatrix::maximally_mixed(2), grid);
    for (std::size_t k = 0; k < path.size(); k += 100) {
        CHECK(std::abs(path[k].matrix().trace().real() - 1.0) <= 1e-12);
        const auto r = path[k].bloch();
        CHECK(r[0] * r[0] + r[1] * r[1] + r[2] * r[2] <= 1.0 + 1e-12);
    }
}

TEST_CASE("long-time evolution reaches the stationary state") {
    const LindbladModel model = decay_model(1.0, 1.0);
    const TimeGrid grid(0.0, 1e-3, 40000);
    const std::vector<DensityMatrix> path =
        evolve_unconditional(model, DensityMatrix::ground(2), grid);
    const DensityMatrix ss = steady_state(model);
    CHECK(trace_distance(path.back(), ss) <= 1e-7);
}

TEST_CASE("steady state: Bloch solve and Liouvillian kernel agree, residual vanishes") {
    for (double alpha : {0.0, 0.3, 1.0, 2.5}) {
        for (double kappa : {0.5, 1.0, 2.0}) {
            const LindbladModel model = decay_model(alpha, kappa);
            const DensityMatrix a = steady_state(model, SteadyStateMethod::BlochLinearSystem);
            const DensityMatrix b = steady_state(model, SteadyStateMethod::LiouvillianKernel);
            CHECK(trace_distance(a, b) <= 1e-10);
            // Fixed-point residual: the defining property, not a formula.
            CHECK(lindblad_rhs(model, a.matrix()).max_abs() <= 1e-10 * kappa);
            CHECK(lindblad_rhs(model, b.matrix()).max_abs() <= 1e-10 * kappa);
        }
    }
}

TEST_CASE("steady state of a three-level cascade is the bottom rung") {
    // c = |0><1| + |1><2| funnels everything down; unique stationary state.
    ComplexMatrix c = ComplexMatrix::zero(3);
    c(0, 1) = cplx(1.0, 0.0);
    c(1, 2) = cplx(1.0, 0.0);
    const LindbladModel model(ComplexMatrix::zero(3), c);
    const DensityMatrix ss = steady_state(model, SteadyStateMethod::LiouvillianKernel);
    CHECK(std::abs(ss.matrix()(0, 0) - cplx(1.0, 0.0)) <= 1e-10);
    CHECK(lindblad_rhs(model, ss.matrix()).max_abs() <= 1e-10);
}

TEST_CASE("degenerate stationary sets are rejected") {
    // Pure Hamiltonian dynamics: every mixture of sigma_z eigenstates is
    // stationary, so no unique steady state exists.
    const LindbladModel model(pauli::z(), ComplexMatrix::zero(2));
    CHECK_THROWS_AS(steady_state(model, SteadyStateMethod::LiouvillianKernel),
                    DegenerateSteadyState);
    CHECK_THROWS_AS(steady_state(model, SteadyStateMethod::BlochLinearSystem),
                    DegenerateSteadyState);
}

TEST_CASE("model and evolution input validation") {
    CHECK_THROWS_AS(LindbladModel(pauli::x(), ComplexMatrix::identity(3)), DimensionMismatch);
    ComplexMatrix nh = ComplexMatrix::zero(2);
    nh(0, 1) = cplx(1.0, 0.0);
    CHECK_THROWS_AS(LindbladModel(nh, pauli::minus()), NonHermitianInput);

    const LindbladModel model = decay_model(1.0, 1.0);
    CHECK_THROWS_AS(
        evolve_unconditional(model, DensityMatrix::maximally_mixed(3), TimeGrid(0.0, 1e-3, 10)),
        DimensionMismatch);
    // A wildly too-large step leaves the physical set and is reported.
    CHECK_THROWS_AS(
        evolve_unconditional(model, DensityMatrix::ground(2), TimeGrid(0.0, 100.0, 10)),
        StepTooLarge);
    // Bloch solve is qubit-only.
    ComplexMatrix c3 = ComplexMatrix::zero(3);
    c3(0, 1) = cplx(1.0, 0.0);
    c3(1, 2) = cplx(1.0, 0.0);
    CHECK_THROWS_AS(steady_state(LindbladModel(ComplexMatrix::zero(3), c3),
                                 SteadyStateMethod::BlochLinearSystem),
                    DimensionMismatch);
}
