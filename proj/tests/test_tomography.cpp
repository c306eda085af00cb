// Copyright 2026 The snapopt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <gtest/gtest.h>

#include <sstream>

#include <unsupported/Eigen/MatrixFunctions>

#include "snapopt/tomography.hpp"

using namespace snapopt;

namespace {

CMatrix displacement_by_expm(Complex eps, int dim) {
    CMatrix a = CMatrix::Zero(dim, dim);
    for (int n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
    const CMatrix gen = eps * a.adjoint() - std::conj(eps) * a;
    return gen.exp();
}

QuantumState snap_output(const HilbertLayout &layout, const std::vector<double> &c, const std::vector<double> &phase) {
    CVector v = CVector::Zero(layout.dim());
    for (std::size_t n = 0; n < c.size(); ++n) v(layout.index(Level::g, static_cast<int>(n))) = std::polar(c[n], phase[n]);
    return QuantumState(layout, v);
}

double first_order_gap(double eps) {
    const std::vector<double> c{0.5, 0.7, std::sqrt(1.0 - 0.74)}, theta{0.0, 0.4, -0.3};
    const HilbertLayout layout(2, 14, 3);
    const PopulationTable exact = interference_populations(snap_output(layout, c, theta), eps);
    const PopulationTable approx = interference_first_order(c, theta, eps);
    double gap = 0.0;
    for (int n = 0; n < 3; ++n) gap += std::abs(exact.at(Level::g, n) - approx.at(Level::g, n));
    return gap;
}

}  // namespace

TEST(Displacement, LowOrderEntries) {
    const double e = 0.3, g = std::exp(-e * e / 2);
    EXPECT_NEAR(displacement_element(e, 0, 0).real(), g, 1e-15);
    EXPECT_NEAR(displacement_element(e, 1, 0).real(), e * g, 1e-15);
    EXPECT_NEAR(displacement_element(e, 1, 1).real(), (1 - e * e) * g, 1e-15);
    EXPECT_NEAR(displacement_element(e, 0, 1).real(), -e * g, 1e-15);
    const DisplacementMatrix zero = displacement_matrix(0.0, 6);
    EXPECT_LT((zero.entries - CMatrix::Identity(6, 6)).norm(), 1e-15);
    EXPECT_THROW(displacement_matrix(0.1, 1), DomainError);
}

TEST(Displacement, MatchesMatrixExponential) {
    for (Complex eps : {Complex(0.1), Complex(0.2, 0.1), Complex(-0.7, 0.4)}) {
        const CMatrix ref = displacement_by_expm(eps, 80);
        const DisplacementMatrix d = displacement_matrix(eps, 20);
        EXPECT_LT((d.entries - ref.topLeftCorner(20, 20)).cwiseAbs().maxCoeff(), 1e-8) << eps;
    }
}

TEST(Displacement, ColumnNorms) {
    const DisplacementMatrix d = displacement_matrix(0.1, 12);
    for (int n = 0; n <= 8; ++n) EXPECT_GE(d.entries.col(n).norm(), 1.0 - 10 * 0.01) << n;
    // Leakage past the truncation falls off as eps^(2k) for a column k rows from the edge.
    for (int n = 0; n <= 6; ++n) EXPECT_NEAR(d.entries.col(n).norm(), 1.0, 1e-8) << n;
}

TEST(Interference, ZeroDisplacementIsPopulations) {
    const HilbertLayout layout(2, 8, 3);
    const QuantumState s = snap_output(layout, {0.6, 0.0, 0.8}, {0.0, 0.0, 1.0});
    const PopulationTable a = interference_populations(s, 0.0), b = populations(s);
    for (std::size_t i = 0; i < a.values.size(); ++i) EXPECT_NEAR(a.values[i], b.values[i], 1e-15);
    const PopulationTable r = interference_populations(DensityMatrix::pure(s), 0.0);
    for (std::size_t i = 0; i < a.values.size(); ++i) EXPECT_NEAR(r.values[i], b.values[i], 1e-15);
}

TEST(Interference, PureAndMixedFormsAgree) {
    const HilbertLayout layout(2, 10, 3);
    const QuantumState s = snap_output(layout, {0.6, 0.48, 0.64}, {0.0, 0.9, -1.4});
    const PopulationTable a = interference_populations(s, 0.1);
    const PopulationTable b = interference_populations(DensityMatrix::pure(s), 0.1);
    for (std::size_t i = 0; i < a.values.size(); ++i) EXPECT_NEAR(a.values[i], b.values[i], 1e-14);
}

TEST(Interference, WorkedValue) {
    const double h = 1.0 / std::sqrt(2.0);
    const PopulationTable first = interference_first_order(std::vector<double>{h, h}, std::vector<double>{0.0, 0.0}, 0.1);
    EXPECT_NEAR(first.at(Level::g, 0), 0.4, 1e-15);
    const PopulationTable exact = interference_populations(snap_output(HilbertLayout(2, 10, 2), {h, h}, {0.0, 0.0}), 0.1);
    EXPECT_NEAR(exact.at(Level::g, 0), 0.4, 0.01);
    const PopulationTable none = interference_first_order(std::vector<double>{h, h}, std::vector<double>{0.0, 0.0}, 0.0);
    EXPECT_NEAR(none.at(Level::g, 1), 0.5, 1e-15);
}

TEST(Interference, QuadratureCorrectionsVanish) {
    const std::vector<double> c{0.5, 0.5, std::sqrt(0.5)}, theta{0.0, kPi / 2, kPi};
    const PopulationTable t = interference_first_order(c, theta, 0.1);
    for (int n = 0; n < 3; ++n) EXPECT_NEAR(t.at(Level::g, n), c[n] * c[n], 1e-15);
}

TEST(Interference, SecondOrderRemainder) {
    const double g1 = first_order_gap(0.02), g2 = first_order_gap(0.05), g3 = first_order_gap(0.1);
    const double slope = (std::log(g3) - std::log(g1)) / (std::log(0.1) - std::log(0.02));
    EXPECT_NEAR(slope, 2.0, 0.1);
    EXPECT_NEAR((std::log(g2) - std::log(g1)) / (std::log(0.05) - std::log(0.02)), 2.0, 0.1);
}

TEST(PhaseSolver, ZeroCase) {
    const HilbertLayout layout(2, 10, 3);
    const std::vector<double> c{0.5, 0.6, std::sqrt(0.39)}, theta{0.0, 1.2, -0.8};
    const QuantumState s = snap_output(layout, c, theta);
    const PhaseErrorEstimate est = solve_phase_errors(populations(s), interference_populations(s, 0.1), theta, 0.1);
    for (double d : est.dtheta) EXPECT_NEAR(d, 0.0, 1e-8);
    EXPECT_FALSE(est.ill_conditioned);
}

TEST(PhaseSolver, RoundTrip) {
    const HilbertLayout layout(2, 10, 3);
    const std::vector<double> c{0.5, 0.6, std::sqrt(0.39)}, theta{0.0, 1.2, -0.8}, truth{0.0, 0.15, -0.1};
    std::vector<double> actual(3);
    for (int n = 0; n < 3; ++n) actual[n] = theta[n] + truth[n];
    const QuantumState s = snap_output(layout, c, actual);
    const PhaseErrorEstimate est = solve_phase_errors(populations(s), interference_populations(s, 0.1), theta, 0.1);
    ASSERT_EQ(est.dtheta.size(), 3u);
    EXPECT_EQ(est.dtheta[0], 0.0);
    for (int n = 1; n < 3; ++n) EXPECT_NEAR(est.dtheta[n], truth[n], 1e-3);
    EXPECT_LT(est.residual_norm, 1e-8);
}

TEST(PhaseSolver, Contracts) {
    const PopulationTable short_table(1, 2);
    const std::vector<double> theta{0.0, 0.0, 0.0};
    EXPECT_THROW(solve_phase_errors(short_table, short_table, theta, 0.1), ContractError);
    const PhaseErrorEstimate one = solve_phase_errors(PopulationTable(1, 3), PopulationTable(1, 3), std::vector<double>{0.3}, 0.1);
    EXPECT_EQ(one.dtheta.size(), 1u);
}

TEST(Wigner, KnownStates) {
    const std::vector<Complex> origin{Complex(0.0)};
    CMatrix vac = CMatrix::Zero(6, 6);
    vac(0, 0) = 1.0;
    EXPECT_NEAR(wigner(vac, origin)[0], 2.0 / kPi, 1e-12);
    CMatrix one = CMatrix::Zero(6, 6);
    one(1, 1) = 1.0;
    EXPECT_NEAR(wigner(one, origin)[0], -2.0 / kPi, 1e-12);
}

TEST(Wigner, CoherentState) {
    const int N = 30;
    CVector v(N);
    double fact = 1.0;
    for (int n = 0; n < N; ++n) {
        if (n > 0) fact *= n;
        v(n) = std::exp(-0.5) / std::sqrt(fact);
    }
    const CMatrix rho = v * v.adjoint();
    const std::vector<Complex> pts{Complex(1.0), Complex(0.0), Complex(1.3, -0.4), Complex(-0.5, 0.8)};
    const std::vector<double> w = wigner(rho, pts);
    for (std::size_t i = 0; i < pts.size(); ++i) {
        EXPECT_NEAR(w[i], 2.0 / kPi * std::exp(-2.0 * std::norm(pts[i] - 1.0)), 1e-6);
    }
}

TEST(Wigner, GridAndCavityTrace) {
    const std::vector<Complex> g = alpha_grid(1.0, 0.5);
    EXPECT_EQ(g.size(), 25u);
    EXPECT_EQ(g.front(), Complex(-1.0, -1.0));
    EXPECT_THROW(alpha_grid(0.0, 0.1), ConfigError);
    const HilbertLayout layout(2, 4, 2);
    CVector v = CVector::Zero(8);
    v(1) = 0.6;
    v(4 + 2) = 0.8;
    const CMatrix c = cavity_state(DensityMatrix::pure(QuantumState(layout, v)));
    EXPECT_NEAR(c(1, 1).real(), 0.36, 1e-15);
    EXPECT_NEAR(c(2, 2).real(), 0.64, 1e-15);
    EXPECT_EQ(c(1, 2), Complex(0.0));
}

TEST(PopulationCsv, RoundTrip) {
    PopulationTable t(2, 3);
    t.values = {0.1, 0.2, 0.3, 0.05, 0.15, 0.2};
    std::stringstream ss;
    write_population_csv(ss, t);
    const PopulationTable back = read_population_csv(ss);
    EXPECT_EQ(back.levels, 2);
    EXPECT_EQ(back.fock, 3);
    EXPECT_EQ(back.values, t.values);
    EXPECT_EQ(back.provenance, "ingested");
}

TEST(PopulationCsv, Malformed) {
    std::stringstream header("lvl,n,p\ng,0,1\n");
    EXPECT_THROW(read_population_csv(header), ConfigError);
    std::stringstream level("level,n,probability\nq,0,1\n");
    EXPECT_THROW(read_population_csv(level), ConfigError);
    std::stringstream number("level,n,probability\ng,x,1\n");
    EXPECT_THROW(read_population_csv(number), ConfigError);
    std::stringstream empty("");
    EXPECT_THROW(read_population_csv(empty), ConfigError);
}

TEST(Populations, Examples) {
    const HilbertLayout layout(2, 4, 2);
    const PopulationTable p = populations(tensor_basis_state(layout, Level::g, 1));
    EXPECT_EQ(p.at(Level::g, 1), 1.0);
    EXPECT_EQ(p.total(), 1.0);
    CVector v = CVector::Zero(8);
    v(layout.index(Level::g, 1)) = -0.1;
    v(layout.index(Level::e, 1)) = std::sqrt(0.99);
    EXPECT_NEAR(populations(QuantumState(layout, v)).at(Level::g, 1), 0.01, 1e-15);
}
