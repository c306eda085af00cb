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

#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "snapopt/hilbert.hpp"

namespace snapopt {

/// P(level, n) for the first `levels` transmon levels and n < fock.
struct PopulationTable {
    int levels = 1;
    int fock = 0;
    std::vector<double> values;  // level-major
    std::string provenance = "simulated";

    PopulationTable() = default;
    PopulationTable(int levels, int fock);

    double at(Level level, int n) const { return values[static_cast<int>(level) * fock + n]; }
    double &at(Level level, int n) { return values[static_cast<int>(level) * fock + n]; }
    double total() const;
};

PopulationTable populations(const DensityMatrix &rho);
PopulationTable populations(const QuantumState &state);

/// Matrix elements <m|D(eps)|n> of exp(eps a^dag - eps* a) for m, n < dim.
struct DisplacementMatrix {
    Complex epsilon;
    CMatrix entries;

    int dim() const { return static_cast<int>(entries.rows()); }
};

/// Throws DomainError for dim < 2.
DisplacementMatrix displacement_matrix(Complex epsilon, int dim);

/// Single element d_mn(eps); exact for any m, n (no truncation involved).
Complex displacement_element(Complex epsilon, int m, int n);

/// |<level n| D(eps) |psi>|^2 with D acting on the cavity.
PopulationTable interference_populations(const QuantumState &state, double epsilon);
PopulationTable interference_populations(const DensityMatrix &rho, double epsilon);

/// First order in eps, real amplitudes c. Returns g-level rows for n < c.size().
PopulationTable interference_first_order(std::span<const double> c, std::span<const double> theta,
                                         double epsilon);

/// Ground-level interference populations from P(g, n), target phases and phase
/// errors using the full Laguerre expansion. Modes n >= theta.size() carry no phase.
std::vector<double> interference_model(std::span<const double> p_g, std::span<const double> theta,
                                       std::span<const double> dtheta, double epsilon, int rows);

struct PhaseErrorEstimate {
    std::vector<double> dtheta;       // dtheta[0] = 0 (gauge)
    std::vector<double> uncertainty;  // one standard deviation, 0 for the gauge mode
    double residual_norm = 0.0;
    int iterations = 0;
    bool ill_conditioned = false;
};

/// Damped least squares over dtheta_1..dtheta_{L-1}, starting from zero,
/// at most 200 iterations, finite-difference Jacobian.
PhaseErrorEstimate solve_phase_errors(const PopulationTable &p, const PopulationTable &p_eps,
                                      std::span<const double> theta, double epsilon);

/// Partial trace over the transmon.
CMatrix cavity_state(const DensityMatrix &rho);

/// W(alpha) = (2/pi) Tr[D(-alpha) rho D(-alpha)^dag Pi] for each alpha.
std::vector<double> wigner(const CMatrix &rho_cavity, std::span<const Complex> alphas);

/// Square grid of (re, im) points spaced `step` apart within [-extent, extent].
std::vector<Complex> alpha_grid(double extent, double step);

/// CSV "level,n,probability" with header.
void write_population_csv(std::ostream &os, const PopulationTable &table);
/// Throws ConfigError on malformed input.
PopulationTable read_population_csv(std::istream &is);

void write_wigner_csv(std::ostream &os, std::span<const Complex> alphas, std::span<const double> w);

}  // namespace snapopt
