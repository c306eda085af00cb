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

#include <cmath>
#include <vector>

#include "snapopt/pulse.hpp"
#include "snapopt/system.hpp"

namespace snapopt::detail {

/// Omega(t) on a uniform grid t_j = j * spacing, j = 0..count-1, with
/// spacing = T / (steps * samples_per_step). RK4 step k of a run with stride s
/// reads samples s*2k, s*(2k+1), s*(2k+2).
struct DriveGrid {
    double spacing = 0.0;
    double gate_time = 0.0;
    std::vector<Complex> omega;

    DriveGrid(const PulseSpec &pulse, int steps, int samples_per_step) {
        const int count = steps * samples_per_step + 1;
        spacing = pulse.gate_time / (static_cast<double>(steps) * samples_per_step);
        gate_time = pulse.gate_time;
        omega.resize(count);
        const double T = pulse.gate_time;
        for (int j = 0; j < count; ++j) {
            const double t = j == count - 1 ? T : j * spacing;
            Complex sum = 0.0;
            for (const ModeDrive &m : pulse.modes) {
                const double phase = m.omega * t + m.alpha - (m.omega - m.omega_ref) * T / 2.0;
                sum += std::polar(m.lambda, phase);
            }
            omega[j] = envelope(pulse.envelope, t, T) * sum;
        }
    }

    double time(int j) const {
        return j == static_cast<int>(omega.size()) - 1 ? gate_time : j * spacing;
    }
};

/// Diagonal energies of Fock block n in the chi frame (Kerr and chi' terms).
struct BlockEnergies {
    double g = 0.0;
    double e = 0.0;
    double f = 0.0;
};

inline BlockEnergies block_energies(const SystemParams &system, int n) {
    const double nn = static_cast<double>(n) * (n - 1);
    BlockEnergies en;
    en.g = -0.5 * system.kerr * nn;
    en.e = en.g + 0.5 * system.chi_prime * nn;
    en.f = en.g;
    return en;
}

/// Drive seen by block n: Omega(t) exp(-i shift n t).
inline std::vector<Complex> block_drive(const DriveGrid &grid, double shift_per_photon, int n) {
    std::vector<Complex> w(grid.omega.size());
    const double rate = shift_per_photon * n;
    for (std::size_t j = 0; j < w.size(); ++j) {
        w[j] = grid.omega[j] * std::polar(1.0, -rate * grid.time(static_cast<int>(j)));
    }
    return w;
}

}  // namespace snapopt::detail
