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

#include <optional>
#include <vector>

#include "snapopt/hilbert.hpp"
#include "snapopt/pulse.hpp"
#include "snapopt/system.hpp"

namespace snapopt {

/// Fixed-step classical RK4 settings.
struct PropagationConfig {
    int steps = 20000;            // per gate
    double max_step = 0.0;        // if > 0, steps = max(steps_floor, ceil(T / max_step))
    bool audit = true;            // re-run at half the step and compare
    double audit_tolerance = 1e-9;
    int trajectory_samples = 257; // points on the recorded no-jump grid

    static constexpr int kMinSteps = 1000;

    int steps_for(double gate_time) const;
    void validate() const;
};

/// Ground and driven-level (e for ge, f for gf) amplitudes of one Fock block,
/// rotating frame of H0 + H_chi.
struct ModeState {
    Complex ground{1.0, 0.0};
    Complex excited{0.0, 0.0};

    double norm() const { return std::sqrt(std::norm(ground) + std::norm(excited)); }
};

/// Coherent evolution of |g n> sampled on a time grid.
///   amplitude(g) = sqrt(1 - mu) e^{i phi_g},
///   amplitude(x) = sqrt(mu) e^{i (theta_n + phi_x)},
/// phases unwrapped continuously in time. Where an amplitude is below 1e-12
/// its phase holds the previous value (leading gaps take the first defined one).
struct ModeTrajectory {
    std::vector<double> mu;
    std::vector<double> phi_g;
    std::vector<double> phi_x;
};

struct NoJumpTrajectory {
    std::vector<double> time;
    std::vector<ModeTrajectory> modes;
    Protocol protocol = Protocol::ge;
};

/// Integrates the driven two-level block of Fock mode `fock_n` starting in |g>.
/// Throws PrecisionError when the step-halving audit fails.
ModeState propagate_mode(const PulseSpec &pulse, const SystemParams &system, int fock_n,
                         const PropagationConfig &config);

/// All addressed modes n = 0..L-1 of the pulse, sharing one pulse sampling.
std::vector<ModeState> propagate_modes(const PulseSpec &pulse, const SystemParams &system,
                                       const PropagationConfig &config);

/// Dense full-space Schroedinger propagation (no block reduction).
QuantumState propagate_state(const PulseSpec &pulse, const SystemParams &system,
                             const QuantumState &initial, const PropagationConfig &config);

/// No-jump trajectory of every addressed mode relative to `target`.
NoJumpTrajectory record_trajectory(const PulseSpec &pulse, const SystemParams &system,
                                   const TargetOp &target, const PropagationConfig &config);

/// Lindblad evolution over the gate with the time-dependent jump operators
/// of the chi rotating frame. Trace and Hermiticity are checked on output;
/// throws PrecisionError when an eigenvalue drops below -1e-6.
DensityMatrix propagate_lindblad(const PulseSpec &pulse, const SystemParams &system,
                                 const DensityMatrix &initial, const PropagationConfig &config);

/// Images of the matrix units |g n><g n'| (n, n' < L) under the noisy gate.
struct ProcessMap {
    HilbertLayout layout;
    int modes = 0;
    std::vector<CMatrix> outputs;  // row-major (n, n')

    const CMatrix &at(int n, int n_prime) const { return outputs[n * modes + n_prime]; }
};

ProcessMap propagate_process_map(const PulseSpec &pulse, const SystemParams &system,
                                 const HilbertLayout &layout, const PropagationConfig &config);

/// Ideal post-gate state for a measurement outcome:
///   g -> sum c_n |g n>, e -> sum c_n e^{i theta_n} |e n>, f -> sum c_n e^{i theta_n} |f n>.
/// Throws ContractError for an outcome the protocol does not have (f under ge).
QuantumState ideal_final_state(const TargetOp &target, std::span<const Complex> amplitudes,
                               Level outcome, Protocol protocol, const HilbertLayout &layout);

/// Second stage modelled as an instantaneous unselective pi pulse: swaps the
/// ground and driven levels.
QuantumState apply_ideal_flip(const QuantumState &state, Level driven);

}  // namespace snapopt
