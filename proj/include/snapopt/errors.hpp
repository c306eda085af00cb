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

#include <cstdint>
#include <span>
#include <string_view>

#include "snapopt/dynamics.hpp"
#include "snapopt/error_set.hpp"
#include "snapopt/pulse.hpp"

namespace snapopt {

/// Inverts |g> amplitude = -eps/2, |x> amplitude = sqrt(1 - |eps|^2/4) e^{i(theta + dtheta)}.
/// Throws DegenerateStateError when |x amplitude| < 1e-9.
ModeError extract_mode_error(const ModeState &state, double theta);

/// Throws ContractError when the number of states differs from the target.
CoherentErrorSet extract_errors(std::span<const ModeState> finals, const TargetOp &target);

/// Final two-level state built from an error triple (the inverse of extract_mode_error).
ModeState state_from_error(const ModeError &error, double theta);

/// Bloch vector of a (g, x) two-level state. z = P(g) - P(x), so the driven
/// target sits at z = -1 and the undriven state at the projection pole z = +1.
struct BlochVector {
    double x = 0.0;
    double y = 0.0;
    double z = 1.0;
};

BlochVector bloch_vector(const ModeState &state);

struct LambertPoint {
    double X = 0.0;
    double Y = 0.0;
};

/// (X, Y) = sqrt(2/(1-z)) (<sigma_alpha>, <sigma_{alpha+pi/2}>). With alpha =
/// theta_n + pi/2 this gives (eps_T, eps_L). Throws DomainError at the pole.
LambertPoint lambert_projection(const BlochVector &bloch, double alpha);

enum class Averaging { exact, monte_carlo };

std::string_view to_string(Averaging a);

struct FidelityOptions {
    bool error_corrected = false;
    Averaging averaging = Averaging::exact;
    bool real_amplitudes = false;  // average over real unit vectors instead of complex ones
    std::size_t samples = 100000;  // Monte Carlo only
    std::uint64_t seed = 20260101;
};

/// Mean squared overlap averaged over initial cavity amplitudes.
struct FidelityReport {
    double fidelity = 0.0;
    double f_g = 0.0;
    double f_e = 0.0;
    double f_f = 0.0;
    bool coherent_only = true;
    bool error_corrected = false;
    bool real_amplitudes = false;
    Protocol protocol = Protocol::ge;
    Averaging averaging = Averaging::exact;
    std::size_t samples = 0;
    std::uint64_t seed = 0;
    double standard_error = 0.0;  // Monte Carlo only

    double error() const { return 1.0 - fidelity; }
};

/// Noiseless input: the per-mode final states. Populations outside {g, x} are zero.
FidelityReport averaged_fidelity(std::span<const ModeState> finals, const TargetOp &target,
                                 Protocol protocol, const FidelityOptions &options = {});

/// Noisy input: images of the matrix units |g n><g n'|.
FidelityReport averaged_fidelity(const ProcessMap &map, const TargetOp &target, Protocol protocol,
                                 const FidelityOptions &options = {});

/// 1 - F for the driven outcome without error correction; the optimizer's objective.
double coherent_overlap_error(std::span<const ModeState> finals, const TargetOp &target);

}  // namespace snapopt
