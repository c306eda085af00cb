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

#include <span>
#include <vector>

#include "snapopt/error_set.hpp"
#include "snapopt/system.hpp"

namespace snapopt {

/// Target SNAP phases theta_n for Fock modes n = 0..L-1, kept in (-pi, pi].
class TargetOp {
   public:
    explicit TargetOp(std::vector<double> theta);
    const std::vector<double> &theta() const { return theta_; }
    double theta(std::size_t n) const { return theta_[n]; }
    int modes() const { return static_cast<int>(theta_.size()); }

   private:
    std::vector<double> theta_;
};

/// Raised-cosine switch-on/off. Ramps have width pi/beta.
struct EnvelopeSpec {
    double beta = 0.0;
    bool enabled = false;

    /// beta = 2 pi / (0.2 T).
    static EnvelopeSpec standard(double gate_time, bool enabled = true);
};

/// One spectral component of the drive.
struct ModeDrive {
    double lambda = 0.0;     // amplitude
    double omega = 0.0;      // angular frequency
    double alpha = 0.0;      // phase, (-pi, pi]
    double omega_ref = 0.0;  // frequency of the uncorrected pulse; sets the detuning
};

/// Drive with one component per addressed Fock mode:
///   Omega(t) = env(t) * sum_n lambda_n exp(i (omega_n t + alpha_n - (omega_n - omega_ref_n) T / 2)).
struct PulseSpec {
    double gate_time = 0.0;
    std::vector<ModeDrive> modes;
    EnvelopeSpec envelope;
    bool frame_corrections = false;

    int mode_count() const { return static_cast<int>(modes.size()); }
    double detuning(std::size_t n) const { return modes[n].omega - modes[n].omega_ref; }

    /// Throws ConfigError if any amplitude is non-positive, the gate time is
    /// not positive, or the envelope ramps do not fit.
    void validate() const;
};

/// Uncorrected selective pulse: lambda = pi/(2T), omega_n = chi n, alpha_n = theta_n + pi/2.
/// With `frame_corrections`, omega_n and alpha_n absorb the Kerr and chi'
/// shifts so that the target is still reached in the chi frame.
PulseSpec make_unoptimized(const TargetOp &target, double gate_time, const SystemParams &system,
                           bool frame_corrections = false,
                           EnvelopeSpec envelope = EnvelopeSpec{});

/// Envelope value; identically 1 when disabled. Normalised so that its
/// integral over [0, T] equals T. Throws DomainError for t outside [0, T] and
/// ConfigError when beta T <= 2 pi.
double envelope(const EnvelopeSpec &spec, double t, double gate_time);

/// Omega(t). Throws DomainError for t outside [0, T].
Complex evaluate(const PulseSpec &pulse, double t);

/// Omega at each time of `times` (no range check beyond [0, T]).
std::vector<Complex> sample(const PulseSpec &pulse, std::span<const double> times);

/// One correction step scaled by eta:
///   lambda_n -= eta eps_L / (2T); omega_n += eta pi eps_T / (2T); alpha_n -= eta dtheta.
/// Throws ContractError for eta outside (0, 1] or a size mismatch; throws
/// DivergenceError when an amplitude would become non-positive.
PulseSpec apply_corrections(const PulseSpec &pulse, const CoherentErrorSet &errors, double eta);

struct DivergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace snapopt
