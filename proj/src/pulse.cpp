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

#include "snapopt/pulse.hpp"

#include <cmath>

namespace snapopt {

TargetOp::TargetOp(std::vector<double> theta) : theta_(std::move(theta)) {
    if (theta_.empty()) {
        throw ConfigError("theta", "target needs at least one Fock mode");
    }
    for (double &t : theta_) {
        if (!std::isfinite(t)) {
            throw ConfigError("theta", "phases must be finite");
        }
        t = wrap_phase(t);
    }
}

EnvelopeSpec EnvelopeSpec::standard(double gate_time, bool enabled) {
    return EnvelopeSpec{2.0 * kPi / (0.2 * gate_time), enabled};
}

void PulseSpec::validate() const {
    if (!(gate_time > 0.0) || !std::isfinite(gate_time)) {
        throw ConfigError("pulse.T", "gate time must be positive");
    }
    if (modes.empty()) {
        throw ConfigError("pulse.modes", "pulse needs at least one component");
    }
    for (const ModeDrive &m : modes) {
        if (!(m.lambda > 0.0)) {
            throw ConfigError("pulse.modes.lambda", "amplitudes must be positive");
        }
        if (!std::isfinite(m.omega) || !std::isfinite(m.alpha) || !std::isfinite(m.omega_ref)) {
            throw ConfigError("pulse.modes", "non-finite drive parameter");
        }
    }
    if (envelope.enabled && !(envelope.beta * gate_time > 2.0 * kPi)) {
        throw ConfigError("pulse.envelope.beta", "beta * T must exceed 2 pi");
    }
}

PulseSpec make_unoptimized(const TargetOp &target, double gate_time, const SystemParams &system,
                           bool frame_corrections, EnvelopeSpec envelope) {
    if (!(gate_time > 0.0)) {
        throw ConfigError("T", "gate time must be positive");
    }
    PulseSpec pulse;
    pulse.gate_time = gate_time;
    pulse.envelope = envelope;
    pulse.frame_corrections = frame_corrections;
    const double lambda = kPi / (2.0 * gate_time);
    const double shift = system.drive_shift_per_photon();
    // chi' is a correction to the e-level dispersive shift only.
    const double chi_prime = system.protocol == Protocol::ge ? system.chi_prime : 0.0;
    for (int n = 0; n < target.modes(); ++n) {
        const double nn = static_cast<double>(n) * (n - 1);
        ModeDrive m;
        m.lambda = lambda;
        m.omega = shift * n;
        m.alpha = target.theta(n) + kPi / 2.0;
        if (frame_corrections) {
            m.omega -= 0.5 * chi_prime * nn;
            m.alpha -= 0.5 * (system.kerr - chi_prime) * nn * gate_time;
        }
        m.alpha = wrap_phase(m.alpha);
        m.omega_ref = m.omega;
        pulse.modes.push_back(m);
    }
    pulse.validate();
    return pulse;
}

double envelope(const EnvelopeSpec &spec, double t, double gate_time) {
    if (!(t >= 0.0 && t <= gate_time)) {
        throw DomainError("envelope: t outside [0, T]");
    }
    if (!spec.enabled) {
        return 1.0;
    }
    const double bt = spec.beta * gate_time;
    if (!(bt > 2.0 * kPi)) {
        throw ConfigError("envelope.beta", "beta * T must exceed 2 pi");
    }
    const double scale = bt / (bt - kPi);
    const double ramp = kPi / spec.beta;
    if (t <= ramp) {
        return scale * 0.5 * (1.0 - std::cos(spec.beta * t));
    }
    if (t >= gate_time - ramp) {
        // Mirror image of the rising edge.
        return scale * 0.5 * (1.0 - std::cos(spec.beta * (gate_time - t)));
    }
    return scale;
}

static Complex carrier_sum(const PulseSpec &pulse, double t) {
    const double T = pulse.gate_time;
    Complex sum = 0.0;
    for (const ModeDrive &m : pulse.modes) {
        const double d_omega = m.omega - m.omega_ref;
        sum += m.lambda * std::exp(kI * (m.omega * t + m.alpha - d_omega * T / 2.0));
    }
    return sum;
}

Complex evaluate(const PulseSpec &pulse, double t) {
    if (!(t >= 0.0 && t <= pulse.gate_time)) {
        throw DomainError("evaluate: t outside [0, T]");
    }
    return envelope(pulse.envelope, t, pulse.gate_time) * carrier_sum(pulse, t);
}

std::vector<Complex> sample(const PulseSpec &pulse, std::span<const double> times) {
    std::vector<Complex> out;
    out.reserve(times.size());
    for (double t : times) {
        out.push_back(evaluate(pulse, t));
    }
    return out;
}

PulseSpec apply_corrections(const PulseSpec &pulse, const CoherentErrorSet &errors, double eta) {
    if (!(eta > 0.0 && eta <= 1.0)) {
        throw ContractError("apply_corrections: eta must lie in (0, 1]");
    }
    if (errors.size() != pulse.modes.size()) {
        throw ContractError("apply_corrections: error set and pulse disagree on mode count");
    }
    PulseSpec next = pulse;
    const double T = pulse.gate_time;
    for (std::size_t n = 0; n < next.modes.size(); ++n) {
        const ModeError &err = errors.modes[n];
        ModeDrive &m = next.modes[n];
        m.lambda -= eta * err.eps_L / (2.0 * T);
        m.omega += eta * kPi * err.eps_T / (2.0 * T);
        m.alpha = wrap_phase(m.alpha - eta * err.dtheta);
        if (!(m.lambda > 0.0)) {
            throw DivergenceError("correction drove amplitude of mode " + std::to_string(n) +
                                  " non-positive");
        }
    }
    return next;
}

}  // namespace snapopt
