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

#include "snapopt/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "drive_grid.hpp"

namespace snapopt {

using detail::DriveGrid;

int PropagationConfig::steps_for(double gate_time) const {
    int n = steps;
    if (max_step > 0.0) {
        n = static_cast<int>(std::ceil(gate_time / max_step));
    }
    return std::max(n, kMinSteps);
}

void PropagationConfig::validate() const {
    if (steps < kMinSteps && max_step <= 0.0) {
        throw ConfigError("propagation.steps", "at least 1000 steps per gate");
    }
    if (max_step < 0.0) throw ConfigError("propagation.max_step", "must be >= 0");
    if (!(audit_tolerance > 0.0)) throw ConfigError("propagation.audit_tolerance", "must be > 0");
    if (trajectory_samples < 2) throw ConfigError("propagation.trajectory_samples", "must be >= 2");
}

namespace {

struct Block {
    double energy_g;
    double energy_x;
};

Block block_for(const SystemParams &system, int n) {
    const detail::BlockEnergies en = detail::block_energies(system, n);
    return Block{en.g, system.protocol == Protocol::ge ? en.e : en.f};
}

// -i H a with H = [[E_g, conj(w)], [w, E_x]] in the (g, x) basis.
inline ModeState deriv(const Block &b, Complex w, const ModeState &a) {
    return ModeState{-kI * (b.energy_g * a.ground + std::conj(w) * a.excited),
                     -kI * (w * a.ground + b.energy_x * a.excited)};
}

inline ModeState axpy(const ModeState &a, double h, const ModeState &k) {
    return ModeState{a.ground + h * k.ground, a.excited + h * k.excited};
}

/// RK4 over the drive samples of one block. `stride` selects every
/// stride-th sample as the half-step grid. Optionally records each step.
ModeState integrate_block(const Block &b, const std::vector<Complex> &w, double half_spacing,
                          int stride, std::vector<ModeState> *record) {
    const int steps = static_cast<int>((w.size() - 1) / (2 * stride));
    const double h = 2.0 * stride * half_spacing;
    ModeState a;
    if (record) {
        record->clear();
        record->reserve(steps + 1);
        record->push_back(a);
    }
    for (int k = 0; k < steps; ++k) {
        const Complex w0 = w[2 * k * stride];
        const Complex wm = w[(2 * k + 1) * stride];
        const Complex w1 = w[(2 * k + 2) * stride];
        const ModeState k1 = deriv(b, w0, a);
        const ModeState k2 = deriv(b, wm, axpy(a, 0.5 * h, k1));
        const ModeState k3 = deriv(b, wm, axpy(a, 0.5 * h, k2));
        const ModeState k4 = deriv(b, w1, axpy(a, h, k3));
        a.ground += h / 6.0 * (k1.ground + 2.0 * k2.ground + 2.0 * k3.ground + k4.ground);
        a.excited += h / 6.0 * (k1.excited + 2.0 * k2.excited + 2.0 * k3.excited + k4.excited);
        if (record) record->push_back(a);
    }
    return a;
}

void check_mode_index(const PulseSpec &pulse, int fock_n) {
    if (fock_n < 0 || fock_n >= pulse.mode_count()) {
        throw DomainError("propagate_mode: Fock index outside the addressed modes");
    }
}

std::vector<ModeState> run_modes(const PulseSpec &pulse, const SystemParams &system,
                                 const PropagationConfig &config, int only_mode,
                                 std::vector<std::vector<ModeState>> *records) {
    pulse.validate();
    system.validate();
    const int steps = config.steps_for(pulse.gate_time);
    const int per_step = config.audit ? 4 : 2;
    const DriveGrid grid(pulse, steps, per_step);
    const int stride = per_step / 2;
    const int first = only_mode >= 0 ? only_mode : 0;
    const int last = only_mode >= 0 ? only_mode + 1 : pulse.mode_count();
    std::vector<ModeState> out;
    if (records) records->assign(last - first, {});
    for (int n = first; n < last; ++n) {
        const Block b = block_for(system, n);
        const std::vector<Complex> w = detail::block_drive(grid, system.drive_shift_per_photon(), n);
        ModeState coarse =
            integrate_block(b, w, grid.spacing, stride, records ? &(*records)[n - first] : nullptr);
        if (config.audit) {
            const ModeState fine = integrate_block(b, w, grid.spacing, 1, nullptr);
            const double diff = std::max(std::abs(fine.ground - coarse.ground),
                                         std::abs(fine.excited - coarse.excited));
            if (!(diff < config.audit_tolerance)) {
                std::ostringstream msg;
                msg << "step-halving audit failed for mode " << n << ": |delta| = " << diff
                    << " with " << steps << " steps";
                throw PrecisionError(msg.str());
            }
        }
        out.push_back(coarse);
    }
    return out;
}

double unwrap_towards(double previous, double raw) {
    return previous + wrap_phase(raw - previous);
}

void unwrap_series(std::vector<double> &phase, const std::vector<bool> &defined) {
    const std::size_t n = phase.size();
    std::size_t first = 0;
    while (first < n && !defined[first]) ++first;
    if (first == n) {
        std::fill(phase.begin(), phase.end(), 0.0);
        return;
    }
    for (std::size_t j = 0; j < first; ++j) phase[j] = phase[first];
    for (std::size_t j = first + 1; j < n; ++j) {
        phase[j] = defined[j] ? unwrap_towards(phase[j - 1], phase[j]) : phase[j - 1];
    }
}

}  // namespace

ModeState propagate_mode(const PulseSpec &pulse, const SystemParams &system, int fock_n,
                         const PropagationConfig &config) {
    check_mode_index(pulse, fock_n);
    return run_modes(pulse, system, config, fock_n, nullptr).front();
}

std::vector<ModeState> propagate_modes(const PulseSpec &pulse, const SystemParams &system,
                                       const PropagationConfig &config) {
    return run_modes(pulse, system, config, -1, nullptr);
}

QuantumState propagate_state(const PulseSpec &pulse, const SystemParams &system,
                             const QuantumState &initial, const PropagationConfig &config) {
    pulse.validate();
    system.validate();
    const HilbertLayout &layout = initial.layout;
    if (layout.transmon_levels() < system.transmon_levels()) {
        throw ContractError("propagate_state: layout lacks the driven transmon level");
    }
    const OperatorSet ops = build_operators(layout, system.driven_level());
    const int dim = layout.dim();
    const CMatrix raise = ops.transition(system.driven_level(), Level::g).matrix;

    // Static part: Kerr and chi' energies.
    Eigen::VectorXd static_diag = Eigen::VectorXd::Zero(dim);
    for (int t = 0; t < layout.transmon_levels(); ++t) {
        for (int n = 0; n < layout.fock_truncation(); ++n) {
            const detail::BlockEnergies en = detail::block_energies(system, n);
            static_diag(layout.index(t, n)) = t == 0 ? en.g : (t == 1 ? en.e : en.f);
        }
    }
    const Eigen::VectorXd photons = ops.number.matrix.diagonal().real();
    const double shift = system.drive_shift_per_photon();

    auto hamiltonian = [&](double t) {
        const Complex omega = evaluate(pulse, std::clamp(t, 0.0, pulse.gate_time));
        CVector phase(dim);
        for (int i = 0; i < dim; ++i) phase(i) = std::polar(1.0, -shift * photons(i) * t);
        CMatrix drive = omega * raise * phase.asDiagonal();
        CMatrix h = drive + drive.adjoint().eval();
        h.diagonal() += static_diag.cast<Complex>();
        return h;
    };

    const int steps = config.steps_for(pulse.gate_time);
    const double h = pulse.gate_time / steps;
    CVector psi = initial.amplitudes;
    for (int k = 0; k < steps; ++k) {
        const double t = k * h;
        const CMatrix h0 = hamiltonian(t);
        const CMatrix hm = hamiltonian(t + 0.5 * h);
        const CMatrix h1 = hamiltonian(k + 1 == steps ? pulse.gate_time : t + h);
        const CVector k1 = -kI * (h0 * psi);
        const CVector k2 = -kI * (hm * (psi + 0.5 * h * k1));
        const CVector k3 = -kI * (hm * (psi + 0.5 * h * k2));
        const CVector k4 = -kI * (h1 * (psi + h * k3));
        psi += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return QuantumState(layout, std::move(psi));
}

NoJumpTrajectory record_trajectory(const PulseSpec &pulse, const SystemParams &system,
                                   const TargetOp &target, const PropagationConfig &config) {
    if (target.modes() != pulse.mode_count()) {
        throw ContractError("record_trajectory: target and pulse disagree on mode count");
    }
    std::vector<std::vector<ModeState>> records;
    run_modes(pulse, system, config, -1, &records);
    const int steps = static_cast<int>(records.front().size()) - 1;
    const double h = pulse.gate_time / steps;
    const int samples = std::min(config.trajectory_samples, steps + 1);

    std::vector<int> picks(samples);
    for (int j = 0; j < samples; ++j) {
        picks[j] = static_cast<int>(std::llround(static_cast<double>(j) * steps / (samples - 1)));
    }

    NoJumpTrajectory traj;
    traj.protocol = system.protocol;
    traj.time.reserve(samples);
    for (int p : picks) traj.time.push_back(p == steps ? pulse.gate_time : p * h);

    constexpr double kPhaseFloor = 1e-12;
    for (int n = 0; n < pulse.mode_count(); ++n) {
        const std::vector<ModeState> &rec = records[n];
        std::vector<double> phi_g(rec.size()), phi_x(rec.size());
        std::vector<bool> def_g(rec.size()), def_x(rec.size());
        for (std::size_t k = 0; k < rec.size(); ++k) {
            def_g[k] = std::abs(rec[k].ground) >= kPhaseFloor;
            def_x[k] = std::abs(rec[k].excited) >= kPhaseFloor;
            phi_g[k] = def_g[k] ? std::arg(rec[k].ground) : 0.0;
            phi_x[k] = def_x[k] ? std::arg(rec[k].excited) - target.theta(n) : 0.0;
        }
        // The ground amplitude starts at exactly 1, so phi_g(0) = 0.
        unwrap_series(phi_g, def_g);
        unwrap_series(phi_x, def_x);
        ModeTrajectory mt;
        for (int p : picks) {
            const ModeState &a = rec[p];
            const double norm2 = std::norm(a.ground) + std::norm(a.excited);
            mt.mu.push_back(std::clamp(std::norm(a.excited) / norm2, 0.0, 1.0));
            mt.phi_g.push_back(phi_g[p]);
            mt.phi_x.push_back(phi_x[p]);
        }
        traj.modes.push_back(std::move(mt));
    }
    return traj;
}

QuantumState ideal_final_state(const TargetOp &target, std::span<const Complex> amplitudes,
                               Level outcome, Protocol protocol, const HilbertLayout &layout) {
    if (static_cast<int>(amplitudes.size()) != target.modes()) {
        throw ContractError("ideal_final_state: amplitude vector length differs from target");
    }
    if (outcome == Level::f && protocol == Protocol::ge) {
        throw ContractError("ideal_final_state: outcome f does not exist for the ge protocol");
    }
    if (static_cast<int>(outcome) >= layout.transmon_levels()) {
        throw ContractError("ideal_final_state: outcome level outside layout");
    }
    if (target.modes() > layout.fock_truncation()) {
        throw ContractError("ideal_final_state: target exceeds Fock truncation");
    }
    CVector v = CVector::Zero(layout.dim());
    for (int n = 0; n < target.modes(); ++n) {
        const Complex phase = outcome == Level::g ? Complex(1.0) : std::polar(1.0, target.theta(n));
        v(layout.index(outcome, n)) = amplitudes[n] * phase;
    }
    return QuantumState(layout, std::move(v));
}

QuantumState apply_ideal_flip(const QuantumState &state, Level driven) {
    const HilbertLayout &layout = state.layout;
    if (driven == Level::g || static_cast<int>(driven) >= layout.transmon_levels()) {
        throw ContractError("apply_ideal_flip: driven level outside layout");
    }
    CVector v = state.amplitudes;
    for (int n = 0; n < layout.fock_truncation(); ++n) {
        std::swap(v(layout.index(Level::g, n)), v(layout.index(driven, n)));
    }
    return QuantumState(layout, std::move(v));
}

}  // namespace snapopt
