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

#include "snapopt/optimizer.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <random>

#include "snapopt/parallel.hpp"

namespace snapopt {

void OptimizerConfig::validate() const {
    if (!(eta > 0.0 && eta <= 1.0)) throw ConfigError("optimizer.eta", "must lie in (0, 1]");
    if (!(threshold > 0.0)) throw ConfigError("optimizer.threshold", "must be > 0");
    if (max_iterations < 1) throw ConfigError("optimizer.max_iterations", "must be >= 1");
    if (divergence_window < 1) throw ConfigError("optimizer.divergence_window", "must be >= 1");
    if (!(min_gain >= 0.0 && min_gain < 1.0)) throw ConfigError("optimizer.min_gain", "must lie in [0, 1)");
    if (!(limit_low > 0.0 && limit_high > limit_low)) {
        throw ConfigError("optimizer.limit_high", "limit range must satisfy 0 < low < high");
    }
    if (!(limit_grid > 0.0)) throw ConfigError("optimizer.limit_grid", "must be > 0");
    if (!(limit_resolution > 0.0 && limit_resolution <= limit_grid)) {
        throw ConfigError("optimizer.limit_resolution", "must lie in (0, limit_grid]");
    }
    propagation.validate();
}

std::string_view to_string(StopReason r) {
    switch (r) {
        case StopReason::converged: return "converged";
        case StopReason::stalled: return "stalled";
        case StopReason::max_iterations: return "max_iterations";
        case StopReason::amplitude_collapse: return "amplitude_collapse";
        case StopReason::degenerate: return "degenerate";
    }
    return "unknown";
}

namespace {

struct Evaluation {
    CoherentErrorSet errors;
    double error;
};

Evaluation evaluate_pulse(const PulseSpec &pulse, const TargetOp &target, const SystemParams &system,
                          const PropagationConfig &propagation) {
    const std::vector<ModeState> finals = propagate_modes(pulse, system, propagation);
    return Evaluation{extract_errors(finals, target), coherent_overlap_error(finals, target)};
}

}  // namespace

OptimizerReport optimize(const TargetOp &target, double gate_time, const SystemParams &system,
                         const OptimizerConfig &config) {
    EnvelopeSpec env = config.envelope;
    if (env.enabled) env = EnvelopeSpec::standard(gate_time, true);
    return optimize_from(make_unoptimized(target, gate_time, system, config.frame_corrections, env),
                         target, system, config);
}

OptimizerReport optimize_from(const PulseSpec &start, const TargetOp &target,
                              const SystemParams &system, const OptimizerConfig &config) {
    config.validate();
    if (start.mode_count() != target.modes()) {
        throw ContractError("optimize: pulse and target disagree on mode count");
    }
    // Iterations run without the step-halving audit; the returned pulse is
    // re-evaluated with the audit enabled as configured.
    PropagationConfig fast = config.propagation;
    fast.audit = false;

    OptimizerReport report;
    PulseSpec pulse = start;
    PulseSpec best_pulse = start;
    double best = std::numeric_limits<double>::infinity();
    double reference = best;  // best error at the last 1% gain
    int since_gain = 0;

    for (int it = 0;; ++it) {
        Evaluation ev;
        try {
            ev = evaluate_pulse(pulse, target, system, fast);
        } catch (const DegenerateStateError &) {
            report.reason = StopReason::degenerate;
            break;
        }
        report.trace.push_back(ev.error);
        if (ev.error < best) {
            best = ev.error;
            best_pulse = pulse;
        }
        if (ev.error < reference * (1.0 - config.min_gain)) {
            reference = ev.error;
            since_gain = 0;
        } else {
            ++since_gain;
        }
        if (ev.error < config.threshold) {
            report.converged = true;
            report.reason = StopReason::converged;
            break;
        }
        if (since_gain >= config.divergence_window) {
            report.reason = StopReason::stalled;
            break;
        }
        if (it >= config.max_iterations) {
            report.reason = StopReason::max_iterations;
            break;
        }
        try {
            pulse = apply_corrections(pulse, ev.errors, config.eta);
        } catch (const DivergenceError &) {
            report.reason = StopReason::amplitude_collapse;
            break;
        }
        report.iterations = it + 1;
    }

    report.pulse = report.converged ? pulse : best_pulse;
    try {
        const Evaluation final_ev = evaluate_pulse(report.pulse, target, system, config.propagation);
        report.final_errors = final_ev.errors;
        report.final_error = final_ev.error;
    } catch (const DegenerateStateError &) {
        report.final_errors = CoherentErrorSet::zeros(target.modes());
        report.final_error = 1.0;
    }
    if (report.converged && !(report.final_error < config.threshold)) {
        // The audited evaluation disagrees with the fast one at threshold level.
        report.converged = false;
        report.reason = StopReason::stalled;
    }
    return report;
}

Eigen::Matrix3d first_order_sensitivities(const PulseSpec &pulse, const TargetOp &target,
                                          const SystemParams &system, int mode_n,
                                          const PropagationConfig &config, double relative_step) {
    if (mode_n < 0 || mode_n >= pulse.mode_count()) {
        throw DomainError("first_order_sensitivities: mode outside pulse");
    }
    if (!(relative_step > 0.0)) throw PrecisionError("first_order_sensitivities: step must be > 0");
    const ModeDrive &m = pulse.modes[mode_n];
    // Steps: lambda and omega relative to lambda (the natural rate scale), alpha absolute.
    const std::array<double, 3> steps{relative_step * m.lambda, relative_step * m.lambda, relative_step};

    auto errors_at = [&](int param, double delta) {
        PulseSpec p = pulse;
        ModeDrive &d = p.modes[mode_n];
        if (param == 0) d.lambda += delta;
        if (param == 1) d.omega += delta;
        if (param == 2) d.alpha += delta;  // left unwrapped so the difference stays smooth
        const ModeState s = propagate_mode(p, system, mode_n, config);
        const ModeError e = extract_mode_error(s, target.theta(mode_n));
        return Eigen::Vector3d(e.eps_L, e.eps_T, e.dtheta);
    };

    Eigen::Matrix3d jac;
    for (int k = 0; k < 3; ++k) {
        const Eigen::Vector3d plus = errors_at(k, steps[k]);
        const Eigen::Vector3d minus = errors_at(k, -steps[k]);
        Eigen::Vector3d diff = plus - minus;
        diff(2) = wrap_phase(diff(2));
        if (diff.cwiseAbs().maxCoeff() < 1e-11) {
            throw PrecisionError("first_order_sensitivities: step too small to resolve a change");
        }
        jac.col(k) = diff / (2.0 * steps[k]);
    }
    return jac;
}

namespace {

bool converges_at(double chi_t_over_pi, const TargetOp &target, const SystemParams &system,
                  const OptimizerConfig &config) {
    const double T = chi_t_over_pi * kPi / system.chi;
    try {
        return optimize(target, T, system, config).converged;
    } catch (const PrecisionError &) {
        return false;
    }
}

}  // namespace

LimitSearch find_optimization_limit(const TargetOp &target, const SystemParams &system,
                                    const OptimizerConfig &config) {
    config.validate();
    LimitSearch out;
    const int points = static_cast<int>(std::floor((config.limit_high - config.limit_low) / config.limit_grid + 1e-9));
    double good = -1.0;
    double bad = -1.0;
    for (int k = 0; k <= points; ++k) {
        const double x = config.limit_high - k * config.limit_grid;
        const bool ok = converges_at(x, target, system, config);
        out.evaluated.emplace_back(x * kPi, ok);
        if (!ok) {
            bad = x;
            break;
        }
        good = x;
    }
    if (good < 0.0) return out;  // top of the range fails
    out.found = true;
    if (bad < 0.0) {
        out.chi_t = good * kPi;  // whole range converges
        return out;
    }
    while (good - bad > config.limit_resolution * (1.0 + 1e-9)) {
        const double mid = 0.5 * (good + bad);
        const bool ok = converges_at(mid, target, system, config);
        out.evaluated.emplace_back(mid * kPi, ok);
        (ok ? good : bad) = mid;
    }
    out.chi_t = good * kPi;
    return out;
}

std::vector<TargetOp> random_targets(int modes, int count, std::uint64_t seed) {
    if (modes < 1) throw ConfigError("modes", "must be >= 1");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * kPi);
    std::vector<TargetOp> out;
    out.reserve(count);
    for (int i = 0; i < count; ++i) {
        std::vector<double> theta(modes);
        for (double &t : theta) t = phase(rng);
        out.emplace_back(std::move(theta));
    }
    return out;
}

AveragedLimit find_averaged_limit(int modes, const SystemParams &system, const OptimizerConfig &config,
                                  int samples, std::uint64_t seed, int workers) {
    if (samples < 1) throw ConfigError("samples", "must be >= 1");
    const std::vector<TargetOp> targets = random_targets(modes, samples, seed);
    AveragedLimit out;
    out.searches.resize(samples);
    parallel_for(targets.size(), workers, [&](std::size_t i) {
        out.searches[i] = find_optimization_limit(targets[i], system, config);
    });
    double sum = 0.0;
    int found = 0;
    for (int i = 0; i < samples; ++i) {
        out.thetas.push_back(targets[i].theta());
        const LimitSearch &s = out.searches[i];
        if (!s.found) {
            ++out.not_found;
            continue;
        }
        sum += s.chi_t;
        ++found;
        out.maximum = std::max(out.maximum, s.chi_t);
    }
    out.mean = found > 0 ? sum / found : 0.0;
    return out;
}

}  // namespace snapopt
