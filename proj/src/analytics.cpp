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

#include "snapopt/analytics.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include <boost/math/tools/minima.hpp>

#include "snapopt/parallel.hpp"

namespace snapopt {

double inverse_square_gap_sum(int modes) {
    if (modes < 1) throw ConfigError("modes", "must be >= 1");
    double s = 0.0;
    for (int n = 0; n < modes; ++n)
        for (int m = 0; m < modes; ++m)
            if (m != n) s += 1.0 / ((m - n) * (m - n));
    return s;
}

double coherent_error_avg(int modes, double chi_t, bool ec) {
    if (!(chi_t > 0.0)) throw ConfigError("chiT", "must be > 0");
    const double L = modes;
    const double base = std::pow(kPi / chi_t, 2) * inverse_square_gap_sum(modes);
    const double fe_loss = 3.0 / (4.0 * L) * base;
    if (!ec) return fe_loss;
    return fe_loss - 5.0 / (4.0 * L * (L + 1.0)) * base;
}

double transmon_decay_error(int modes, double gamma_t, Protocol protocol, bool ec) {
    const double L = modes;
    if (protocol == Protocol::gf) return ec ? 0.0 : 0.5 * gamma_t;
    if (!ec) return (2.0 * L + 1.0) / (4.0 * (L + 1.0)) * gamma_t;
    return (2.0 * L + 1.0 - 3.0) / (4.0 * (L + 1.0)) * gamma_t;
}

double dephasing_error(double gamma_t, bool ec) { return ec ? 0.0 : gamma_t / 8.0; }

double cavity_decay_error(int modes, double gamma_t, bool ec) {
    const double L = modes;
    const double fe_loss = (L - 1.0) * (4.0 * L + 1.0) / (8.0 * (L + 1.0)) * gamma_t;
    if (!ec) return fe_loss;
    return fe_loss - (L - 1.0) / (8.0 * (L + 1.0)) * gamma_t;
}

namespace {

template <class Fn>
double trapezoid(const std::vector<double> &t, Fn f) {
    double acc = 0.0;
    for (std::size_t k = 1; k < t.size(); ++k) acc += 0.5 * (t[k] - t[k - 1]) * (f(k) + f(k - 1));
    return acc;
}

}  // namespace

PdViolation pd_violation_errors(const NoJumpTrajectory &traj, const TargetOp &target,
                                const NoiseRates &rates) {
    const int L = target.modes();
    if (static_cast<int>(traj.modes.size()) != L) {
        throw ContractError("pd_violation_errors: trajectory and target disagree on mode count");
    }
    if (traj.time.size() < 2) throw ContractError("pd_violation_errors: trajectory needs >= 2 samples");
    for (const ModeTrajectory &m : traj.modes) {
        if (std::abs(m.mu.back() - 1.0) > 1e-4 || std::abs(wrap_phase(m.phi_x.back())) > 1e-4) {
            throw ContractError("pd_violation_errors: trajectory endpoint is not at the target");
        }
    }
    const bool gf = traj.protocol == Protocol::gf;
    const double g_decay = gf ? rates.decay_fe : 0.0;
    const double g_deph = gf ? rates.dephase_ff : rates.dephase_ee;
    const std::vector<double> &t = traj.time;
    const double norm = static_cast<double>(L) * (L + 1);

    double occupancy = 0.0;  // sum_n int mu_n
    for (const ModeTrajectory &m : traj.modes) occupancy += trapezoid(t, [&](std::size_t k) { return m.mu[k]; });

    double decay_cross = 0.0;
    double deph_cross = 0.0;
    double deph_flat = 0.0;
    for (int n = 0; n < L; ++n) {
        for (int p = 0; p < L; ++p) {
            const ModeTrajectory &a = traj.modes[n];
            const ModeTrajectory &b = traj.modes[p];
            const double w = n == p ? 2.0 : 1.0;
            decay_cross += w * trapezoid(t, [&](std::size_t k) {
                return std::sqrt(a.mu[k] * b.mu[k]) * std::cos(b.phi_x[k] - a.phi_x[k]);
            });
            deph_cross += w * trapezoid(t, [&](std::size_t k) {
                return std::sqrt(a.mu[k] * b.mu[k] * (1.0 - a.mu[k]) * (1.0 - b.mu[k])) *
                       std::cos(a.phi_x[k] - b.phi_x[k] + a.phi_g[k] - b.phi_g[k]);
            });
            deph_flat += w * trapezoid(t, [&](std::size_t k) { return a.mu[k] * b.mu[k]; });
        }
    }
    PdViolation out;
    out.decay = g_decay * (occupancy / L - decay_cross / norm);
    out.dephasing = g_deph * (occupancy / L - deph_cross / norm - deph_flat / norm);
    return out;
}

std::string_view to_string(ProtocolVariant v) {
    switch (v) {
        case ProtocolVariant::ge: return "ge";
        case ProtocolVariant::ge_ec: return "ge_ec";
        case ProtocolVariant::gf_ec: return "gf_ec";
    }
    return "ge";
}

ProtocolVariant variant_from_string(std::string_view name) {
    if (name == "ge") return ProtocolVariant::ge;
    if (name == "ge_ec") return ProtocolVariant::ge_ec;
    if (name == "gf_ec") return ProtocolVariant::gf_ec;
    throw ConfigError("protocol", "expected ge, ge_ec or gf_ec, got '" + std::string(name) + "'");
}

Protocol protocol_of(ProtocolVariant v) { return v == ProtocolVariant::gf_ec ? Protocol::gf : Protocol::ge; }

bool error_corrected(ProtocolVariant v) { return v != ProtocolVariant::ge; }

std::string protocol_label(ProtocolVariant v, bool optimized) {
    std::string s = optimized ? "optimized " : "unoptimized ";
    s += v == ProtocolVariant::gf_ec ? "gf" : "ge";
    if (error_corrected(v)) s += " with error correction";
    return s;
}

namespace {

SystemParams system_for(ProtocolVariant v, const SystemParams &base) {
    SystemParams s = base;
    s.protocol = protocol_of(v);
    return s;
}

/// Path-dependence errors averaged over seeded random targets whose optimized
/// pulse converges at chi T. Returns the number of contributing targets.
int averaged_pd(const SystemParams &system, int modes, double chi_t, const BudgetOptions &options,
                PdViolation &mean) {
    const std::vector<TargetOp> targets = random_targets(modes, options.pd_samples, options.seed);
    OptimizerConfig cfg = options.optimizer;
    cfg.threshold = options.pd_threshold;
    const double T = chi_t / system.chi;
    std::vector<PdViolation> values(targets.size());
    std::vector<char> used(targets.size(), 0);
    parallel_for(targets.size(), options.workers, [&](std::size_t i) {
        try {
            const OptimizerReport rep = optimize(targets[i], T, system, cfg);
            if (!rep.converged) return;
            const NoJumpTrajectory traj = record_trajectory(rep.pulse, system, targets[i], cfg.propagation);
            values[i] = pd_violation_errors(traj, targets[i], system.rates);
            used[i] = 1;
        } catch (const PrecisionError &) {
        } catch (const ContractError &) {
        }
    });
    int count = 0;
    mean = PdViolation{};
    for (std::size_t i = 0; i < targets.size(); ++i) {
        if (!used[i]) continue;
        mean.decay += values[i].decay;
        mean.dephasing += values[i].dephasing;
        ++count;
    }
    if (count > 0) {
        mean.decay /= count;
        mean.dephasing /= count;
    }
    return count;
}

}  // namespace

ErrorBudget protocol_budget(ProtocolVariant variant, bool optimized, int modes, double chi_t,
                            const SystemParams &base, const BudgetOptions &options) {
    if (modes < 1) throw ConfigError("modes", "must be >= 1");
    if (!(chi_t > 0.0)) throw ConfigError("chiT", "must be > 0");
    const SystemParams system = system_for(variant, base);
    system.validate();
    const bool ec = error_corrected(variant);
    const bool gf = variant == ProtocolVariant::gf_ec;
    const double T = chi_t / system.chi;

    ErrorBudget b;
    b.variant = variant;
    b.optimized = optimized;
    b.modes = modes;
    b.chi_t = chi_t;
    b.rates = system.rates;
    if (optimized && chi_t < options.optimization_limit * (1.0 - 1e-12)) {
        b.applicable = false;
        return b;
    }
    b.coherent = optimized ? 0.0 : coherent_error_avg(modes, chi_t, ec);
    const double decay_rate = gf ? system.rates.decay_fe : system.rates.decay_eg;
    const double deph_rate = gf ? system.rates.dephase_ff : system.rates.dephase_ee;
    b.transmon_decay = transmon_decay_error(modes, decay_rate * T, system.protocol, ec);
    b.transmon_dephasing = dephasing_error(deph_rate * T, ec);
    b.cavity_decay = cavity_decay_error(modes, system.rates.cavity * T, ec);

    // Path dependence matters once the other first-order terms vanish: for
    // optimized pulses with error correction.
    const bool needs_pd = optimized && ec && (deph_rate > 0.0 || (gf && decay_rate > 0.0));
    if (needs_pd && modes > 1) {
        PdViolation pd;
        b.pd_samples = averaged_pd(system, modes, chi_t, options, pd);
        if (b.pd_samples == 0) {
            b.applicable = false;
            return b;
        }
        b.pd_violation_decay = pd.decay;
        b.pd_violation_dephasing = pd.dephasing;
    }
    return b;
}

std::vector<ProtocolOptimum> protocol_comparison(int modes, const SystemParams &system,
                                                 const ComparisonOptions &options) {
    if (!(options.scan_step > 0.0)) throw ConfigError("scan_step", "must be > 0");
    std::vector<ProtocolOptimum> out;

    auto unoptimized = [&](ProtocolVariant v) {
        auto total = [&](double x) { return protocol_budget(v, false, modes, x, system, options.budget).total(); };
        const auto [x, err] = boost::math::tools::brent_find_minima(total, options.unoptimized_low,
                                                                    options.unoptimized_high, 40);
        ProtocolOptimum o;
        o.variant = v;
        o.optimized = false;
        o.chi_t = x;
        o.budget = protocol_budget(v, false, modes, x, system, options.budget);
        o.error = o.budget.total();
        return o;
    };

    auto optimized = [&](ProtocolVariant v) {
        ProtocolOptimum o;
        o.variant = v;
        o.optimized = true;
        o.error = std::numeric_limits<double>::infinity();
        const double start = options.budget.optimization_limit;
        for (int k = 0;; ++k) {
            const double x = start + k * options.scan_step;
            if (x > options.scan_high * (1.0 + 1e-12)) break;
            ErrorBudget b = protocol_budget(v, true, modes, x, system, options.budget);
            o.scan.push_back(b);
            if (b.applicable && b.total() < o.error) {
                o.error = b.total();
                o.chi_t = x;
                o.budget = b;
            }
        }
        return o;
    };

    out.push_back(unoptimized(ProtocolVariant::ge));
    out.push_back(optimized(ProtocolVariant::ge));
    out.push_back(optimized(ProtocolVariant::ge_ec));
    out.push_back(unoptimized(ProtocolVariant::gf_ec));
    out.push_back(optimized(ProtocolVariant::gf_ec));
    return out;
}

std::string budget_csv(const std::vector<ErrorBudget> &budgets) {
    std::ostringstream os;
    os.precision(10);
    os << "protocol,optimized,applicable,modes,chiT_over_pi,coherent,transmon_decay,transmon_dephasing,"
          "cavity_decay,pd_violation_decay,pd_violation_dephasing,pd_samples,total\n";
    for (const ErrorBudget &b : budgets) {
        os << to_string(b.variant) << ',' << (b.optimized ? 1 : 0) << ',' << (b.applicable ? 1 : 0) << ','
           << b.modes << ',' << b.chi_t / kPi << ',' << b.coherent << ',' << b.transmon_decay << ','
           << b.transmon_dephasing << ',' << b.cavity_decay << ',' << b.pd_violation_decay << ','
           << b.pd_violation_dephasing << ',' << b.pd_samples << ',' << b.total() << '\n';
    }
    return os.str();
}

}  // namespace snapopt
