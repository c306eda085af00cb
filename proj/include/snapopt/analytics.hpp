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
#include <string>
#include <string_view>
#include <vector>

#include "snapopt/dynamics.hpp"
#include "snapopt/optimizer.hpp"
#include "snapopt/system.hpp"

namespace snapopt {

/// sum over n != m in [0, L) of 1/(m-n)^2.
double inverse_square_gap_sum(int modes);

/// Target- and chi T-averaged coherent error of the unoptimized pulse.
/// Without error correction 1 - F_e; with it 1 - F_g - F_e.
double coherent_error_avg(int modes, double chi_t, bool error_corrected);

/// First-order transmon decay error. gamma_t is Gamma T of the relevant
/// channel (e -> g for ge, f -> e for gf). For gf with error correction the
/// result is 0; for gf without it the decayed population ends in e, giving
/// Gamma T / 2.
double transmon_decay_error(int modes, double gamma_t, Protocol protocol, bool error_corrected);

/// First-order dephasing error, Gamma T / 8 or 0 with error correction.
double dephasing_error(double gamma_t, bool error_corrected);

/// First-order cavity-decay error.
double cavity_decay_error(int modes, double gamma_t, bool error_corrected);

struct PdViolation {
    double decay = 0.0;
    double dephasing = 0.0;
};

/// Path-dependence errors from a no-jump trajectory by trapezoid quadrature.
/// The decay term uses the f -> e rate and applies to gf only (0 for ge); the
/// dephasing term uses Gamma_ee (ge) or Gamma_ff (gf). Throws ContractError
/// unless every mode ends at mu = 1 and phi_x = 0 within 1e-4.
PdViolation pd_violation_errors(const NoJumpTrajectory &trajectory, const TargetOp &target,
                                const NoiseRates &rates);

enum class ProtocolVariant { ge, ge_ec, gf_ec };

std::string_view to_string(ProtocolVariant v);
ProtocolVariant variant_from_string(std::string_view name);
Protocol protocol_of(ProtocolVariant v);
bool error_corrected(ProtocolVariant v);

struct ErrorBudget {
    ProtocolVariant variant = ProtocolVariant::ge;
    bool optimized = false;
    bool applicable = true;   // false for an optimized pulse below the limit
    int modes = 0;
    double chi_t = 0.0;
    NoiseRates rates;
    double coherent = 0.0;
    double transmon_decay = 0.0;
    double transmon_dephasing = 0.0;
    double cavity_decay = 0.0;
    double pd_violation_decay = 0.0;
    double pd_violation_dephasing = 0.0;
    int pd_samples = 0;       // targets that entered the path-dependence average

    double total() const {
        return coherent + transmon_decay + transmon_dephasing + cavity_decay + pd_violation_decay +
               pd_violation_dephasing;
    }
};

struct BudgetOptions {
    double optimization_limit = 2.7 * kPi;  // chi T
    int pd_samples = 64;
    double pd_threshold = 1e-10;  // pulses are refined to this error so the endpoints are met
    std::uint64_t seed = 7;
    int workers = 1;
    OptimizerConfig optimizer{};
};

/// Combines the contributions that apply to the variant. `system` must be
/// dimensionless (chi = 1); for gf variants its protocol is switched to gf.
ErrorBudget protocol_budget(ProtocolVariant variant, bool optimized, int modes, double chi_t,
                            const SystemParams &system, const BudgetOptions &options = {});

struct ProtocolOptimum {
    ProtocolVariant variant = ProtocolVariant::ge;
    bool optimized = false;
    double chi_t = 0.0;
    double error = 0.0;
    ErrorBudget budget;
    std::vector<ErrorBudget> scan;  // optimized variants: budget per grid point
};

struct ComparisonOptions {
    BudgetOptions budget{};
    double scan_high = 8.0 * kPi;   // chi T, optimized scans
    double scan_step = 0.25 * kPi;
    double unoptimized_low = kPi;
    double unoptimized_high = 60.0 * kPi;
};

/// The five protocols compared in the error-budget table, each at its best chi T.
/// Order: unoptimized ge, optimized ge, optimized ge + EC, unoptimized gf + EC,
/// optimized gf + EC.
std::vector<ProtocolOptimum> protocol_comparison(int modes, const SystemParams &system,
                                                 const ComparisonOptions &options = {});

std::string protocol_label(ProtocolVariant v, bool optimized);

/// CSV with one row per budget and one column per contribution.
std::string budget_csv(const std::vector<ErrorBudget> &budgets);

}  // namespace snapopt
