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
#include <vector>

#include <Eigen/Dense>

#include "snapopt/dynamics.hpp"
#include "snapopt/errors.hpp"
#include "snapopt/pulse.hpp"

namespace snapopt {

struct OptimizerConfig {
    double eta = 0.5;
    double threshold = 1e-5;      // on the coherent mean overlap error
    int max_iterations = 500;
    int divergence_window = 25;   // iterations without a 1% gain in the best error
    double min_gain = 0.01;
    bool frame_corrections = false;
    EnvelopeSpec envelope{};      // beta is recomputed from T when enabled
    PropagationConfig propagation{};

    // Limit search, in units of pi for chi T.
    double limit_low = 1.0;
    double limit_high = 8.0;
    double limit_grid = 0.25;
    double limit_resolution = 0.01;

    void validate() const;
};

enum class StopReason { converged, stalled, max_iterations, amplitude_collapse, degenerate };

std::string_view to_string(StopReason r);

struct OptimizerReport {
    bool converged = false;
    StopReason reason = StopReason::max_iterations;
    int iterations = 0;            // correction steps applied
    double final_error = 1.0;      // of `pulse`
    CoherentErrorSet final_errors;
    std::vector<double> trace;     // error before each correction, then the final one
    PulseSpec pulse;               // converged pulse, or the best one seen
};

/// Starts from make_unoptimized(target, T, system, config.frame_corrections).
OptimizerReport optimize(const TargetOp &target, double gate_time, const SystemParams &system,
                         const OptimizerConfig &config);

OptimizerReport optimize_from(const PulseSpec &start, const TargetOp &target,
                              const SystemParams &system, const OptimizerConfig &config);

/// Central-difference Jacobian of (eps_L, eps_T, dtheta) of mode n with
/// respect to (lambda_n, omega_n, alpha_n). Rows are errors, columns parameters.
/// Throws PrecisionError when a step leaves no resolvable change.
Eigen::Matrix3d first_order_sensitivities(const PulseSpec &pulse, const TargetOp &target,
                                          const SystemParams &system, int mode_n,
                                          const PropagationConfig &config,
                                          double relative_step = 1e-4);

struct LimitSearch {
    bool found = false;
    double chi_t = 0.0;                                  // smallest converging chi T
    std::vector<std::pair<double, bool>> evaluated;      // (chi T, converged), in call order
};

/// Scans chi T downward from config.limit_high on the coarse grid until the
/// first failure, then bisects to config.limit_resolution. Every scanned grid
/// point above the returned limit converged.
LimitSearch find_optimization_limit(const TargetOp &target, const SystemParams &system,
                                    const OptimizerConfig &config);

struct AveragedLimit {
    std::vector<std::vector<double>> thetas;
    std::vector<LimitSearch> searches;
    double mean = 0.0;     // mean of the per-target limits
    double maximum = 0.0;  // smallest chi T at which every sampled target converges
    int not_found = 0;
};

/// Limits for `samples` targets with theta uniform in [0, 2 pi)^L.
AveragedLimit find_averaged_limit(int modes, const SystemParams &system,
                                  const OptimizerConfig &config, int samples, std::uint64_t seed,
                                  int workers = 1);

/// Uniform random targets in [0, 2 pi)^L from a seeded generator.
std::vector<TargetOp> random_targets(int modes, int count, std::uint64_t seed);

}  // namespace snapopt
