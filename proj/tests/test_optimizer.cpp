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


#include <gtest/gtest.h>

#include "snapopt/optimizer.hpp"

using namespace snapopt;

namespace {

OptimizerConfig quick() {
    OptimizerConfig c;
    c.propagation.steps = 8000;
    return c;
}

}  // namespace

TEST(Optimize, SingleModeIsImmediate) {
    for (double chi_t : {kPi, 2.5 * kPi, 7 * kPi}) {
        const OptimizerReport r = optimize(TargetOp({1.3}), chi_t, SystemParams::ideal(), quick());
        EXPECT_TRUE(r.converged);
        EXPECT_LE(r.iterations, 2);
        EXPECT_EQ(r.pulse.modes.size(), 1u);
    }
}

TEST(Optimize, ThreeModeTarget) {
    const TargetOp target({0.0, kPi, 0.0});
    const double T = 3.25 * kPi;
    const SystemParams sys = SystemParams::ideal();
    const OptimizerConfig cfg = quick();
    PropagationConfig plain = cfg.propagation;
    plain.audit = false;
    const std::vector<ModeState> start = propagate_modes(make_unoptimized(target, T, sys), sys, plain);
    EXPECT_GT(coherent_overlap_error(start, target), 1e-3);

    const OptimizerReport r = optimize(target, T, sys, cfg);
    ASSERT_TRUE(r.converged) << to_string(r.reason);
    EXPECT_LT(r.final_error, 1e-5);
    EXPECT_EQ(r.pulse.modes.size(), 3u);
    EXPECT_EQ(r.trace.size(), static_cast<std::size_t>(r.iterations) + 1);
    for (std::size_t k = 2; k < r.trace.size(); ++k) EXPECT_LE(r.trace[k], r.trace[k - 1] * (1 + 1e-9)) << k;

    // Restarting from the converged pulse is a fixed point.
    const OptimizerReport again = optimize_from(r.pulse, target, sys, cfg);
    EXPECT_TRUE(again.converged);
    EXPECT_LE(again.iterations, 1);
    for (int n = 0; n < 3; ++n) {
        EXPECT_NEAR(again.pulse.modes[n].lambda, r.pulse.modes[n].lambda, 1e-3 * r.pulse.modes[n].lambda);
        EXPECT_NEAR(again.pulse.modes[n].omega, r.pulse.modes[n].omega, 1e-3);
        EXPECT_EQ(again.pulse.modes[n].omega_ref, r.pulse.modes[n].omega_ref);
    }
}

TEST(Optimize, FailureIsReportedNotThrown) {
    OptimizerConfig cfg = quick();
    cfg.max_iterations = 3;
    const OptimizerReport r = optimize(TargetOp({0.0, 1.0, 2.0, 3.0}), 1.2 * kPi, SystemParams::ideal(), cfg);
    EXPECT_FALSE(r.converged);
    EXPECT_NE(r.reason, StopReason::converged);
    EXPECT_EQ(r.pulse.modes.size(), 4u);
}

TEST(Sensitivities, LargeGateTimeJacobian) {
    const double T = 50 * kPi;
    const TargetOp target({0.4});
    const PulseSpec p = make_unoptimized(target, T, SystemParams::ideal());
    PropagationConfig c;
    c.audit = false;
    const Eigen::Matrix3d J = first_order_sensitivities(p, target, SystemParams::ideal(), 0, c);
    const Eigen::Vector3d diag(2 * T, -2 * T / kPi, 1.0);
    for (int i = 0; i < 3; ++i) {
        EXPECT_NEAR(J(i, i) / diag(i), 1.0, 0.01) << i;
        for (int j = 0; j < 3; ++j) {
            if (i != j) EXPECT_LE(std::abs(J(i, j)) / std::abs(diag(i)), 0.05) << i << j;
        }
    }
    EXPECT_NEAR(J(2, 2), 1.0, 1e-9);
    EXPECT_THROW(first_order_sensitivities(p, target, SystemParams::ideal(), 1, c), DomainError);
}

TEST(Limit, SingleModeAtLowerEdge) {
    OptimizerConfig cfg = quick();
    cfg.limit_high = 2.0;
    const LimitSearch s = find_optimization_limit(TargetOp({0.9}), SystemParams::ideal(), cfg);
    ASSERT_TRUE(s.found);
    EXPECT_LE(s.chi_t, kPi * 1.01);
}

TEST(Config, Validation) {
    OptimizerConfig c;
    c.eta = 0.0;
    try {
        c.validate();
        FAIL();
    } catch (const ConfigError &e) {
        EXPECT_EQ(e.field(), "optimizer.eta");
    }
    c.eta = 1.5;
    EXPECT_THROW(c.validate(), ConfigError);
    c = {};
    c.threshold = 0.0;
    EXPECT_THROW(c.validate(), ConfigError);
    c = {};
    c.limit_resolution = 1.0;
    EXPECT_THROW(c.validate(), ConfigError);
}

TEST(Targets, SeededAndInRange) {
    const std::vector<TargetOp> a = random_targets(4, 5, 42), b = random_targets(4, 5, 42);
    for (int i = 0; i < 5; ++i) {
        EXPECT_EQ(a[i].theta(), b[i].theta());
        for (double t : a[i].theta()) EXPECT_TRUE(t > -kPi && t <= kPi);
    }
}
