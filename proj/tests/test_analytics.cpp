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

#include <random>

#include "snapopt/analytics.hpp"

using namespace snapopt;

namespace {

NoJumpTrajectory synthetic(int modes, int samples, double T, const std::vector<double> &phase_rate) {
    NoJumpTrajectory tr;
    for (int k = 0; k < samples; ++k) tr.time.push_back(T * k / (samples - 1));
    for (int n = 0; n < modes; ++n) {
        ModeTrajectory m;
        for (double t : tr.time) {
            m.mu.push_back(std::pow(std::sin(kPi * t / (2 * T)), 2));
            m.phi_g.push_back(0.0);
            // Phase excursion that returns to zero at both ends.
            m.phi_x.push_back(phase_rate[n] * std::sin(kPi * t / T));
        }
        tr.modes.push_back(std::move(m));
    }
    return tr;
}

}  // namespace

TEST(ClosedForm, GapSum) {
    EXPECT_EQ(inverse_square_gap_sum(1), 0.0);
    EXPECT_EQ(inverse_square_gap_sum(2), 2.0);
    EXPECT_NEAR(inverse_square_gap_sum(4), 6.0 + 1.0 + 2.0 / 9.0, 1e-15);
    EXPECT_THROW(inverse_square_gap_sum(0), ConfigError);
}

TEST(ClosedForm, WorkedValues) {
    EXPECT_EQ(coherent_error_avg(1, 10 * kPi, false), 0.0);
    EXPECT_NEAR(coherent_error_avg(2, 10 * kPi, false), 7.5e-3, 1e-15);
    // EC removes the g-outcome share 5/(4 L (L+1)).
    EXPECT_NEAR(coherent_error_avg(2, 10 * kPi, true), 7.5e-3 - 5.0 / 24.0 * 0.02, 1e-15);
    EXPECT_NEAR(transmon_decay_error(3, 0.01, Protocol::ge, false), 4.375e-3, 1e-15);
    EXPECT_NEAR(transmon_decay_error(3, 0.01, Protocol::ge, true), 2.5e-3, 1e-15);
    EXPECT_EQ(transmon_decay_error(4, 0.01, Protocol::gf, true), 0.0);
    EXPECT_NEAR(transmon_decay_error(4, 0.01, Protocol::gf, false), 5e-3, 1e-15);
    EXPECT_NEAR(dephasing_error(0.01, false), 1.25e-3, 1e-15);
    EXPECT_EQ(dephasing_error(0.01, true), 0.0);
    EXPECT_EQ(cavity_decay_error(1, 0.01, false), 0.0);
    EXPECT_EQ(cavity_decay_error(1, 0.01, true), 0.0);
    EXPECT_NEAR(cavity_decay_error(4, 0.01, false), 3.0 * 17.0 / 40.0 * 0.01, 1e-15);
    EXPECT_NEAR(cavity_decay_error(4, 0.01, true), (51.0 - 3.0) / 40.0 * 0.01, 1e-15);
}

TEST(ClosedForm, InverseSquareScaling) {
    const double a = coherent_error_avg(3, 10 * kPi, false), b = coherent_error_avg(3, 100 * kPi, false);
    EXPECT_NEAR(std::log(b / a) / std::log(10.0), -2.0, 1e-12);
}

TEST(ClosedForm, SimulatedCoherentErrorTwoModes) {
    // Unoptimized pulse averaged over random targets and one 2 pi window of chi T.
    const SystemParams sys = SystemParams::ideal();
    const std::vector<TargetOp> targets = random_targets(2, 64, 99);
    PropagationConfig c;
    c.audit = false;
    double sum = 0.0;
    int count = 0;
    for (int k = 0; k < 16; ++k) {
        const double chi_t = 10 * kPi + 2 * kPi * k / 16.0;
        for (const TargetOp &t : targets) {
            const PulseSpec p = make_unoptimized(t, chi_t, sys);
            const std::vector<ModeState> f = propagate_modes(p, sys, c);
            sum += coherent_overlap_error(f, t) / coherent_error_avg(2, chi_t, false);
            ++count;
        }
    }
    EXPECT_NEAR(sum / count, 1.0, 0.1);
}

TEST(PathDependence, IdenticalTrajectoriesGiveZero) {
    const NoJumpTrajectory tr = synthetic(3, 257, 7.0, {0.0, 0.0, 0.0});
    const TargetOp target({0.0, 1.0, 2.0});
    NoiseRates r;
    r.decay_fe = 0.01;
    r.dephase_ee = 0.01;
    r.dephase_ff = 0.01;
    for (Protocol proto : {Protocol::ge, Protocol::gf}) {
        NoJumpTrajectory t = tr;
        t.protocol = proto;
        const PdViolation v = pd_violation_errors(t, target, r);
        EXPECT_NEAR(v.decay, 0.0, 1e-15);
        EXPECT_NEAR(v.dephasing, 0.0, 1e-12);
    }
}

TEST(PathDependence, SingleModeGivesZero) {
    NoJumpTrajectory tr = synthetic(1, 129, 5.0, {0.7});
    tr.protocol = Protocol::gf;
    NoiseRates r;
    r.decay_fe = 0.02;
    r.dephase_ff = 0.02;
    const PdViolation v = pd_violation_errors(tr, TargetOp({0.3}), r);
    EXPECT_NEAR(v.decay, 0.0, 1e-15);
    EXPECT_NEAR(v.dephasing, 0.0, 1e-15);
}

TEST(PathDependence, DivergingPhasesCost) {
    NoJumpTrajectory tr = synthetic(2, 513, 5.0, {0.0, 1.0});
    tr.protocol = Protocol::gf;
    NoiseRates r;
    r.decay_fe = 0.02;
    const PdViolation v = pd_violation_errors(tr, TargetOp({0.0, 0.0}), r);
    // Oracle: (r/6) * integral of mu (1 - cos(sin(pi t / T))) over [0, T] on a fine grid.
    double ref = 0.0;
    const int K = 200000;
    for (int k = 0; k <= K; ++k) {
        const double t = 5.0 * k / K;
        const double w = (k == 0 || k == K) ? 0.5 : 1.0;
        ref += w * std::pow(std::sin(kPi * t / 10.0), 2) * (1.0 - std::cos(std::sin(kPi * t / 5.0)));
    }
    ref *= 5.0 / K * 0.02 * 2.0 / 6.0;
    EXPECT_GT(v.decay, 0.0);
    EXPECT_NEAR(v.decay, ref, 1e-4 * ref);
}

TEST(PathDependence, EndpointContract) {
    NoJumpTrajectory tr = synthetic(2, 33, 5.0, {0.0, 0.0});
    tr.modes[1].mu.back() = 0.99;
    EXPECT_THROW(pd_violation_errors(tr, TargetOp({0.0, 0.0}), NoiseRates{}), ContractError);
    tr = synthetic(2, 33, 5.0, {0.0, 0.0});
    tr.modes[0].phi_x.back() = 0.01;
    EXPECT_THROW(pd_violation_errors(tr, TargetOp({0.0, 0.0}), NoiseRates{}), ContractError);
    EXPECT_THROW(pd_violation_errors(tr, TargetOp({0.0}), NoiseRates{}), ContractError);
}

TEST(Budget, Composition) {
    const SystemParams quiet = SystemParams::ideal();
    const ErrorBudget b = protocol_budget(ProtocolVariant::ge, false, 4, 6.5 * kPi, quiet);
    EXPECT_EQ(b.total(), coherent_error_avg(4, 6.5 * kPi, false));
    const ErrorBudget below = protocol_budget(ProtocolVariant::ge, true, 4, 2.0 * kPi, quiet);
    EXPECT_FALSE(below.applicable);

    SystemParams dev = SystemParams::reference_device().dimensionless();
    const double T = 6.5 * kPi;
    const ErrorBudget u = protocol_budget(ProtocolVariant::ge, false, 4, T, dev);
    EXPECT_NEAR(u.transmon_decay, transmon_decay_error(4, dev.rates.decay_eg * T, Protocol::ge, false), 1e-15);
    EXPECT_NEAR(u.transmon_dephasing, dephasing_error(dev.rates.dephase_ee * T, false), 1e-15);
    EXPECT_NEAR(u.cavity_decay, cavity_decay_error(4, dev.rates.cavity * T, false), 1e-15);
    // Optimized without EC: no path-dependence terms and no coherent error.
    const ErrorBudget o = protocol_budget(ProtocolVariant::ge, true, 4, 3 * kPi, dev);
    EXPECT_TRUE(o.applicable);
    EXPECT_EQ(o.coherent, 0.0);
    EXPECT_EQ(o.pd_samples, 0);
}

TEST(Budget, Labels) {
    EXPECT_EQ(variant_from_string("gf_ec"), ProtocolVariant::gf_ec);
    EXPECT_THROW(variant_from_string("fg"), ConfigError);
    EXPECT_EQ(protocol_label(ProtocolVariant::ge_ec, true), "optimized ge with error correction");
    const std::string csv = budget_csv({ErrorBudget{}});
    EXPECT_EQ(csv.substr(0, csv.find('\n')),
              "protocol,optimized,applicable,modes,chiT_over_pi,coherent,transmon_decay,transmon_dephasing,"
              "cavity_decay,pd_violation_decay,pd_violation_dephasing,pd_samples,total");
}
