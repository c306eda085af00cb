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

#include "snapopt/errors.hpp"

using namespace snapopt;

namespace {

std::vector<ModeState> states_for(const std::vector<ModeError> &errs, const TargetOp &target) {
    std::vector<ModeState> out;
    for (std::size_t n = 0; n < errs.size(); ++n) out.push_back(state_from_error(errs[n], target.theta(n)));
    return out;
}

}  // namespace

TEST(Extract, RoundTrip) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> small(-0.6, 0.6), phase(-3.1, 3.1);
    for (int k = 0; k < 500; ++k) {
        const ModeError e{small(rng), small(rng), phase(rng)};
        const double theta = phase(rng);
        const ModeError back = extract_mode_error(state_from_error(e, theta), theta);
        EXPECT_NEAR(back.eps_L, e.eps_L, 1e-12);
        EXPECT_NEAR(back.eps_T, e.eps_T, 1e-12);
        EXPECT_NEAR(back.dtheta, e.dtheta, 1e-12);
    }
}

TEST(Extract, DirectInversion) {
    const double theta = 0.8;
    const ModeState s{Complex(-0.1), std::polar(std::sqrt(0.99), theta)};
    const ModeError e = extract_mode_error(s, theta);
    EXPECT_NEAR(e.eps_L, 0.2, 1e-15);
    EXPECT_NEAR(e.eps_T, 0.0, 1e-15);
    EXPECT_NEAR(e.dtheta, 0.0, 1e-15);
    const ModeError zero = extract_mode_error(ModeState{0.0, std::polar(1.0, theta)}, theta);
    EXPECT_EQ(zero.eps_L, 0.0);
    EXPECT_EQ(zero.eps_T, 0.0);
    EXPECT_THROW(extract_mode_error(ModeState{1.0, 1e-10}, 0.0), DegenerateStateError);
    EXPECT_THROW(extract_errors(std::vector<ModeState>(2), TargetOp({0.0})), ContractError);
}

TEST(Lambert, Examples) {
    const LambertPoint south = lambert_projection({0, 0, -1}, 0.4);
    EXPECT_EQ(south.X, 0.0);
    EXPECT_EQ(south.Y, 0.0);
    const LambertPoint eq = lambert_projection({1, 0, 0}, 0.0);
    EXPECT_NEAR(eq.X, std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(eq.Y, 0.0, 1e-15);
    EXPECT_THROW(lambert_projection({0, 0, 1}, 0.0), DomainError);
}

TEST(Lambert, TerminalStateGivesTransversalAndLongitudinal) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> phase(-3.1, 3.1);
    for (int k = 0; k < 50; ++k) {
        const ModeError e{0.3, 0.1, phase(rng)};
        const double theta = phase(rng);
        // The projection axis is the drive phase theta + pi/2.
        const LambertPoint p = lambert_projection(bloch_vector(state_from_error(e, theta)), theta + kPi / 2);
        EXPECT_NEAR(p.X, 0.1, 1e-12);
        EXPECT_NEAR(p.Y, 0.3, 1e-12);
    }
}

TEST(Fidelity, ExactTargetIsOne) {
    const TargetOp target({0.1, 2.0, -1.0});
    const std::vector<ModeState> s = states_for(std::vector<ModeError>(3), target);
    EXPECT_NEAR(averaged_fidelity(s, target, Protocol::ge).fidelity, 1.0, 1e-15);
    FidelityOptions ec;
    ec.error_corrected = true;
    const FidelityReport r = averaged_fidelity(s, target, Protocol::ge, ec);
    EXPECT_NEAR(r.f_e, 1.0, 1e-15);
    EXPECT_NEAR(r.f_g, 0.0, 1e-15);
}

TEST(Fidelity, SmallErrorExpansion) {
    const TargetOp target({0.0, 1.0, 2.0, 3.0});
    const std::vector<ModeError> errs{{0.01, -0.02, 0.0}, {0.0, 0.015, 0.0}, {-0.02, 0.0, 0.0}, {0.005, 0.005, 0.0}};
    double sum = 0.0;
    for (const ModeError &e : errs) sum += std::norm(e.eps());
    const double f = averaged_fidelity(states_for(errs, target), target, Protocol::ge).fidelity;
    EXPECT_NEAR(f, 1.0 - sum / (4.0 * 4), 1e-8);
}

TEST(Fidelity, HaarMomentsByMonteCarlo) {
    std::mt19937_64 rng(17);
    std::normal_distribution<double> g;
    const int samples = 1000000;
    double m4 = 0, m4sq = 0, m22 = 0, m22sq = 0;
    for (int s = 0; s < samples; ++s) {
        const Complex a(g(rng), g(rng)), b(g(rng), g(rng));
        const double n = std::norm(a) + std::norm(b);
        const double p0 = std::norm(a) / n, p1 = std::norm(b) / n;
        m4 += p0 * p0;
        m4sq += p0 * p0 * p0 * p0;
        m22 += p0 * p1;
        m22sq += p0 * p1 * p0 * p1;
    }
    m4 /= samples;
    m22 /= samples;
    const double se4 = std::sqrt((m4sq / samples - m4 * m4) / samples);
    const double se22 = std::sqrt((m22sq / samples - m22 * m22) / samples);
    EXPECT_LT(std::abs(m4 - 1.0 / 3.0), 3 * se4);
    EXPECT_LT(std::abs(m22 - 1.0 / 6.0), 3 * se22);
}

TEST(Fidelity, ExactMatchesMonteCarloOnProcessMaps) {
    const HilbertLayout layout(2, 5, 3);
    std::mt19937_64 rng(23);
    std::normal_distribution<double> g;
    const TargetOp target({0.2, -0.7, 1.9});
    for (int trial = 0; trial < 3; ++trial) {
        // E(|gn><gn'|) = |v_n><v_n'| with random v: a linear map of the right shape.
        std::vector<CVector> v;
        for (int n = 0; n < 3; ++n) {
            CVector x(layout.dim());
            for (int i = 0; i < layout.dim(); ++i) x(i) = Complex(g(rng), g(rng));
            v.push_back(x / x.norm());
        }
        ProcessMap map{layout, 3, {}};
        for (int n = 0; n < 3; ++n)
            for (int m = 0; m < 3; ++m) map.outputs.push_back(v[n] * v[m].adjoint());
        for (bool real : {false, true}) {
            FidelityOptions exact;
            exact.error_corrected = true;
            exact.real_amplitudes = real;
            FidelityOptions mc = exact;
            mc.averaging = Averaging::monte_carlo;
            mc.samples = 100000;
            mc.seed = 100 + trial;
            const FidelityReport a = averaged_fidelity(map, target, Protocol::ge, exact);
            const FidelityReport b = averaged_fidelity(map, target, Protocol::ge, mc);
            EXPECT_LT(std::abs(a.fidelity - b.fidelity), 3 * b.standard_error) << trial << real;
            EXPECT_NEAR(a.fidelity, a.f_g + a.f_e, 1e-15);
        }
    }
}

TEST(Fidelity, CoherentAndProcessMapAgree) {
    SystemParams sys = SystemParams::ideal();
    const TargetOp target({0.0, -kPi / 4, kPi / 2});
    const PulseSpec p = make_unoptimized(target, 2.25 * kPi, sys);
    PropagationConfig c;
    c.audit = false;
    const std::vector<ModeState> finals = propagate_modes(p, sys, c);
    const ProcessMap map = propagate_process_map(p, sys, HilbertLayout::with_headroom(2, 3), c);
    for (bool ec : {false, true}) {
        FidelityOptions o;
        o.error_corrected = ec;
        EXPECT_NEAR(averaged_fidelity(finals, target, Protocol::ge, o).fidelity,
                    averaged_fidelity(map, target, Protocol::ge, o).fidelity, 1e-9);
    }
}

TEST(Fidelity, ErrorCorrectedSumBounded) {
    std::mt19937_64 rng(29);
    std::normal_distribution<double> g;
    const TargetOp target({0.5, 1.5, 2.5, -0.5});
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<ModeState> s(4);
        for (ModeState &m : s) {
            m.ground = Complex(g(rng), g(rng));
            m.excited = Complex(g(rng), g(rng));
            const double n = m.norm();
            m.ground /= n;
            m.excited /= n;
        }
        FidelityOptions o;
        o.error_corrected = true;
        const FidelityReport r = averaged_fidelity(s, target, Protocol::ge, o);
        EXPECT_LE(r.fidelity, 1.0 + 1e-9);
        EXPECT_GE(r.f_g, 0.0);
        EXPECT_GE(r.f_e, 0.0);
    }
}

TEST(Fidelity, SizeMismatch) {
    EXPECT_THROW(averaged_fidelity(std::vector<ModeState>(2), TargetOp({0.0}), Protocol::ge), ContractError);
}
