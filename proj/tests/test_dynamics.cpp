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

#include "snapopt/dynamics.hpp"

using namespace snapopt;

namespace {

using Mat2 = Eigen::Matrix2cd;

// exp(-i H h) for a Hermitian 2x2 H, closed form.
Mat2 expm_2x2(const Mat2 &H, double h) {
    const Complex a = 0.5 * (H(0, 0) + H(1, 1));
    const double bz = 0.5 * (H(0, 0) - H(1, 1)).real();
    const Complex bxy = H(0, 1);
    const double b = std::sqrt(bz * bz + std::norm(bxy));
    Mat2 sigma;
    sigma << bz, bxy, std::conj(bxy), -bz;
    Mat2 out = std::cos(b * h) * Mat2::Identity();
    if (b > 0) out -= kI * std::sin(b * h) / b * sigma;
    return std::exp(-kI * a * h) * out;
}

// Midpoint exponential integrator on one block, independent of the RK4 path.
ModeState oracle_block(const PulseSpec &p, const SystemParams &s, int n, int steps) {
    const double T = p.gate_time, h = T / steps;
    const double nn = n * (n - 1.0);
    const double eg = -0.5 * s.kerr * nn;
    const double ex = s.protocol == Protocol::ge ? eg + 0.5 * s.chi_prime * nn : eg;
    Eigen::Vector2cd v(1.0, 0.0);
    for (int k = 0; k < steps; ++k) {
        const double t = (k + 0.5) * h;
        const Complex w = evaluate(p, t) * std::polar(1.0, -s.drive_shift_per_photon() * n * t);
        Mat2 H;
        H << eg, std::conj(w), w, ex;
        v = expm_2x2(H, h) * v;
    }
    return ModeState{v(0), v(1)};
}

PropagationConfig quiet(int steps = 20000) {
    PropagationConfig c;
    c.steps = steps;
    c.audit = false;
    return c;
}

}  // namespace

TEST(Blocks, MatchIndependentIntegrator) {
    SystemParams sys = SystemParams::reference_device().dimensionless();
    sys.rates = {};
    const TargetOp target({0.0, -kPi / 4, kPi / 2});
    const PulseSpec p = make_unoptimized(target, 2.25 * kPi, sys, true, EnvelopeSpec::standard(2.25 * kPi));
    const std::vector<ModeState> got = propagate_modes(p, sys, quiet());
    for (int n = 0; n < 3; ++n) {
        const ModeState want = oracle_block(p, sys, n, 100000);
        EXPECT_LT(std::abs(got[n].ground - want.ground), 1e-8) << n;
        EXPECT_LT(std::abs(got[n].excited - want.excited), 1e-8) << n;
        EXPECT_NEAR(got[n].norm(), 1.0, 1e-10);
    }
}

TEST(Blocks, SingleModeIsExactFlip) {
    const double T = 5.0;
    const PulseSpec p = make_unoptimized(TargetOp({0.7}), T, SystemParams::ideal());
    const ModeState s = propagate_mode(p, SystemParams::ideal(), 0, quiet());
    EXPECT_LT(std::abs(s.ground), 1e-12);
    // Resonant pi pulse with phase alpha: excited amplitude -i e^{i alpha} = e^{i theta}.
    EXPECT_LT(std::abs(s.excited - std::polar(1.0, 0.7)), 1e-12);
}

TEST(Blocks, UndrivenModeOnlyPicksUpPhase) {
    SystemParams sys = SystemParams::ideal();
    sys.kerr = 0.01;
    PulseSpec p = make_unoptimized(TargetOp({0.0, 0.0, 0.0}), 4.0, sys);
    for (ModeDrive &m : p.modes) m.lambda = 1e-300;
    const ModeState s = propagate_mode(p, sys, 2, quiet());
    EXPECT_LT(std::abs(s.ground - std::polar(1.0, 0.01 * 4.0)), 1e-12);
    EXPECT_LT(std::abs(s.excited), 1e-12);
    EXPECT_THROW(propagate_mode(p, sys, 3, quiet()), DomainError);
}

TEST(Blocks, AgreeWithDensePropagation) {
    for (Protocol proto : {Protocol::ge, Protocol::gf}) {
        SystemParams sys = SystemParams::reference_device(proto).dimensionless();
        sys.rates = {};
        const TargetOp target({0.3, -1.2, 2.0});
        const PulseSpec p = make_unoptimized(target, 3 * kPi, sys, true);
        const HilbertLayout layout = HilbertLayout::with_headroom(sys.transmon_levels(), 3);
        std::mt19937_64 rng(11);
        std::normal_distribution<double> gauss;
        CVector c = CVector::Zero(layout.dim());
        for (int n = 0; n < 3; ++n) c(layout.index(Level::g, n)) = Complex(gauss(rng), gauss(rng));
        c.normalize();
        const QuantumState dense = propagate_state(p, sys, QuantumState(layout, c), quiet());
        const std::vector<ModeState> blocks = propagate_modes(p, sys, quiet());
        CVector expect = CVector::Zero(layout.dim());
        for (int n = 0; n < 3; ++n) {
            const Complex cn = c(layout.index(Level::g, n));
            expect(layout.index(Level::g, n)) = cn * blocks[n].ground;
            expect(layout.index(sys.driven_level(), n)) = cn * blocks[n].excited;
        }
        EXPECT_LT((dense.amplitudes - expect).cwiseAbs().maxCoeff(), 1e-10);
    }
}

TEST(Audit, CoarseGridRaises) {
    const PulseSpec p = make_unoptimized(TargetOp({0, 1, 2, 3}), 300 * kPi, SystemParams::ideal());
    PropagationConfig c;
    c.steps = 1000;
    EXPECT_THROW(propagate_modes(p, SystemParams::ideal(), c), PrecisionError);
    const PulseSpec q = make_unoptimized(TargetOp({0, 1, 2, 3}), 3 * kPi, SystemParams::ideal());
    EXPECT_NO_THROW(propagate_modes(q, SystemParams::ideal(), PropagationConfig{}));
}

TEST(Audit, ConfigFields) {
    PropagationConfig c;
    c.steps = 10;
    try {
        c.validate();
        FAIL();
    } catch (const ConfigError &e) {
        EXPECT_EQ(e.field(), "propagation.steps");
    }
    c = {};
    c.trajectory_samples = 1;
    EXPECT_THROW(c.validate(), ConfigError);
    c = {};
    c.max_step = 0.01;
    EXPECT_EQ(c.steps_for(3.0), 1000);
    EXPECT_EQ(c.steps_for(30.0), 3000);
}

TEST(Trajectory, Endpoints) {
    const TargetOp target({0.0, kPi, 0.5});
    const double T = 3.25 * kPi;
    const PulseSpec p = make_unoptimized(target, T, SystemParams::ideal());
    PropagationConfig c = quiet();
    c.trajectory_samples = 65;
    const NoJumpTrajectory tr = record_trajectory(p, SystemParams::ideal(), target, c);
    ASSERT_EQ(tr.time.size(), 65u);
    EXPECT_EQ(tr.time.front(), 0.0);
    EXPECT_EQ(tr.time.back(), T);
    const std::vector<ModeState> finals = propagate_modes(p, SystemParams::ideal(), c);
    for (int n = 0; n < 3; ++n) {
        EXPECT_EQ(tr.modes[n].mu.front(), 0.0);
        EXPECT_EQ(tr.modes[n].phi_g.front(), 0.0);
        EXPECT_NEAR(tr.modes[n].mu.back(), std::norm(finals[n].excited), 1e-12);
        for (double mu : tr.modes[n].mu) EXPECT_TRUE(mu >= 0.0 && mu <= 1.0);
    }
    EXPECT_THROW(record_trajectory(p, SystemParams::ideal(), TargetOp({0.0}), c), ContractError);
}

TEST(Ideal, FinalStateAndFlip) {
    const HilbertLayout layout(3, 5, 2);
    const TargetOp target({0.0, 1.0});
    const std::vector<Complex> c{Complex(0.6), Complex(0.0, 0.8)};
    const QuantumState f = ideal_final_state(target, c, Level::f, Protocol::gf, layout);
    EXPECT_LT(std::abs(f.amplitudes(layout.index(Level::f, 1)) - Complex(0, 0.8) * std::polar(1.0, 1.0)), 1e-15);
    const QuantumState g = apply_ideal_flip(f, Level::f);
    EXPECT_LT(std::abs(g.amplitudes(layout.index(Level::g, 0)) - 0.6), 1e-15);
    EXPECT_EQ(g.amplitudes(layout.index(Level::f, 0)), Complex(0.0));
    EXPECT_THROW(ideal_final_state(target, c, Level::f, Protocol::ge, layout), ContractError);
    EXPECT_THROW(ideal_final_state(target, std::vector<Complex>{1.0}, Level::g, Protocol::ge, layout),
                 ContractError);
    EXPECT_THROW(apply_ideal_flip(f, Level::g), ContractError);
}
