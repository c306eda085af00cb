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

#include "snapopt/errors.hpp"

#include <cmath>
#include <random>
#include <vector>

namespace snapopt {

ModeError extract_mode_error(const ModeState &state, double theta) {
    if (std::abs(state.excited) < 1e-9) {
        throw DegenerateStateError("extract_errors: driven-level amplitude vanishes, phase undefined");
    }
    const Complex eps = -2.0 * state.ground;
    ModeError out;
    out.dtheta = wrap_phase(std::arg(state.excited) - theta);
    const Complex rotated = eps * std::polar(1.0, -out.dtheta);
    out.eps_L = rotated.real();
    out.eps_T = rotated.imag();
    return out;
}

CoherentErrorSet extract_errors(std::span<const ModeState> finals, const TargetOp &target) {
    if (static_cast<int>(finals.size()) != target.modes()) {
        throw ContractError("extract_errors: state count differs from target mode count");
    }
    CoherentErrorSet set;
    for (std::size_t n = 0; n < finals.size(); ++n) {
        set.modes.push_back(extract_mode_error(finals[n], target.theta(n)));
    }
    return set;
}

ModeState state_from_error(const ModeError &error, double theta) {
    const Complex eps = error.eps();
    const double rest = 1.0 - std::norm(eps) / 4.0;
    if (rest < 0.0) throw DomainError("state_from_error: |eps| exceeds 2");
    return ModeState{-0.5 * eps, std::polar(std::sqrt(rest), theta + error.dtheta)};
}

BlochVector bloch_vector(const ModeState &state) {
    // sigma_x = |x><g| + h.c., sigma_y = i|x><g| - i|g><x|.
    const Complex z = std::conj(state.excited) * state.ground;
    return BlochVector{2.0 * z.real(), -2.0 * z.imag(), std::norm(state.ground) - std::norm(state.excited)};
}

LambertPoint lambert_projection(const BlochVector &bloch, double alpha) {
    const double gap = 1.0 - bloch.z;
    if (!(gap > 1e-15)) throw DomainError("lambert_projection: point at the projection pole");
    const double scale = std::sqrt(2.0 / gap);
    const double c = std::cos(alpha);
    const double s = std::sin(alpha);
    return LambertPoint{scale * (c * bloch.x + s * bloch.y), scale * (-s * bloch.x + c * bloch.y)};
}

std::string_view to_string(Averaging a) { return a == Averaging::exact ? "exact" : "monte_carlo"; }

namespace {

/// Fourth moment E[c_n c_n'* c_m* c_m'] = sum over the allowed pairings / norm.
struct MomentRule {
    double norm;
    bool third_pairing;  // real vectors add the (n = m', n' = m) pairing
};

MomentRule moments(int L, bool real) {
    return real ? MomentRule{static_cast<double>(L) * (L + 2), true}
                : MomentRule{static_cast<double>(L) * (L + 1), false};
}

std::vector<Level> outcomes_for(Protocol protocol, bool ec) {
    if (protocol == Protocol::ge) {
        return ec ? std::vector<Level>{Level::g, Level::e} : std::vector<Level>{Level::e};
    }
    return ec ? std::vector<Level>{Level::g, Level::e, Level::f} : std::vector<Level>{Level::f};
}

Complex target_phase(Level outcome, const TargetOp &target, int n) {
    return outcome == Level::g ? Complex(1.0) : std::polar(1.0, target.theta(n));
}

void store(FidelityReport &r, Level outcome, double value) {
    if (outcome == Level::g) r.f_g = value;
    if (outcome == Level::e) r.f_e = value;
    if (outcome == Level::f) r.f_f = value;
}

class AmplitudeSampler {
   public:
    AmplitudeSampler(std::uint64_t seed, bool real) : rng_(seed), real_(real) {}

    std::vector<Complex> draw(int L) {
        std::vector<Complex> c(L);
        double norm2 = 0.0;
        for (Complex &v : c) {
            v = real_ ? Complex(gauss_(rng_), 0.0) : Complex(gauss_(rng_), gauss_(rng_));
            norm2 += std::norm(v);
        }
        const double scale = 1.0 / std::sqrt(norm2);
        for (Complex &v : c) v *= scale;
        return c;
    }

   private:
    std::mt19937_64 rng_;
    std::normal_distribution<double> gauss_{0.0, 1.0};
    bool real_;
};

/// Generic Monte Carlo driver: `overlap(c, outcome)` returns <T|rho(c)|T>.
template <class Fn>
void monte_carlo(FidelityReport &r, const std::vector<Level> &outs, int L, const FidelityOptions &o,
                 Fn overlap) {
    if (o.samples < 2) throw ContractError("averaged_fidelity: Monte Carlo needs at least 2 samples");
    AmplitudeSampler sampler(o.seed, o.real_amplitudes);
    std::vector<double> sum(outs.size(), 0.0);
    double total = 0.0;
    double total2 = 0.0;
    for (std::size_t s = 0; s < o.samples; ++s) {
        const std::vector<Complex> c = sampler.draw(L);
        double f = 0.0;
        for (std::size_t k = 0; k < outs.size(); ++k) {
            const double v = overlap(c, outs[k]);
            sum[k] += v;
            f += v;
        }
        total += f;
        total2 += f * f;
    }
    const double n = static_cast<double>(o.samples);
    for (std::size_t k = 0; k < outs.size(); ++k) store(r, outs[k], sum[k] / n);
    r.fidelity = total / n;
    const double var = std::max(0.0, total2 / n - r.fidelity * r.fidelity);
    r.standard_error = std::sqrt(var / (n - 1.0));
    r.samples = o.samples;
    r.seed = o.seed;
}

FidelityReport base_report(Protocol protocol, const FidelityOptions &o, bool coherent) {
    FidelityReport r;
    r.coherent_only = coherent;
    r.error_corrected = o.error_corrected;
    r.real_amplitudes = o.real_amplitudes;
    r.protocol = protocol;
    r.averaging = o.averaging;
    return r;
}

}  // namespace

FidelityReport averaged_fidelity(std::span<const ModeState> finals, const TargetOp &target,
                                 Protocol protocol, const FidelityOptions &options) {
    const int L = target.modes();
    if (static_cast<int>(finals.size()) != L) {
        throw ContractError("averaged_fidelity: state count differs from target mode count");
    }
    const Level driven = protocol == Protocol::ge ? Level::e : Level::f;
    const std::vector<Level> outs = outcomes_for(protocol, options.error_corrected);
    FidelityReport r = base_report(protocol, options, true);

    // Per-mode overlap <target_j n| final n>; zero for levels the coherent
    // evolution never populates.
    auto overlap_of = [&](Level j, int n) -> Complex {
        if (j == Level::g) return finals[n].ground;
        if (j == driven) return std::conj(target_phase(j, target, n)) * finals[n].excited;
        return 0.0;
    };

    if (options.averaging == Averaging::exact) {
        const MomentRule rule = moments(L, options.real_amplitudes);
        for (Level j : outs) {
            double diag = 0.0;
            Complex sum = 0.0;
            for (int n = 0; n < L; ++n) {
                const Complex ov = overlap_of(j, n);
                diag += std::norm(ov);
                sum += ov;
            }
            const double value = ((rule.third_pairing ? 2.0 : 1.0) * diag + std::norm(sum)) / rule.norm;
            store(r, j, value);
            r.fidelity += value;
        }
        return r;
    }
    monte_carlo(r, outs, L, options, [&](const std::vector<Complex> &c, Level j) {
        Complex amp = 0.0;
        for (int n = 0; n < L; ++n) amp += std::norm(c[n]) * overlap_of(j, n);
        return std::norm(amp);
    });
    return r;
}

FidelityReport averaged_fidelity(const ProcessMap &map, const TargetOp &target, Protocol protocol,
                                 const FidelityOptions &options) {
    const int L = target.modes();
    if (map.modes != L || static_cast<int>(map.outputs.size()) != L * L) {
        throw ContractError("averaged_fidelity: process map size differs from target mode count");
    }
    const std::vector<Level> outs = outcomes_for(protocol, options.error_corrected);
    for (Level j : outs) {
        if (static_cast<int>(j) >= map.layout.transmon_levels()) {
            throw ContractError("averaged_fidelity: outcome level missing from process-map layout");
        }
    }
    const HilbertLayout &layout = map.layout;
    FidelityReport r = base_report(protocol, options, false);

    // <j m| E(|g n><g n'|) |j m'> with target phases folded in.
    auto element = [&](Level j, int n, int n2, int m, int m2) {
        return std::conj(target_phase(j, target, m)) * target_phase(j, target, m2) *
               map.at(n, n2)(layout.index(j, m), layout.index(j, m2));
    };

    if (options.averaging == Averaging::exact) {
        const MomentRule rule = moments(L, options.real_amplitudes);
        for (Level j : outs) {
            Complex acc = 0.0;
            for (int n = 0; n < L; ++n)
                for (int m = 0; m < L; ++m) acc += element(j, n, n, m, m);
            for (int n = 0; n < L; ++n)
                for (int n2 = 0; n2 < L; ++n2) {
                    acc += element(j, n, n2, n, n2);
                    if (rule.third_pairing) acc += element(j, n, n2, n2, n);
                }
            const double value = acc.real() / rule.norm;
            store(r, j, value);
            r.fidelity += value;
        }
        return r;
    }
    monte_carlo(r, outs, L, options, [&](const std::vector<Complex> &c, Level j) {
        Complex acc = 0.0;
        for (int n = 0; n < L; ++n)
            for (int n2 = 0; n2 < L; ++n2) {
                const Complex w = c[n] * std::conj(c[n2]);
                for (int m = 0; m < L; ++m)
                    for (int m2 = 0; m2 < L; ++m2)
                        acc += w * std::conj(c[m]) * c[m2] * element(j, n, n2, m, m2);
            }
        return acc.real();
    });
    return r;
}

double coherent_overlap_error(std::span<const ModeState> finals, const TargetOp &target) {
    return averaged_fidelity(finals, target, Protocol::ge).error();
}

}  // namespace snapopt
