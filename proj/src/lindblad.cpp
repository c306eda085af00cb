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

// Lindblad evolution in the chi frame.
//
// The density matrix is stored as D x D transmon blocks rho_{n n'} for Fock
// pairs (n, n'). Nothing in the generator raises the photon number, so block
// (n, n') is driven only by itself and, through cavity loss, by (n+1, n'+1).

#include <array>
#include <cmath>
#include <sstream>

#include "drive_grid.hpp"
#include "snapopt/dynamics.hpp"

namespace snapopt {

namespace {

using detail::DriveGrid;

template <int D>
using Blk = Eigen::Matrix<Complex, D, D>;

struct BlockSite {
    int n;
    int m;
    int feed;  // index of block (n+1, m+1) or -1
};

template <int D>
struct Generator {
    const DriveGrid *grid = nullptr;
    int driven = 1;
    double chi = 1.0;
    double chi_f = 1.0;
    NoiseRates rates;
    std::vector<std::array<double, D>> energy;  // per Fock n
    std::vector<std::vector<Complex>> drive;    // per Fock n, per grid sample

    Blk<D> hamiltonian(int n, int j) const {
        Blk<D> h = Blk<D>::Zero();
        for (int i = 0; i < D; ++i) h(i, i) = energy[n][i];
        h(driven, 0) = drive[n][j];
        h(0, driven) = std::conj(drive[n][j]);
        return h;
    }

    void rhs(const std::vector<BlockSite> &sites, const std::vector<Blk<D>> &rho, int j,
             std::vector<Blk<D>> &out) const {
        const double t = grid->time(j);
        std::array<Complex, D> frame;
        frame[0] = 1.0;
        frame[1] = std::polar(1.0, chi * t);
        if constexpr (D == 3) frame[2] = std::polar(1.0, chi_f * t);

        for (std::size_t b = 0; b < sites.size(); ++b) {
            const BlockSite &s = sites[b];
            const Blk<D> &r = rho[b];
            Blk<D> d = -kI * (hamiltonian(s.n, j) * r - r * hamiltonian(s.m, j));

            if (rates.cavity > 0.0) {
                d -= 0.5 * rates.cavity * (s.n + s.m) * r;
                if (s.feed >= 0) {
                    const Blk<D> &f = rho[s.feed];
                    const double w = rates.cavity * std::sqrt((s.n + 1.0) * (s.m + 1.0));
                    for (int i = 0; i < D; ++i)
                        for (int k = 0; k < D; ++k)
                            d(i, k) += w * frame[i] * std::conj(frame[k]) * f(i, k);
                }
            }
            const int dn = s.n - s.m;
            if (rates.decay_eg > 0.0) {
                const double g = rates.decay_eg;
                d(0, 0) += g * std::polar(1.0, chi * dn * t) * r(1, 1);
                d.row(1) -= 0.5 * g * r.row(1);
                d.col(1) -= 0.5 * g * r.col(1);
            }
            if (rates.dephase_ee > 0.0) {
                const double g = 0.5 * rates.dephase_ee;
                for (int i = 0; i < D; ++i) {
                    if (i == 1) continue;
                    d(i, 1) -= g * r(i, 1);
                    d(1, i) -= g * r(1, i);
                }
            }
            if constexpr (D == 3) {
                if (rates.decay_fe > 0.0) {
                    const double g = rates.decay_fe;
                    d(1, 1) += g * std::polar(1.0, (chi_f - chi) * dn * t) * r(2, 2);
                    d.row(2) -= 0.5 * g * r.row(2);
                    d.col(2) -= 0.5 * g * r.col(2);
                }
                if (rates.dephase_ff > 0.0) {
                    const double g = 0.5 * rates.dephase_ff;
                    for (int i = 0; i < 2; ++i) {
                        d(i, 2) -= g * r(i, 2);
                        d(2, i) -= g * r(2, i);
                    }
                }
            }
            out[b] = d;
        }
    }

    std::vector<Blk<D>> integrate(const std::vector<BlockSite> &sites, std::vector<Blk<D>> rho,
                                  int stride) const {
        const int steps = static_cast<int>((grid->omega.size() - 1) / (2 * stride));
        const double h = 2.0 * stride * grid->spacing;
        const std::size_t nb = sites.size();
        std::vector<Blk<D>> k1(nb), k2(nb), k3(nb), k4(nb), tmp(nb);
        for (int k = 0; k < steps; ++k) {
            const int j0 = 2 * k * stride;
            const int jm = j0 + stride;
            const int j1 = j0 + 2 * stride;
            rhs(sites, rho, j0, k1);
            for (std::size_t b = 0; b < nb; ++b) tmp[b] = rho[b] + 0.5 * h * k1[b];
            rhs(sites, tmp, jm, k2);
            for (std::size_t b = 0; b < nb; ++b) tmp[b] = rho[b] + 0.5 * h * k2[b];
            rhs(sites, tmp, jm, k3);
            for (std::size_t b = 0; b < nb; ++b) tmp[b] = rho[b] + h * k3[b];
            rhs(sites, tmp, j1, k4);
            for (std::size_t b = 0; b < nb; ++b) {
                rho[b] += h / 6.0 * (k1[b] + 2.0 * k2[b] + 2.0 * k3[b] + k4[b]);
            }
        }
        return rho;
    }
};

template <int D>
Generator<D> make_generator(const SystemParams &system, const DriveGrid &grid, int fock_levels) {
    Generator<D> gen;
    gen.grid = &grid;
    gen.driven = static_cast<int>(system.driven_level());
    gen.chi = system.chi;
    gen.chi_f = system.chi_f;
    gen.rates = system.rates;
    for (int n = 0; n < fock_levels; ++n) {
        const detail::BlockEnergies en = detail::block_energies(system, n);
        std::array<double, D> e{};
        e[0] = en.g;
        e[1] = en.e;
        if constexpr (D == 3) e[2] = en.f;
        gen.energy.push_back(e);
        gen.drive.push_back(detail::block_drive(grid, system.drive_shift_per_photon(), n));
    }
    return gen;
}

std::vector<BlockSite> link(std::vector<BlockSite> sites) {
    for (BlockSite &s : sites) {
        s.feed = -1;
        for (std::size_t k = 0; k < sites.size(); ++k) {
            if (sites[k].n == s.n + 1 && sites[k].m == s.m + 1) s.feed = static_cast<int>(k);
        }
    }
    return sites;
}

template <int D>
CMatrix assemble(const HilbertLayout &layout, const std::vector<BlockSite> &sites,
                 const std::vector<Blk<D>> &rho) {
    CMatrix out = CMatrix::Zero(layout.dim(), layout.dim());
    for (std::size_t b = 0; b < sites.size(); ++b) {
        for (int i = 0; i < D; ++i)
            for (int k = 0; k < D; ++k)
                out(layout.index(i, sites[b].n), layout.index(k, sites[b].m)) = rho[b](i, k);
    }
    return out;
}

template <int D>
double block_distance(const std::vector<Blk<D>> &a, const std::vector<Blk<D>> &b) {
    double worst = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) worst = std::max(worst, (a[k] - b[k]).cwiseAbs().maxCoeff());
    return worst;
}

void check_inputs(const PulseSpec &pulse, const SystemParams &system, const HilbertLayout &layout,
                  const PropagationConfig &config) {
    pulse.validate();
    system.validate();
    config.validate();
    if (layout.transmon_levels() < system.transmon_levels()) {
        throw ContractError("lindblad: layout lacks the driven transmon level");
    }
}

void audit_failure(double diff, int steps) {
    std::ostringstream msg;
    msg << "lindblad step-halving audit failed: |delta| = " << diff << " with " << steps << " steps";
    throw PrecisionError(msg.str());
}

template <int D>
DensityMatrix lindblad_impl(const PulseSpec &pulse, const SystemParams &system,
                            const DensityMatrix &initial, const PropagationConfig &config) {
    const HilbertLayout &layout = initial.layout;
    const int N = layout.fock_truncation();
    const int steps = config.steps_for(pulse.gate_time);
    const int per_step = config.audit ? 4 : 2;
    const DriveGrid grid(pulse, steps, per_step);
    const Generator<D> gen = make_generator<D>(system, grid, N);

    std::vector<BlockSite> sites;
    std::vector<Blk<D>> rho;
    for (int n = 0; n < N; ++n) {
        for (int m = 0; m < N; ++m) {
            sites.push_back({n, m, -1});
            Blk<D> b;
            for (int i = 0; i < D; ++i)
                for (int k = 0; k < D; ++k)
                    b(i, k) = initial.matrix(layout.index(i, n), layout.index(k, m));
            rho.push_back(b);
        }
    }
    sites = link(std::move(sites));
    const std::vector<Blk<D>> coarse = gen.integrate(sites, rho, per_step / 2);
    if (config.audit) {
        const std::vector<Blk<D>> fine = gen.integrate(sites, rho, 1);
        const double diff = block_distance<D>(coarse, fine);
        if (!(diff < config.audit_tolerance)) audit_failure(diff, steps);
    }
    DensityMatrix out(layout, assemble<D>(layout, sites, coarse));

    const double trace_drift = std::abs(out.trace() - initial.trace());
    if (!(trace_drift <= 1e-8)) {
        throw PrecisionError("lindblad: trace drifted by " + std::to_string(trace_drift));
    }
    if (!(out.hermiticity_defect() <= 1e-10)) {
        throw PrecisionError("lindblad: output not Hermitian");
    }
    const double lowest = out.min_eigenvalue();
    if (lowest < -1e-6) {
        throw PrecisionError("lindblad: negative eigenvalue " + std::to_string(lowest) +
                             "; step too coarse");
    }
    return out;
}

template <int D>
ProcessMap process_map_impl(const PulseSpec &pulse, const SystemParams &system,
                            const HilbertLayout &layout, const PropagationConfig &config) {
    const int L = pulse.mode_count();
    const int steps = config.steps_for(pulse.gate_time);
    const int per_step = config.audit ? 4 : 2;
    const DriveGrid grid(pulse, steps, per_step);
    const Generator<D> gen = make_generator<D>(system, grid, L);

    ProcessMap map{layout, L, {}};
    map.outputs.reserve(static_cast<std::size_t>(L) * L);
    for (int n = 0; n < L; ++n) {
        for (int m = 0; m < L; ++m) {
            // |g n><g m| only reaches blocks (n - k, m - k).
            std::vector<BlockSite> sites;
            std::vector<Blk<D>> rho;
            for (int k = 0; k <= std::min(n, m); ++k) {
                sites.push_back({n - k, m - k, -1});
                rho.push_back(Blk<D>::Zero());
            }
            rho[0](0, 0) = 1.0;
            sites = link(std::move(sites));
            const std::vector<Blk<D>> coarse = gen.integrate(sites, rho, per_step / 2);
            if (config.audit) {
                const std::vector<Blk<D>> fine = gen.integrate(sites, rho, 1);
                const double diff = block_distance<D>(coarse, fine);
                if (!(diff < config.audit_tolerance)) audit_failure(diff, steps);
            }
            map.outputs.push_back(assemble<D>(layout, sites, coarse));
        }
    }
    return map;
}

}  // namespace

DensityMatrix propagate_lindblad(const PulseSpec &pulse, const SystemParams &system,
                                 const DensityMatrix &initial, const PropagationConfig &config) {
    check_inputs(pulse, system, initial.layout, config);
    if (!(initial.hermiticity_defect() <= 1e-10)) {
        throw ContractError("propagate_lindblad: initial density matrix not Hermitian");
    }
    if (initial.layout.transmon_levels() == 2) return lindblad_impl<2>(pulse, system, initial, config);
    return lindblad_impl<3>(pulse, system, initial, config);
}

ProcessMap propagate_process_map(const PulseSpec &pulse, const SystemParams &system,
                                 const HilbertLayout &layout, const PropagationConfig &config) {
    check_inputs(pulse, system, layout, config);
    if (pulse.mode_count() > layout.fock_truncation()) {
        throw ContractError("propagate_process_map: pulse addresses more modes than the layout holds");
    }
    if (layout.transmon_levels() == 2) return process_map_impl<2>(pulse, system, layout, config);
    return process_map_impl<3>(pulse, system, layout, config);
}

}  // namespace snapopt
