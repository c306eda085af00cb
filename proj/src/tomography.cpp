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

#include "snapopt/tomography.hpp"

#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include <unsupported/Eigen/NonLinearOptimization>

namespace snapopt {

PopulationTable::PopulationTable(int levels_, int fock_)
    : levels(levels_), fock(fock_), values(static_cast<std::size_t>(levels_) * fock_, 0.0) {}

double PopulationTable::total() const {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
}

PopulationTable populations(const DensityMatrix &rho) {
    const HilbertLayout &layout = rho.layout;
    PopulationTable t(layout.transmon_levels(), layout.fock_truncation());
    for (int l = 0; l < layout.transmon_levels(); ++l)
        for (int n = 0; n < layout.fock_truncation(); ++n) {
            const int i = layout.index(l, n);
            t.values[l * t.fock + n] = rho.matrix(i, i).real();
        }
    return t;
}

PopulationTable populations(const QuantumState &state) {
    const HilbertLayout &layout = state.layout;
    PopulationTable t(layout.transmon_levels(), layout.fock_truncation());
    for (int i = 0; i < layout.dim(); ++i) t.values[i] = std::norm(state.amplitudes(i));
    return t;
}

Complex displacement_element(Complex epsilon, int m, int n) {
    if (m < 0 || n < 0) throw DomainError("displacement_element: negative Fock index");
    if (m < n) return std::conj(displacement_element(-epsilon, n, m));
    const int k = m - n;
    const double x = std::norm(epsilon);
    const double laguerre = std::assoc_laguerre(static_cast<unsigned>(n), static_cast<unsigned>(k), x);
    if (k > 0 && x == 0.0) return 0.0;
    // sqrt(n!/m!) |eps|^k e^{-|eps|^2/2}, in logs to survive large m.
    const double log_mag = 0.5 * (std::lgamma(n + 1.0) - std::lgamma(m + 1.0)) +
                           (k > 0 ? k * std::log(std::abs(epsilon)) : 0.0) - 0.5 * x;
    return std::polar(std::exp(log_mag), k * std::arg(epsilon)) * laguerre;
}

DisplacementMatrix displacement_matrix(Complex epsilon, int dim) {
    if (dim < 2) throw DomainError("displacement_matrix: dim must be >= 2");
    DisplacementMatrix d{epsilon, CMatrix(dim, dim)};
    for (int m = 0; m < dim; ++m)
        for (int n = 0; n < dim; ++n) d.entries(m, n) = displacement_element(epsilon, m, n);
    return d;
}

namespace {

/// (1 (x) D) applied to a full-space matrix from the left.
CMatrix displace_cavity(const HilbertLayout &layout, const CMatrix &d, const CMatrix &x) {
    const int N = layout.fock_truncation();
    CMatrix out(x.rows(), x.cols());
    for (int l = 0; l < layout.transmon_levels(); ++l) {
        out.middleRows(l * N, N) = d * x.middleRows(l * N, N);
    }
    return out;
}

}  // namespace

PopulationTable interference_populations(const QuantumState &state, double epsilon) {
    const HilbertLayout &layout = state.layout;
    const DisplacementMatrix d = displacement_matrix(epsilon, layout.fock_truncation());
    const CMatrix moved = displace_cavity(layout, d.entries, state.amplitudes);
    return populations(QuantumState(layout, moved.col(0)));
}

PopulationTable interference_populations(const DensityMatrix &rho, double epsilon) {
    const HilbertLayout &layout = rho.layout;
    const DisplacementMatrix d = displacement_matrix(epsilon, layout.fock_truncation());
    const CMatrix left = displace_cavity(layout, d.entries, rho.matrix);
    const CMatrix both = displace_cavity(layout, d.entries, left.adjoint()).adjoint();
    return populations(DensityMatrix(layout, both));
}

PopulationTable interference_first_order(std::span<const double> c, std::span<const double> theta,
                                         double epsilon) {
    if (c.size() != theta.size() || c.empty()) {
        throw ContractError("interference_first_order: c and theta must have equal, nonzero length");
    }
    const int L = static_cast<int>(c.size());
    PopulationTable t(1, L);
    for (int n = 0; n < L; ++n) {
        double p = c[n] * c[n];
        if (n > 0) p += 2.0 * epsilon * c[n] * c[n - 1] * std::sqrt(n) * std::cos(theta[n] - theta[n - 1]);
        if (n + 1 < L) p -= 2.0 * epsilon * c[n] * c[n + 1] * std::sqrt(n + 1.0) * std::cos(theta[n] - theta[n + 1]);
        t.at(Level::g, n) = p;
    }
    t.provenance = "first_order";
    return t;
}

std::vector<double> interference_model(std::span<const double> p_g, std::span<const double> theta,
                                       std::span<const double> dtheta, double epsilon, int rows) {
    const int N = static_cast<int>(p_g.size());
    auto phase = [&](int n) {
        return n < static_cast<int>(theta.size()) ? theta[n] + dtheta[n] : 0.0;
    };
    std::vector<double> out(rows, 0.0);
    for (int n = 0; n < rows; ++n) {
        double acc = 0.0;
        for (int a = 0; a < N; ++a) {
            const double da = displacement_element(epsilon, n, a).real();
            acc += da * da * p_g[a];
            for (int b = a + 1; b < N; ++b) {
                const double db = displacement_element(epsilon, n, b).real();
                acc += 2.0 * da * db * std::sqrt(p_g[a] * p_g[b]) * std::cos(phase(b) - phase(a));
            }
        }
        out[n] = acc;
    }
    return out;
}

namespace {

struct PhaseResidual {
    using Scalar = double;
    using InputType = Eigen::VectorXd;
    using ValueType = Eigen::VectorXd;
    using JacobianType = Eigen::MatrixXd;
    enum { InputsAtCompileTime = Eigen::Dynamic, ValuesAtCompileTime = Eigen::Dynamic };

    std::vector<double> p_g;
    std::vector<double> p_eps;
    std::vector<double> theta;
    double epsilon = 0.0;

    int inputs() const { return static_cast<int>(theta.size()) - 1; }
    int values() const { return static_cast<int>(p_eps.size()); }

    int operator()(const Eigen::VectorXd &x, Eigen::VectorXd &f) const {
        std::vector<double> dtheta(theta.size(), 0.0);
        for (int i = 0; i < x.size(); ++i) dtheta[i + 1] = x(i);
        const std::vector<double> model = interference_model(p_g, theta, dtheta, epsilon, values());
        for (int n = 0; n < values(); ++n) f(n) = model[n] - p_eps[n];
        return 0;
    }

    // Central differences with a fixed absolute step: the unknowns are angles
    // near zero, where a step relative to |x| would vanish.
    int df(const Eigen::VectorXd &x, Eigen::MatrixXd &jac) const {
        constexpr double h = 1e-6;
        Eigen::VectorXd xp = x, xm = x, fp(values()), fm(values());
        for (int i = 0; i < x.size(); ++i) {
            xp(i) = x(i) + h;
            xm(i) = x(i) - h;
            (*this)(xp, fp);
            (*this)(xm, fm);
            jac.col(i) = (fp - fm) / (2.0 * h);
            xp(i) = xm(i) = x(i);
        }
        return 0;
    }
};

std::vector<double> ground_row(const PopulationTable &t) {
    return std::vector<double>(t.values.begin(), t.values.begin() + t.fock);
}

}  // namespace

PhaseErrorEstimate solve_phase_errors(const PopulationTable &p, const PopulationTable &p_eps,
                                      std::span<const double> theta, double epsilon) {
    const int L = static_cast<int>(theta.size());
    if (L < 1) throw ContractError("solve_phase_errors: empty target");
    if (p.fock < L || p_eps.fock < L) {
        throw ContractError("solve_phase_errors: population tables shorter than the target");
    }
    PhaseErrorEstimate est;
    est.dtheta.assign(L, 0.0);
    est.uncertainty.assign(L, 0.0);
    if (L == 1) return est;

    PhaseResidual functor;
    functor.p_g = ground_row(p);
    for (double &v : functor.p_g) v = std::max(v, 0.0);  // noisy tables may dip below zero
    functor.p_eps = ground_row(p_eps);
    functor.theta.assign(theta.begin(), theta.end());
    functor.epsilon = epsilon;
    if (functor.values() < functor.inputs()) {
        throw ContractError("solve_phase_errors: fewer observations than unknown phases");
    }

    Eigen::VectorXd x = Eigen::VectorXd::Zero(L - 1);
    Eigen::LevenbergMarquardt<decltype(functor)> lm(functor);
    lm.parameters.maxfev = 200 * (2 * (L - 1) + 1);
    lm.parameters.xtol = 1e-14;
    lm.parameters.ftol = 1e-14;
    lm.minimize(x);
    est.iterations = static_cast<int>(lm.iter);

    Eigen::VectorXd f(functor.values());
    functor(x, f);
    est.residual_norm = f.norm();
    Eigen::MatrixXd jac(functor.values(), functor.inputs());
    functor.df(x, jac);

    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(jac);
    const Eigen::VectorXd sv = svd.singularValues();
    const double smax = sv(0);
    const double smin = sv(sv.size() - 1);
    est.ill_conditioned = !(smin > 1e-8 * std::max(smax, 1e-300));

    const int dof = functor.values() - functor.inputs();
    const double sigma2 = dof > 0 ? f.squaredNorm() / dof : f.squaredNorm();
    const Eigen::MatrixXd normal = jac.transpose() * jac;
    const Eigen::MatrixXd cov = sigma2 * normal.completeOrthogonalDecomposition().pseudoInverse();
    for (int i = 0; i < L - 1; ++i) {
        est.dtheta[i + 1] = wrap_phase(x(i));
        est.uncertainty[i + 1] =
            est.ill_conditioned ? std::numeric_limits<double>::infinity() : std::sqrt(std::max(cov(i, i), 0.0));
    }
    return est;
}

CMatrix cavity_state(const DensityMatrix &rho) {
    const HilbertLayout &layout = rho.layout;
    const int N = layout.fock_truncation();
    CMatrix out = CMatrix::Zero(N, N);
    for (int l = 0; l < layout.transmon_levels(); ++l) out += rho.matrix.block(l * N, l * N, N, N);
    return out;
}

std::vector<double> wigner(const CMatrix &rho, std::span<const Complex> alphas) {
    if (rho.rows() != rho.cols() || rho.rows() < 1) throw ContractError("wigner: density matrix not square");
    const int N = static_cast<int>(rho.rows());
    std::vector<double> out;
    out.reserve(alphas.size());
    for (Complex a : alphas) {
        // Rows beyond N are exact matrix elements of the untruncated operator.
        const int rows = N + 12 + static_cast<int>(std::ceil(4.0 * std::norm(a) + 8.0 * std::abs(a)));
        CMatrix d(rows, N);
        for (int m = 0; m < rows; ++m)
            for (int n = 0; n < N; ++n) d(m, n) = displacement_element(-a, m, n);
        const CMatrix moved = d * rho * d.adjoint();
        double w = 0.0;
        for (int k = 0; k < rows; ++k) w += (k % 2 == 0 ? 1.0 : -1.0) * moved(k, k).real();
        out.push_back(2.0 / kPi * w);
    }
    return out;
}

std::vector<Complex> alpha_grid(double extent, double step) {
    if (!(extent > 0.0 && step > 0.0)) throw ConfigError("wigner.grid", "extent and step must be > 0");
    const int half = static_cast<int>(std::floor(extent / step + 1e-9));
    std::vector<Complex> out;
    for (int i = -half; i <= half; ++i)
        for (int j = -half; j <= half; ++j) out.emplace_back(j * step, i * step);
    return out;
}

void write_population_csv(std::ostream &os, const PopulationTable &table) {
    static const char *names[] = {"g", "e", "f"};
    os << "level,n,probability\n";
    os.precision(17);
    for (int l = 0; l < table.levels; ++l)
        for (int n = 0; n < table.fock; ++n) os << names[l] << ',' << n << ',' << table.values[l * table.fock + n] << '\n';
}

PopulationTable read_population_csv(std::istream &is) {
    std::string line;
    if (!std::getline(is, line)) throw ConfigError("populations", "empty CSV");
    if (line.rfind("level,n,probability", 0) != 0) throw ConfigError("populations", "header must be level,n,probability");
    struct Row {
        int level;
        int n;
        double p;
    };
    std::vector<Row> rows;
    int levels = 0;
    int fock = 0;
    int lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string level, n, p;
        if (!std::getline(ss, level, ',') || !std::getline(ss, n, ',') || !std::getline(ss, p)) {
            throw ConfigError("populations", "malformed row " + std::to_string(lineno));
        }
        Row r{};
        if (level == "g") r.level = 0;
        else if (level == "e") r.level = 1;
        else if (level == "f") r.level = 2;
        else throw ConfigError("populations", "unknown level '" + level + "' on row " + std::to_string(lineno));
        try {
            r.n = std::stoi(n);
            r.p = std::stod(p);
        } catch (const std::exception &) {
            throw ConfigError("populations", "non-numeric field on row " + std::to_string(lineno));
        }
        if (r.n < 0) throw ConfigError("populations", "negative Fock index on row " + std::to_string(lineno));
        levels = std::max(levels, r.level + 1);
        fock = std::max(fock, r.n + 1);
        rows.push_back(r);
    }
    PopulationTable t(std::max(levels, 1), fock);
    for (const Row &r : rows) t.values[r.level * fock + r.n] = r.p;
    t.provenance = "ingested";
    return t;
}

void write_wigner_csv(std::ostream &os, std::span<const Complex> alphas, std::span<const double> w) {
    if (alphas.size() != w.size()) throw ContractError("write_wigner_csv: size mismatch");
    os << "re_alpha,im_alpha,W\n";
    os.precision(17);
    for (std::size_t i = 0; i < w.size(); ++i) os << alphas[i].real() << ',' << alphas[i].imag() << ',' << w[i] << '\n';
}

}  // namespace snapopt
