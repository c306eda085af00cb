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

#include "snapopt/hilbert.hpp"

#include <cmath>

namespace snapopt {

HilbertLayout::HilbertLayout(int transmon_levels, int fock_truncation, int addressed_modes)
    : transmon_levels_(transmon_levels),
      fock_truncation_(fock_truncation),
      addressed_modes_(addressed_modes) {
    if (transmon_levels != 2 && transmon_levels != 3) {
        throw ConfigError("transmon_levels", "must be 2 (ge) or 3 (gf)");
    }
    if (addressed_modes < 1) {
        throw ConfigError("addressed_modes", "must be >= 1");
    }
    if (fock_truncation < addressed_modes + 2) {
        throw ConfigError("fock_truncation", "needs at least addressed_modes + 2 Fock levels");
    }
}

HilbertLayout HilbertLayout::with_headroom(int transmon_levels, int addressed_modes) {
    return HilbertLayout(transmon_levels, addressed_modes + 4, addressed_modes);
}

static void require_same(const HilbertLayout &a, const HilbertLayout &b) {
    if (!(a == b)) {
        throw std::invalid_argument("Hilbert layouts differ");
    }
}

Operator::Operator(HilbertLayout layout_, CMatrix matrix_)
    : layout(layout_), matrix(std::move(matrix_)) {
    if (matrix.rows() != layout.dim() || matrix.cols() != layout.dim()) {
        throw std::invalid_argument("operator dimension does not match layout");
    }
}

Operator Operator::operator*(const Operator &rhs) const {
    require_same(layout, rhs.layout);
    return Operator(layout, matrix * rhs.matrix);
}

Operator Operator::adjoint() const { return Operator(layout, matrix.adjoint()); }

QuantumState::QuantumState(HilbertLayout layout_, CVector amplitudes_)
    : layout(layout_), amplitudes(std::move(amplitudes_)) {
    if (amplitudes.size() != layout.dim()) {
        throw std::invalid_argument("state dimension does not match layout");
    }
}

Complex QuantumState::overlap(const QuantumState &other) const {
    require_same(layout, other.layout);
    return amplitudes.dot(other.amplitudes);
}

DensityMatrix::DensityMatrix(HilbertLayout layout_, CMatrix matrix_)
    : layout(layout_), matrix(std::move(matrix_)) {
    if (matrix.rows() != layout.dim() || matrix.cols() != layout.dim()) {
        throw std::invalid_argument("density matrix dimension does not match layout");
    }
}

DensityMatrix DensityMatrix::pure(const QuantumState &state) {
    return DensityMatrix(state.layout, state.amplitudes * state.amplitudes.adjoint());
}

double DensityMatrix::hermiticity_defect() const {
    return (matrix - matrix.adjoint()).cwiseAbs().maxCoeff();
}

double DensityMatrix::min_eigenvalue() const {
    CMatrix herm = 0.5 * (matrix + matrix.adjoint());
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(herm, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff();
}

OperatorSet::OperatorSet(HilbertLayout layout_, Operator a_, Operator a_dag_, Operator number_,
                         Operator sx, Operator sy, Operator sz, Level driven)
    : layout(layout_),
      a(std::move(a_)),
      a_dag(std::move(a_dag_)),
      number(std::move(number_)),
      sigma_x(std::move(sx)),
      sigma_y(std::move(sy)),
      sigma_z(std::move(sz)),
      driven_(driven) {}

Operator OperatorSet::projector(Level level) const { return transition(level, level); }

Operator OperatorSet::transition(Level to, Level from) const {
    const int levels = layout.transmon_levels();
    if (static_cast<int>(to) >= levels || static_cast<int>(from) >= levels) {
        throw DomainError("transmon level outside layout");
    }
    CMatrix m = CMatrix::Zero(layout.dim(), layout.dim());
    for (int n = 0; n < layout.fock_truncation(); ++n) {
        m(layout.index(to, n), layout.index(from, n)) = 1.0;
    }
    return Operator(layout, std::move(m));
}

Operator OperatorSet::sigma_angle(double angle) const {
    return Operator(layout, std::cos(angle) * sigma_x.matrix + std::sin(angle) * sigma_y.matrix);
}

OperatorSet build_operators(const HilbertLayout &layout, Level driven) {
    if (driven == Level::g || static_cast<int>(driven) >= layout.transmon_levels()) {
        throw DomainError("driven level must be an excited level inside the layout");
    }
    const int dim = layout.dim();
    const int ntr = layout.fock_truncation();
    CMatrix a = CMatrix::Zero(dim, dim);
    CMatrix number = CMatrix::Zero(dim, dim);
    for (int t = 0; t < layout.transmon_levels(); ++t) {
        for (int n = 0; n < ntr; ++n) {
            number(layout.index(t, n), layout.index(t, n)) = static_cast<double>(n);
            if (n + 1 < ntr) {
                a(layout.index(t, n), layout.index(t, n + 1)) = std::sqrt(static_cast<double>(n + 1));
            }
        }
    }
    CMatrix sx = CMatrix::Zero(dim, dim);
    CMatrix sy = CMatrix::Zero(dim, dim);
    CMatrix sz = CMatrix::Zero(dim, dim);
    for (int n = 0; n < ntr; ++n) {
        const int ig = layout.index(Level::g, n);
        const int ix = layout.index(driven, n);
        sx(ix, ig) = 1.0;
        sx(ig, ix) = 1.0;
        sy(ix, ig) = kI;
        sy(ig, ix) = -kI;
        sz(ix, ix) = 1.0;
        sz(ig, ig) = -1.0;
    }
    CMatrix a_dag = a.adjoint();
    return OperatorSet(layout, Operator(layout, a), Operator(layout, a_dag),
                       Operator(layout, number), Operator(layout, sx), Operator(layout, sy),
                       Operator(layout, sz), driven);
}

QuantumState tensor_basis_state(const HilbertLayout &layout, Level level, int fock_n) {
    if (static_cast<int>(level) < 0 || static_cast<int>(level) >= layout.transmon_levels()) {
        throw DomainError("transmon level outside layout");
    }
    if (fock_n < 0 || fock_n >= layout.fock_truncation()) {
        throw DomainError("Fock index outside truncation");
    }
    CVector v = CVector::Zero(layout.dim());
    v(layout.index(level, fock_n)) = 1.0;
    return QuantumState(layout, std::move(v));
}

Complex expectation(const QuantumState &state, const Operator &op) {
    if (state.amplitudes.size() != op.matrix.rows()) {
        throw std::invalid_argument("expectation: dimension mismatch");
    }
    return state.amplitudes.dot(op.matrix * state.amplitudes);
}

Complex expectation(const DensityMatrix &rho, const Operator &op) {
    if (rho.matrix.rows() != op.matrix.rows()) {
        throw std::invalid_argument("expectation: dimension mismatch");
    }
    return (rho.matrix * op.matrix).trace();
}

}  // namespace snapopt
