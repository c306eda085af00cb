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

#include <cstddef>

#include "snapopt/common.hpp"

namespace snapopt {

enum class Level : int { g = 0, e = 1, f = 2 };

/// Composite transmon (x) truncated-cavity space.
///
/// Basis ordering is transmon-major: the amplitude of |t, n> lives at index
/// t * fock_truncation + n. Every module relies on this single convention.
class HilbertLayout {
   public:
    /// Throws ConfigError unless transmon_levels is 2 or 3 and the truncation
    /// leaves at least two spare Fock levels above the addressed ones.
    HilbertLayout(int transmon_levels, int fock_truncation, int addressed_modes);

    /// Default headroom: addressed_modes + 4 Fock levels.
    static HilbertLayout with_headroom(int transmon_levels, int addressed_modes);

    int transmon_levels() const { return transmon_levels_; }
    int fock_truncation() const { return fock_truncation_; }
    int addressed_modes() const { return addressed_modes_; }
    int dim() const { return transmon_levels_ * fock_truncation_; }
    int index(Level level, int n) const { return static_cast<int>(level) * fock_truncation_ + n; }
    int index(int level, int n) const { return level * fock_truncation_ + n; }

    bool operator==(const HilbertLayout &other) const = default;

   private:
    int transmon_levels_;
    int fock_truncation_;
    int addressed_modes_;
};

/// Dense operator bound to a layout.
struct Operator {
    HilbertLayout layout;
    CMatrix matrix;

    Operator(HilbertLayout layout, CMatrix matrix);
    Operator operator*(const Operator &rhs) const;
    Operator adjoint() const;
};

struct QuantumState {
    HilbertLayout layout;
    CVector amplitudes;

    QuantumState(HilbertLayout layout, CVector amplitudes);
    double norm() const { return amplitudes.norm(); }
    Complex overlap(const QuantumState &other) const;  // <this|other>
};

struct DensityMatrix {
    HilbertLayout layout;
    CMatrix matrix;

    DensityMatrix(HilbertLayout layout, CMatrix matrix);
    static DensityMatrix pure(const QuantumState &state);

    Complex trace() const { return matrix.trace(); }
    double hermiticity_defect() const;
    double min_eigenvalue() const;
};

/// Operators used by the Hamiltonians and jump operators.
struct OperatorSet {
    HilbertLayout layout;
    Operator a;
    Operator a_dag;
    Operator number;
    Operator sigma_x;  // g<->driven level
    Operator sigma_y;
    Operator sigma_z;  // |e><e| - |g><g|

    /// |level><level| (x) identity.
    Operator projector(Level level) const;
    /// |to><from| (x) identity.
    Operator transition(Level to, Level from) const;
    /// sigma_x cos(angle) + sigma_y sin(angle) on the g/driven subspace.
    Operator sigma_angle(double angle) const;

    Level driven_level() const { return driven_; }

   private:
    friend OperatorSet build_operators(const HilbertLayout &layout, Level driven);
    OperatorSet(HilbertLayout layout, Operator a, Operator a_dag, Operator number, Operator sx,
                Operator sy, Operator sz, Level driven);
    Level driven_;
};

/// Builds the operator set. `driven` selects which excited level the Pauli
/// operators couple to the ground state (e for the ge scheme, f for gf).
OperatorSet build_operators(const HilbertLayout &layout, Level driven = Level::e);

/// Throws DomainError for an out-of-range level or Fock index.
QuantumState tensor_basis_state(const HilbertLayout &layout, Level level, int fock_n);

/// <psi|O|psi>. Throws std::invalid_argument on dimension mismatch.
Complex expectation(const QuantumState &state, const Operator &op);
/// Tr(rho O). Throws std::invalid_argument on dimension mismatch.
Complex expectation(const DensityMatrix &rho, const Operator &op);

}  // namespace snapopt
