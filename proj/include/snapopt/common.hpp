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

#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace snapopt {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

inline constexpr double kPi = std::numbers::pi;
inline constexpr Complex kI{0.0, 1.0};

/// Input outside the mathematical domain of an operation (time outside the
/// pulse window, projection pole, index out of range).
struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

/// Invalid configuration. `field()` names the offending entry.
class ConfigError : public std::invalid_argument {
   public:
    ConfigError(std::string field, const std::string &message)
        : std::invalid_argument(field + ": " + message), field_(std::move(field)) {}
    const std::string &field() const { return field_; }

   private:
    std::string field_;
};

/// Numerical accuracy could not be certified (step-halving audit failed,
/// positivity lost, finite-difference step dominated by roundoff).
struct PrecisionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A final state whose driven-level amplitude vanishes has no defined phase.
struct DegenerateStateError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Caller violated a documented precondition on otherwise well-typed input.
struct ContractError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Wraps an angle into (-pi, pi]. Exactly -pi maps to +pi.
double wrap_phase(double angle);

}  // namespace snapopt
