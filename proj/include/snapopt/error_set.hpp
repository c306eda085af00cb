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

#include <vector>

#include "snapopt/common.hpp"

namespace snapopt {

/// Coherent error of one Fock mode at the end of the selective pulse.
struct ModeError {
    double eps_L = 0.0;   // longitudinal: over/undershoot along the trajectory
    double eps_T = 0.0;   // transversal: perpendicular to the trajectory
    double dtheta = 0.0;  // phase error, (-pi, pi]

    /// eps = (eps_L + i eps_T) e^{i dtheta}; minus twice the ground amplitude.
    Complex eps() const { return Complex(eps_L, eps_T) * std::polar(1.0, dtheta); }
};

struct CoherentErrorSet {
    std::vector<ModeError> modes;

    std::size_t size() const { return modes.size(); }
    static CoherentErrorSet zeros(std::size_t modes) { return {std::vector<ModeError>(modes)}; }
};

}  // namespace snapopt
