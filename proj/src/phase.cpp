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

#include <cmath>

#include "snapopt/common.hpp"

namespace snapopt {

double wrap_phase(double angle) {
    double r = std::remainder(angle, 2.0 * kPi);  // [-pi, pi]
    if (r <= -kPi) {
        r += 2.0 * kPi;
    }
    return r;
}

}  // namespace snapopt
