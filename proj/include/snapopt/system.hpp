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

#include <string>
#include <string_view>

#include "snapopt/hilbert.hpp"

namespace snapopt {

enum class Protocol { ge, gf };

std::string_view to_string(Protocol p);
Protocol protocol_from_string(std::string_view name);

/// Lindblad rates. Zero disables a channel.
struct NoiseRates {
    double decay_eg = 0.0;   // e -> g
    double decay_fe = 0.0;   // f -> e
    double dephase_ee = 0.0; // jump operator |e><e|
    double dephase_ff = 0.0; // jump operator |f><f|
    double cavity = 0.0;     // single-photon loss

    bool any() const {
        return decay_eg > 0 || decay_fe > 0 || dephase_ee > 0 || dephase_ff > 0 || cavity > 0;
    }
    NoiseRates scaled(double factor) const;
};

/// Physical constants of the cavity-transmon system.
///
/// All frequencies are angular. With `dimensionless() == true` every value is
/// expressed in units of chi (chi == 1, times in 1/chi).
struct SystemParams {
    double chi = 1.0;
    double chi_f = 1.0;
    double chi_prime = 0.0;
    double kerr = 0.0;
    // Lab-frame bookkeeping only; the rotating frame removes them.
    double omega_ge = 0.0;
    double omega_gf = 0.0;
    double omega_c = 0.0;
    NoiseRates rates;
    Protocol protocol = Protocol::ge;
    bool dimensionless_units = true;

    /// chi = 1, no Kerr terms, no noise.
    static SystemParams ideal(Protocol protocol = Protocol::ge);

    /// Values of the reference device in SI angular units (rad/s, 1/s).
    /// Relaxation rates are 1/T1; dephasing uses the Ramsey time through
    /// Gamma_phi = 1/T2 - 1/(2 T1) and the |e><e| jump rate 2 Gamma_phi.
    static SystemParams reference_device(Protocol protocol = Protocol::ge);

    /// Same physics rescaled so that chi == 1.
    SystemParams dimensionless() const;

    /// Detuning of the drive line relative to the rotating frame per photon.
    double drive_shift_per_photon() const { return protocol == Protocol::ge ? chi : chi_f; }
    Level driven_level() const { return protocol == Protocol::ge ? Level::e : Level::f; }
    int transmon_levels() const { return protocol == Protocol::ge ? 2 : 3; }

    /// Throws ConfigError naming the offending field.
    void validate() const;
};

/// Reference device coherence times and couplings (SI).
struct DeviceTable {
    static constexpr double omega_ge_hz = 4.092820e9;
    static constexpr double omega_c_hz = 4.484628e9;
    static constexpr double chi_hz = 486.1e3;
    static constexpr double kerr_hz = 699.0;
    static constexpr double chi_prime_hz = 0.97e3;
    static constexpr double qubit_t1_s = 110e-6;
    static constexpr double qubit_t2_ramsey_s = 48e-6;
    static constexpr double qubit_t2_echo_s = 105e-6;
    static constexpr double cavity_t1_s = 1.00e-3;
};

}  // namespace snapopt
