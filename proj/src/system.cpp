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

#include "snapopt/system.hpp"

#include <cmath>

namespace snapopt {

std::string_view to_string(Protocol p) { return p == Protocol::ge ? "ge" : "gf"; }

Protocol protocol_from_string(std::string_view name) {
    if (name == "ge") return Protocol::ge;
    if (name == "gf") return Protocol::gf;
    throw ConfigError("protocol", "expected 'ge' or 'gf', got '" + std::string(name) + "'");
}

NoiseRates NoiseRates::scaled(double factor) const {
    return NoiseRates{decay_eg * factor, decay_fe * factor, dephase_ee * factor,
                      dephase_ff * factor, cavity * factor};
}

SystemParams SystemParams::ideal(Protocol protocol) {
    SystemParams p;
    p.protocol = protocol;
    return p;
}

SystemParams SystemParams::reference_device(Protocol protocol) {
    const double two_pi = 2.0 * kPi;
    SystemParams p;
    p.chi = two_pi * DeviceTable::chi_hz;
    p.chi_f = p.chi;  // chi-matched
    p.chi_prime = two_pi * DeviceTable::chi_prime_hz;
    p.kerr = two_pi * DeviceTable::kerr_hz;
    p.omega_ge = two_pi * DeviceTable::omega_ge_hz;
    p.omega_c = two_pi * DeviceTable::omega_c_hz;
    p.omega_gf = 0.0;  // not characterised on the reference device
    const double gamma1 = 1.0 / DeviceTable::qubit_t1_s;
    const double gamma_phi = 1.0 / DeviceTable::qubit_t2_ramsey_s - 0.5 * gamma1;
    p.rates.decay_eg = gamma1;
    p.rates.dephase_ee = 2.0 * gamma_phi;
    // The f level is not characterised; it inherits the ge values.
    p.rates.decay_fe = gamma1;
    p.rates.dephase_ff = 2.0 * gamma_phi;
    p.rates.cavity = 1.0 / DeviceTable::cavity_t1_s;
    p.protocol = protocol;
    p.dimensionless_units = false;
    return p;
}

SystemParams SystemParams::dimensionless() const {
    if (dimensionless_units) {
        return *this;
    }
    SystemParams p = *this;
    const double s = 1.0 / chi;
    p.chi = 1.0;
    p.chi_f = chi_f * s;
    p.chi_prime = chi_prime * s;
    p.kerr = kerr * s;
    p.omega_ge = omega_ge * s;
    p.omega_gf = omega_gf * s;
    p.omega_c = omega_c * s;
    p.rates = rates.scaled(s);
    p.dimensionless_units = true;
    return p;
}

void SystemParams::validate() const {
    auto finite_nonneg = [](double v) { return std::isfinite(v) && v >= 0.0; };
    if (!(std::isfinite(chi) && chi > 0)) throw ConfigError("system.chi", "must be positive");
    if (!(std::isfinite(chi_f) && chi_f > 0)) throw ConfigError("system.chi_f", "must be positive");
    if (!std::isfinite(chi_prime)) throw ConfigError("system.chi_prime", "must be finite");
    if (!std::isfinite(kerr)) throw ConfigError("system.kerr", "must be finite");
    if (!finite_nonneg(rates.decay_eg)) throw ConfigError("system.rates.decay_eg", "must be >= 0");
    if (!finite_nonneg(rates.decay_fe)) throw ConfigError("system.rates.decay_fe", "must be >= 0");
    if (!finite_nonneg(rates.dephase_ee)) throw ConfigError("system.rates.dephase_ee", "must be >= 0");
    if (!finite_nonneg(rates.dephase_ff)) throw ConfigError("system.rates.dephase_ff", "must be >= 0");
    if (!finite_nonneg(rates.cavity)) throw ConfigError("system.rates.cavity", "must be >= 0");
}

}  // namespace snapopt
