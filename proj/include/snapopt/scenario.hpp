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

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "snapopt/io.hpp"
#include "snapopt/system.hpp"

namespace snapopt {

inline constexpr const char *kCodeVersion = "snapopt 0.1.0";

/// Everything a run needs. Physical inputs are SI (Hz for frequencies,
/// seconds for lifetimes); phases and chi T values are in units of pi.
struct ScenarioConfig {
    std::string scenario = "duration-scan";
    std::uint64_t seed = 1;
    int workers = 1;
    std::string output_dir = "snapopt_out";

    struct System {
        std::string protocol = "ge";
        double chi_hz = DeviceTable::chi_hz;
        double chi_f_hz = DeviceTable::chi_hz;  // chi-matched
        double chi_prime_hz = DeviceTable::chi_prime_hz;
        double kerr_hz = DeviceTable::kerr_hz;
        double qubit_t1_s = DeviceTable::qubit_t1_s;
        double qubit_t2_ramsey_s = DeviceTable::qubit_t2_ramsey_s;
        double f_t1_s = DeviceTable::qubit_t1_s;
        double f_t2_ramsey_s = DeviceTable::qubit_t2_ramsey_s;
        double cavity_t1_s = DeviceTable::cavity_t1_s;
    } system;

    struct Noise {
        bool transmon_decay = true;
        bool transmon_dephasing = true;
        bool cavity_decay = true;
    } noise;

    struct Target {
        std::vector<double> theta_pi;  // explicit target; empty means random
        int modes = 3;                 // random targets only
        int random_count = 8;
    } target;

    std::vector<double> chi_t_grid_pi{2.0, 2.5, 3.0, 3.5, 4.0, 5.0, 6.0, 8.0, 10.0};

    struct Optimizer {
        double eta = 0.5;
        double threshold = 1e-5;
        int max_iterations = 500;
        int divergence_window = 25;
        double min_gain = 0.01;
        bool frame_corrections = true;
        bool envelope = false;
        double limit_low_pi = 1.0;
        double limit_high_pi = 8.0;
        double limit_grid_pi = 0.25;
        double limit_resolution_pi = 0.01;
    } optimizer;

    struct Propagation {
        int steps = 20000;
        bool audit = true;
        double audit_tolerance = 1e-9;
        int trajectory_samples = 257;
    } propagation;

    struct Comparison {
        int modes = 4;
        int pd_samples = 64;
        double pd_threshold = 1e-10;
        double optimization_limit_pi = 2.7;
        double scan_step_pi = 0.25;
        double scan_high_pi = 8.0;
    } comparison;

    struct Tomography {
        double epsilon = 0.1;
        double initial_alpha = 1.0;  // coherent input, restricted to the addressed modes
        double noise_sigma = 0.0;    // additive population noise
        int noise_seeds = 1;
        bool optimized = true;
        double wigner_extent = 2.5;
        double wigner_step = 0.1;
    } tomography;

    /// Unknown keys and out-of-range values raise ConfigError naming the field.
    static ScenarioConfig from_json(const Json &j);
    Json to_json() const;
    void validate() const;

    /// Dimensionless (chi = 1) system with the enabled noise channels.
    SystemParams system_params() const;
};

/// Applies "a.b.c=value" to a JSON object. The value is parsed as JSON when
/// possible and kept as a string otherwise.
void apply_override(Json &config, const std::string &assignment);

struct EmittedFile {
    std::string path;  // relative to the output directory
    std::string sha256;
    std::size_t bytes = 0;
};

struct ScenarioResult {
    std::vector<EmittedFile> files;
    Json summary;
};

/// Runs the configured scenario and writes its artifacts plus manifest.json
/// into `output_dir`. Identical config and seed give byte-identical files.
ScenarioResult run_scenario(const ScenarioConfig &config);

}  // namespace snapopt
