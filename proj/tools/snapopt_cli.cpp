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


// snapopt: scenario runner.
//
//   snapopt <scenario> [--config file.json] [--set key.path=value ...]
//                      [--out dir] [--seed n] [--workers n]

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "snapopt/scenario.hpp"

int main(int argc, char **argv) {
    CLI::App app{"SNAP gate pulse optimizer and error-budget scenarios"};
    app.require_subcommand(1);

    std::string config_path;
    std::vector<std::string> overrides;
    std::string out_dir;
    std::uint64_t seed = 0;
    int workers = 0;

    const std::vector<std::pair<std::string, std::string>> scenarios{
        {"duration-scan", "coherent error of unoptimized and optimized pulses versus chi T"},
        {"optimize", "run the iterative correction for one target and gate time"},
        {"protocol-compare", "error budgets of the five protocols at their best chi T"},
        {"interference", "displaced-population measurement and phase-error inversion"},
        {"wigner", "Wigner map of the cavity after the gate"},
        {"limit-search", "optimization limit per target"},
    };
    for (const auto &[name, help] : scenarios) {
        CLI::App *sub = app.add_subcommand(name, help);
        sub->add_option("--config", config_path, "JSON configuration file")->check(CLI::ExistingFile);
        sub->add_option("--set", overrides, "override, e.g. optimizer.eta=0.3 (repeatable)");
        sub->add_option("--out", out_dir, "output directory");
        sub->add_option("--seed", seed, "RNG seed");
        sub->add_option("--workers", workers, "worker threads")->check(CLI::PositiveNumber);
    }
    CLI11_PARSE(app, argc, argv);
    const std::string scenario = app.get_subcommands().front()->get_name();

    try {
        snapopt::Json cfg = snapopt::Json::object();
        if (!config_path.empty()) {
            cfg = snapopt::Json::parse(snapopt::read_text_file(config_path), nullptr, false);
            if (cfg.is_discarded()) throw snapopt::ConfigError("config", "not valid JSON: " + config_path);
        }
        for (const std::string &o : overrides) snapopt::apply_override(cfg, o);
        cfg["scenario"] = scenario;
        if (!out_dir.empty()) cfg["output_dir"] = out_dir;
        if (app.get_subcommands().front()->count("--seed")) cfg["seed"] = seed;
        if (workers > 0) cfg["workers"] = workers;

        const snapopt::ScenarioConfig config = snapopt::ScenarioConfig::from_json(cfg);
        const snapopt::ScenarioResult result = snapopt::run_scenario(config);
        std::cout << result.summary.dump(2) << '\n';
        for (const auto &f : result.files) std::cout << f.sha256 << "  " << f.path << '\n';
    } catch (const snapopt::ConfigError &e) {
        std::cerr << "config error [" << e.field() << "]: " << e.what() << '\n';
        return 2;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
