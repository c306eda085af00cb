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


#include "snapopt/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <set>
#include <sstream>

#include "snapopt/analytics.hpp"
#include "snapopt/dynamics.hpp"
#include "snapopt/optimizer.hpp"
#include "snapopt/parallel.hpp"
#include "snapopt/tomography.hpp"

namespace snapopt {

namespace {

const std::set<std::string> kScenarios{"duration-scan", "optimize",  "protocol-compare",
                                       "interference",  "wigner",    "limit-search"};

/// Reads one JSON object, tracking which keys were consumed so that typos
/// surface as errors instead of silently falling back to defaults.
class Reader {
   public:
    Reader(const Json &j, std::string prefix) : j_(j), prefix_(std::move(prefix)) {
        if (!j_.is_object()) throw ConfigError(prefix_.empty() ? "config" : prefix_, "expected an object");
    }

    template <class T>
    void get(const std::string &key, T &out) {
        seen_.insert(key);
        if (!j_.contains(key)) return;
        try {
            out = j_.at(key).get<T>();
        } catch (const nlohmann::json::exception &) {
            throw ConfigError(path(key), "wrong type");
        }
    }

    bool has(const std::string &key) const { return j_.contains(key); }
    const Json &raw(const std::string &key) {
        seen_.insert(key);
        return j_.at(key);
    }
    Reader sub(const std::string &key) {
        seen_.insert(key);
        static const Json empty = Json::object();
        return Reader(j_.contains(key) ? j_.at(key) : empty, path(key));
    }
    std::string path(const std::string &key) const { return prefix_.empty() ? key : prefix_ + "." + key; }

    void finish() const {
        for (const auto &item : j_.items()) {
            if (!seen_.count(item.key())) throw ConfigError(path(item.key()), "unknown key");
        }
    }

   private:
    const Json &j_;
    std::string prefix_;
    std::set<std::string> seen_;
};

std::vector<double> read_grid(const Json &j) {
    std::vector<double> out;
    try {
        if (j.is_array()) return j.get<std::vector<double>>();
        if (j.is_object()) {
            const double start = j.at("start").get<double>();
            const double stop = j.at("stop").get<double>();
            const double step = j.at("step").get<double>();
            if (!(step > 0.0)) throw ConfigError("chiT_grid.step", "must be > 0");
            const int count = static_cast<int>(std::floor((stop - start) / step + 1e-9));
            for (int k = 0; k <= count; ++k) out.push_back(start + k * step);
            return out;
        }
    } catch (const nlohmann::json::exception &) {
    }
    throw ConfigError("chiT_grid", "expected a list or {start, stop, step}");
}

}  // namespace

ScenarioConfig ScenarioConfig::from_json(const Json &j) {
    ScenarioConfig c;
    Reader r(j, "");
    r.get("scenario", c.scenario);
    r.get("seed", c.seed);
    r.get("workers", c.workers);
    r.get("output_dir", c.output_dir);
    {
        Reader s = r.sub("system");
        s.get("protocol", c.system.protocol);
        s.get("chi_hz", c.system.chi_hz);
        s.get("chi_f_hz", c.system.chi_f_hz);
        s.get("chi_prime_hz", c.system.chi_prime_hz);
        s.get("kerr_hz", c.system.kerr_hz);
        s.get("qubit_t1_s", c.system.qubit_t1_s);
        s.get("qubit_t2_ramsey_s", c.system.qubit_t2_ramsey_s);
        s.get("f_t1_s", c.system.f_t1_s);
        s.get("f_t2_ramsey_s", c.system.f_t2_ramsey_s);
        s.get("cavity_t1_s", c.system.cavity_t1_s);
        s.finish();
    }
    {
        Reader s = r.sub("noise");
        s.get("transmon_decay", c.noise.transmon_decay);
        s.get("transmon_dephasing", c.noise.transmon_dephasing);
        s.get("cavity_decay", c.noise.cavity_decay);
        s.finish();
    }
    {
        Reader s = r.sub("target");
        s.get("theta_pi", c.target.theta_pi);
        s.get("modes", c.target.modes);
        s.get("random_count", c.target.random_count);
        s.finish();
    }
    if (r.has("chiT_grid")) c.chi_t_grid_pi = read_grid(r.raw("chiT_grid"));
    {
        Reader s = r.sub("optimizer");
        s.get("eta", c.optimizer.eta);
        s.get("threshold", c.optimizer.threshold);
        s.get("max_iterations", c.optimizer.max_iterations);
        s.get("divergence_window", c.optimizer.divergence_window);
        s.get("min_gain", c.optimizer.min_gain);
        s.get("frame_corrections", c.optimizer.frame_corrections);
        s.get("envelope", c.optimizer.envelope);
        s.get("limit_low_pi", c.optimizer.limit_low_pi);
        s.get("limit_high_pi", c.optimizer.limit_high_pi);
        s.get("limit_grid_pi", c.optimizer.limit_grid_pi);
        s.get("limit_resolution_pi", c.optimizer.limit_resolution_pi);
        s.finish();
    }
    {
        Reader s = r.sub("propagation");
        s.get("steps", c.propagation.steps);
        s.get("audit", c.propagation.audit);
        s.get("audit_tolerance", c.propagation.audit_tolerance);
        s.get("trajectory_samples", c.propagation.trajectory_samples);
        s.finish();
    }
    {
        Reader s = r.sub("comparison");
        s.get("modes", c.comparison.modes);
        s.get("pd_samples", c.comparison.pd_samples);
        s.get("pd_threshold", c.comparison.pd_threshold);
        s.get("optimization_limit_pi", c.comparison.optimization_limit_pi);
        s.get("scan_step_pi", c.comparison.scan_step_pi);
        s.get("scan_high_pi", c.comparison.scan_high_pi);
        s.finish();
    }
    {
        Reader s = r.sub("tomography");
        s.get("epsilon", c.tomography.epsilon);
        s.get("initial_alpha", c.tomography.initial_alpha);
        s.get("noise_sigma", c.tomography.noise_sigma);
        s.get("noise_seeds", c.tomography.noise_seeds);
        s.get("optimized", c.tomography.optimized);
        s.get("wigner_extent", c.tomography.wigner_extent);
        s.get("wigner_step", c.tomography.wigner_step);
        s.finish();
    }
    r.finish();
    c.validate();
    return c;
}

Json ScenarioConfig::to_json() const {
    return Json{
        {"scenario", scenario},
        {"seed", seed},
        {"workers", workers},
        {"output_dir", output_dir},
        {"system",
         {{"protocol", system.protocol},
          {"chi_hz", system.chi_hz},
          {"chi_f_hz", system.chi_f_hz},
          {"chi_prime_hz", system.chi_prime_hz},
          {"kerr_hz", system.kerr_hz},
          {"qubit_t1_s", system.qubit_t1_s},
          {"qubit_t2_ramsey_s", system.qubit_t2_ramsey_s},
          {"f_t1_s", system.f_t1_s},
          {"f_t2_ramsey_s", system.f_t2_ramsey_s},
          {"cavity_t1_s", system.cavity_t1_s}}},
        {"noise",
         {{"transmon_decay", noise.transmon_decay},
          {"transmon_dephasing", noise.transmon_dephasing},
          {"cavity_decay", noise.cavity_decay}}},
        {"target", {{"theta_pi", target.theta_pi}, {"modes", target.modes}, {"random_count", target.random_count}}},
        {"chiT_grid", chi_t_grid_pi},
        {"optimizer",
         {{"eta", optimizer.eta},
          {"threshold", optimizer.threshold},
          {"max_iterations", optimizer.max_iterations},
          {"divergence_window", optimizer.divergence_window},
          {"min_gain", optimizer.min_gain},
          {"frame_corrections", optimizer.frame_corrections},
          {"envelope", optimizer.envelope},
          {"limit_low_pi", optimizer.limit_low_pi},
          {"limit_high_pi", optimizer.limit_high_pi},
          {"limit_grid_pi", optimizer.limit_grid_pi},
          {"limit_resolution_pi", optimizer.limit_resolution_pi}}},
        {"propagation",
         {{"steps", propagation.steps},
          {"audit", propagation.audit},
          {"audit_tolerance", propagation.audit_tolerance},
          {"trajectory_samples", propagation.trajectory_samples}}},
        {"comparison",
         {{"modes", comparison.modes},
          {"pd_samples", comparison.pd_samples},
          {"pd_threshold", comparison.pd_threshold},
          {"optimization_limit_pi", comparison.optimization_limit_pi},
          {"scan_step_pi", comparison.scan_step_pi},
          {"scan_high_pi", comparison.scan_high_pi}}},
        {"tomography",
         {{"epsilon", tomography.epsilon},
          {"initial_alpha", tomography.initial_alpha},
          {"noise_sigma", tomography.noise_sigma},
          {"noise_seeds", tomography.noise_seeds},
          {"optimized", tomography.optimized},
          {"wigner_extent", tomography.wigner_extent},
          {"wigner_step", tomography.wigner_step}}},
    };
}

namespace {

OptimizerConfig make_optimizer_config(const ScenarioConfig &c) {
    OptimizerConfig o;
    o.eta = c.optimizer.eta;
    o.threshold = c.optimizer.threshold;
    o.max_iterations = c.optimizer.max_iterations;
    o.divergence_window = c.optimizer.divergence_window;
    o.min_gain = c.optimizer.min_gain;
    o.frame_corrections = c.optimizer.frame_corrections;
    o.envelope.enabled = c.optimizer.envelope;
    o.limit_low = c.optimizer.limit_low_pi;
    o.limit_high = c.optimizer.limit_high_pi;
    o.limit_grid = c.optimizer.limit_grid_pi;
    o.limit_resolution = c.optimizer.limit_resolution_pi;
    o.propagation.steps = c.propagation.steps;
    o.propagation.audit = c.propagation.audit;
    o.propagation.audit_tolerance = c.propagation.audit_tolerance;
    o.propagation.trajectory_samples = c.propagation.trajectory_samples;
    return o;
}

void require(bool ok, const char *field, const char *message) {
    if (!ok) throw ConfigError(field, message);
}

}  // namespace

void ScenarioConfig::validate() const {
    require(kScenarios.count(scenario) == 1, "scenario",
            "expected duration-scan, optimize, protocol-compare, interference, wigner or limit-search");
    require(workers >= 1, "workers", "must be >= 1");
    require(!output_dir.empty(), "output_dir", "must not be empty");
    require(system.protocol == "ge" || system.protocol == "gf", "system.protocol", "expected ge or gf");
    auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
    require(positive(system.chi_hz), "system.chi_hz", "must be > 0");
    require(positive(system.chi_f_hz), "system.chi_f_hz", "must be > 0");
    require(std::isfinite(system.chi_prime_hz) && system.chi_prime_hz >= 0, "system.chi_prime_hz", "must be >= 0");
    require(std::isfinite(system.kerr_hz) && system.kerr_hz >= 0, "system.kerr_hz", "must be >= 0");
    require(positive(system.qubit_t1_s), "system.qubit_t1_s", "must be > 0");
    require(positive(system.qubit_t2_ramsey_s) && system.qubit_t2_ramsey_s <= 2.0 * system.qubit_t1_s,
            "system.qubit_t2_ramsey_s", "must lie in (0, 2 T1]");
    require(positive(system.f_t1_s), "system.f_t1_s", "must be > 0");
    require(positive(system.f_t2_ramsey_s) && system.f_t2_ramsey_s <= 2.0 * system.f_t1_s,
            "system.f_t2_ramsey_s", "must lie in (0, 2 T1]");
    require(positive(system.cavity_t1_s), "system.cavity_t1_s", "must be > 0");
    for (double t : target.theta_pi) require(std::isfinite(t), "target.theta_pi", "must be finite");
    require(target.modes >= 1, "target.modes", "must be >= 1");
    require(target.random_count >= 1, "target.random_count", "must be >= 1");
    require(!chi_t_grid_pi.empty(), "chiT_grid", "must contain at least one value");
    for (double x : chi_t_grid_pi) require(positive(x), "chiT_grid", "values must be > 0");
    make_optimizer_config(*this).validate();
    require(propagation.trajectory_samples >= 2, "propagation.trajectory_samples", "must be >= 2");
    require(comparison.modes >= 1, "comparison.modes", "must be >= 1");
    require(comparison.pd_samples >= 1, "comparison.pd_samples", "must be >= 1");
    require(positive(comparison.pd_threshold), "comparison.pd_threshold", "must be > 0");
    require(positive(comparison.optimization_limit_pi), "comparison.optimization_limit_pi", "must be > 0");
    require(positive(comparison.scan_step_pi), "comparison.scan_step_pi", "must be > 0");
    require(comparison.scan_high_pi >= comparison.optimization_limit_pi, "comparison.scan_high_pi",
            "must be >= optimization_limit_pi");
    require(std::isfinite(tomography.epsilon) && tomography.epsilon >= 0, "tomography.epsilon", "must be >= 0");
    require(std::isfinite(tomography.initial_alpha) && tomography.initial_alpha > 0, "tomography.initial_alpha",
            "must be > 0");
    require(std::isfinite(tomography.noise_sigma) && tomography.noise_sigma >= 0, "tomography.noise_sigma",
            "must be >= 0");
    require(tomography.noise_seeds >= 1, "tomography.noise_seeds", "must be >= 1");
    require(positive(tomography.wigner_extent), "tomography.wigner_extent", "must be > 0");
    require(positive(tomography.wigner_step), "tomography.wigner_step", "must be > 0");
}

SystemParams ScenarioConfig::system_params() const {
    const double two_pi = 2.0 * kPi;
    SystemParams p;
    p.protocol = protocol_from_string(system.protocol);
    p.chi = two_pi * system.chi_hz;
    p.chi_f = two_pi * system.chi_f_hz;
    p.chi_prime = two_pi * system.chi_prime_hz;
    p.kerr = two_pi * system.kerr_hz;
    p.dimensionless_units = false;
    auto dephasing = [](double t1, double t2) { return 2.0 * (1.0 / t2 - 0.5 / t1); };
    if (noise.transmon_decay) {
        p.rates.decay_eg = 1.0 / system.qubit_t1_s;
        p.rates.decay_fe = 1.0 / system.f_t1_s;
    }
    if (noise.transmon_dephasing) {
        p.rates.dephase_ee = dephasing(system.qubit_t1_s, system.qubit_t2_ramsey_s);
        p.rates.dephase_ff = dephasing(system.f_t1_s, system.f_t2_ramsey_s);
    }
    if (noise.cavity_decay) p.rates.cavity = 1.0 / system.cavity_t1_s;
    return p.dimensionless();
}

void apply_override(Json &config, const std::string &assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError(assignment, "override must look like key=value");
    const std::string path = assignment.substr(0, eq);
    const std::string text = assignment.substr(eq + 1);
    Json value = Json::parse(text, nullptr, false);
    if (value.is_discarded()) value = text;

    Json *node = &config;
    std::size_t start = 0;
    while (true) {
        const auto dot = path.find('.', start);
        const std::string key = path.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
        if (key.empty()) throw ConfigError(path, "empty path component");
        if (!node->is_object()) throw ConfigError(path, "cannot descend into a non-object");
        if (dot == std::string::npos) {
            (*node)[key] = value;
            return;
        }
        node = &(*node)[key];
        if (node->is_null()) *node = Json::object();
        start = dot + 1;
    }
}

namespace {

class OutputSet {
   public:
    explicit OutputSet(std::filesystem::path dir) : dir_(std::move(dir)) {}

    void add(const std::string &name, const std::string &content) {
        write_text_file(dir_ / name, content);
        files_.push_back({name, sha256_hex(content), content.size()});
    }
    void add_json(const std::string &name, const Json &j) { add(name, j.dump(2) + "\n"); }
    const std::vector<EmittedFile> &files() const { return files_; }
    const std::filesystem::path &dir() const { return dir_; }

   private:
    std::filesystem::path dir_;
    std::vector<EmittedFile> files_;
};

std::vector<TargetOp> scenario_targets(const ScenarioConfig &c) {
    if (!c.target.theta_pi.empty()) {
        std::vector<double> theta;
        for (double t : c.target.theta_pi) theta.push_back(t * kPi);
        return {TargetOp(theta)};
    }
    return random_targets(c.target.modes, c.target.random_count, c.seed);
}

std::vector<std::string> theta_header(int modes) {
    std::vector<std::string> h{"target"};
    for (int n = 0; n < modes; ++n) h.push_back("theta" + std::to_string(n) + "_over_pi");
    return h;
}

std::vector<std::string> theta_cells(std::size_t index, const TargetOp &t) {
    std::vector<std::string> cells{std::to_string(index)};
    for (double th : t.theta()) cells.push_back(format_double(th / kPi));
    return cells;
}

double incoherent_unoptimized(const SystemParams &system, int modes, double chi_t) {
    const bool gf = system.protocol == Protocol::gf;
    const double T = chi_t / system.chi;
    const double decay = gf ? system.rates.decay_fe : system.rates.decay_eg;
    const double deph = gf ? system.rates.dephase_ff : system.rates.dephase_ee;
    return transmon_decay_error(modes, decay * T, system.protocol, false) + dephasing_error(deph * T, false) +
           cavity_decay_error(modes, system.rates.cavity * T, false);
}

Json run_duration_scan(const ScenarioConfig &c, OutputSet &out) {
    const SystemParams system = c.system_params();
    const OptimizerConfig oc = make_optimizer_config(c);
    const std::vector<TargetOp> targets = scenario_targets(c);
    const std::size_t nt = targets.size();
    const std::size_t ng = c.chi_t_grid_pi.size();
    const int L = targets.front().modes();

    struct Point {
        double unopt = 0.0;
        double opt = 0.0;
        bool converged = false;
        int iterations = 0;
    };
    std::vector<Point> points(ng * nt);
    parallel_for(points.size(), c.workers, [&](std::size_t k) {
        const std::size_t g = k / nt;
        const TargetOp &t = targets[k % nt];
        const double T = c.chi_t_grid_pi[g] * kPi / system.chi;
        EnvelopeSpec env;
        if (oc.envelope.enabled) env = EnvelopeSpec::standard(T, true);
        const PulseSpec start = make_unoptimized(t, T, system, oc.frame_corrections, env);
        const std::vector<ModeState> finals = propagate_modes(start, system, oc.propagation);
        points[k].unopt = coherent_overlap_error(finals, t);
        const OptimizerReport rep = optimize(t, T, system, oc);
        points[k].opt = rep.final_error;
        points[k].converged = rep.converged;
        points[k].iterations = rep.iterations;
    });

    std::vector<std::string> header = theta_header(L);
    header.insert(header.end(), {"chiT_over_pi", "unoptimized_coherent", "optimized_coherent", "converged", "iterations"});
    CsvWriter per_target(header);
    CsvWriter curve({"chiT_over_pi", "unoptimized_coherent", "coherent_analytic", "optimized_coherent",
                     "converged_fraction", "incoherent_analytic", "unoptimized_total", "optimized_total"});
    for (std::size_t g = 0; g < ng; ++g) {
        const double x = c.chi_t_grid_pi[g];
        double unopt = 0.0, opt = 0.0, conv = 0.0;
        for (std::size_t i = 0; i < nt; ++i) {
            const Point &p = points[g * nt + i];
            unopt += p.unopt;
            opt += p.opt;
            conv += p.converged ? 1.0 : 0.0;
            std::vector<std::string> cells = theta_cells(i, targets[i]);
            cells.insert(cells.end(), {format_double(x), format_double(p.unopt), format_double(p.opt),
                                       p.converged ? "1" : "0", std::to_string(p.iterations)});
            per_target.row(cells);
        }
        unopt /= nt;
        opt /= nt;
        conv /= nt;
        const double inc = incoherent_unoptimized(system, L, x * kPi);
        curve.row(std::vector<double>{x, unopt, coherent_error_avg(L, x * kPi, false), opt, conv, inc, unopt + inc,
                                      opt + inc});
    }
    out.add("duration_scan.csv", curve.str());
    out.add("duration_scan_targets.csv", per_target.str());
    return Json{{"targets", nt}, {"grid_points", ng}};
}

Json run_optimize(const ScenarioConfig &c, OutputSet &out) {
    const SystemParams system = c.system_params();
    const OptimizerConfig oc = make_optimizer_config(c);
    const TargetOp target = scenario_targets(c).front();
    const double T = c.chi_t_grid_pi.front() * kPi / system.chi;
    EnvelopeSpec env;
    if (oc.envelope.enabled) env = EnvelopeSpec::standard(T, true);
    const PulseSpec start = make_unoptimized(target, T, system, oc.frame_corrections, env);
    const std::vector<ModeState> start_finals = propagate_modes(start, system, oc.propagation);
    const CoherentErrorSet start_errors = extract_errors(start_finals, target);
    const OptimizerReport rep = optimize(target, T, system, oc);

    CsvWriter trace({"iteration", "coherent_error"});
    for (std::size_t i = 0; i < rep.trace.size(); ++i) trace.row(std::vector<double>{double(i), rep.trace[i]});
    CsvWriter errs({"n", "pulse", "eps_L", "eps_T", "dtheta"});
    for (int n = 0; n < target.modes(); ++n) {
        const ModeError &a = start_errors.modes[n];
        errs.row(std::vector<std::string>{std::to_string(n), "unoptimized", format_double(a.eps_L),
                                          format_double(a.eps_T), format_double(a.dtheta)});
    }
    for (int n = 0; n < target.modes(); ++n) {
        const ModeError &b = rep.final_errors.modes[n];
        errs.row(std::vector<std::string>{std::to_string(n), "optimized", format_double(b.eps_L),
                                          format_double(b.eps_T), format_double(b.dtheta)});
    }
    out.add_json("optimizer_report.json", Json(rep));
    out.add_json("pulse_unoptimized.json", Json(start));
    out.add_json("pulse_optimized.json", Json(rep.pulse));
    out.add("trace.csv", trace.str());
    out.add("coherent_errors.csv", errs.str());
    return Json{{"converged", rep.converged},
                {"reason", to_string(rep.reason)},
                {"iterations", rep.iterations},
                {"unoptimized_error", coherent_overlap_error(start_finals, target)},
                {"final_error", rep.final_error}};
}

Json run_limit_search(const ScenarioConfig &c, OutputSet &out) {
    const SystemParams system = c.system_params();
    const OptimizerConfig oc = make_optimizer_config(c);
    const std::vector<TargetOp> targets = scenario_targets(c);
    std::vector<LimitSearch> searches(targets.size());
    parallel_for(targets.size(), c.workers,
                 [&](std::size_t i) { searches[i] = find_optimization_limit(targets[i], system, oc); });

    const int L = targets.front().modes();
    std::vector<std::string> header = theta_header(L);
    header.insert(header.end(), {"found", "limit_chiT_over_pi"});
    CsvWriter limits(header);
    CsvWriter evals({"target", "chiT_over_pi", "converged"});
    double sum = 0.0, maximum = 0.0;
    int found = 0;
    for (std::size_t i = 0; i < targets.size(); ++i) {
        const LimitSearch &s = searches[i];
        std::vector<std::string> cells = theta_cells(i, targets[i]);
        cells.push_back(s.found ? "1" : "0");
        cells.push_back(s.found ? format_double(s.chi_t / kPi) : "nan");
        limits.row(cells);
        for (const auto &[x, ok] : s.evaluated) {
            evals.row(std::vector<std::string>{std::to_string(i), format_double(x / kPi), ok ? "1" : "0"});
        }
        if (s.found) {
            sum += s.chi_t / kPi;
            maximum = std::max(maximum, s.chi_t / kPi);
            ++found;
        }
    }
    out.add("limits.csv", limits.str());
    out.add("limit_evaluations.csv", evals.str());
    Json summary{{"targets", targets.size()}, {"found", found}};
    summary["mean_limit_chiT_over_pi"] = found ? sum / found : 0.0;
    summary["max_limit_chiT_over_pi"] = maximum;
    out.add_json("limit_summary.json", summary);
    return summary;
}

Json run_protocol_compare(const ScenarioConfig &c, OutputSet &out) {
    SystemParams system = c.system_params();
    // The comparison neglects the Kerr terms.
    system.kerr = 0.0;
    system.chi_prime = 0.0;
    ComparisonOptions opts;
    opts.budget.optimization_limit = c.comparison.optimization_limit_pi * kPi;
    opts.budget.pd_samples = c.comparison.pd_samples;
    opts.budget.pd_threshold = c.comparison.pd_threshold;
    opts.budget.seed = c.seed;
    opts.budget.workers = c.workers;
    opts.budget.optimizer = make_optimizer_config(c);
    opts.budget.optimizer.frame_corrections = false;
    opts.scan_step = c.comparison.scan_step_pi * kPi;
    opts.scan_high = c.comparison.scan_high_pi * kPi;
    const std::vector<ProtocolOptimum> table = protocol_comparison(c.comparison.modes, system, opts);

    CsvWriter csv({"protocol", "optimized", "chiT_over_pi", "total", "coherent", "transmon_decay",
                   "transmon_dephasing", "cavity_decay", "pd_violation_decay", "pd_violation_dephasing",
                   "pd_samples"});
    std::vector<ErrorBudget> scans;
    Json rows = Json::array();
    for (const ProtocolOptimum &o : table) {
        const ErrorBudget &b = o.budget;
        csv.row(std::vector<std::string>{std::string(to_string(o.variant)), o.optimized ? "1" : "0",
                                         format_double(o.chi_t / kPi), format_double(o.error),
                                         format_double(b.coherent), format_double(b.transmon_decay),
                                         format_double(b.transmon_dephasing), format_double(b.cavity_decay),
                                         format_double(b.pd_violation_decay), format_double(b.pd_violation_dephasing),
                                         std::to_string(b.pd_samples)});
        rows.push_back(Json{{"label", protocol_label(o.variant, o.optimized)},
                            {"chiT_over_pi", o.chi_t / kPi},
                            {"error", o.error},
                            {"budget", b}});
        scans.insert(scans.end(), o.scan.begin(), o.scan.end());
    }
    std::vector<std::size_t> order(table.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return table[a].error < table[b].error; });
    Json ranking = Json::array();
    for (std::size_t i : order) ranking.push_back(protocol_label(table[i].variant, table[i].optimized));

    out.add("protocol_table.csv", csv.str());
    out.add("protocol_scan.csv", budget_csv(scans));
    Json summary{{"modes", c.comparison.modes}, {"protocols", rows}, {"ranking_best_first", ranking}};
    out.add_json("protocol_comparison.json", summary);
    return Json{{"ranking_best_first", ranking}};
}

/// Cavity input: coherent amplitudes restricted to the addressed modes.
std::vector<Complex> coherent_input(double alpha, int modes) {
    std::vector<Complex> c(modes);
    double norm = 0.0;
    for (int n = 0; n < modes; ++n) {
        c[n] = std::exp(-0.5 * alpha * alpha + n * std::log(alpha) - 0.5 * std::lgamma(n + 1.0));
        norm += std::norm(c[n]);
    }
    for (Complex &v : c) v /= std::sqrt(norm);
    return c;
}

struct GateOutput {
    HilbertLayout layout;
    DensityMatrix rho;
    TargetOp target;
    PulseSpec pulse;
    std::vector<Complex> input;
};

/// First stage with the configured pulse followed by the ideal unselective flip.
GateOutput prepare_final_state(const ScenarioConfig &c) {
    const SystemParams system = c.system_params();
    const OptimizerConfig oc = make_optimizer_config(c);
    const TargetOp target = scenario_targets(c).front();
    const int L = target.modes();
    const double T = c.chi_t_grid_pi.front() * kPi / system.chi;
    EnvelopeSpec env;
    if (oc.envelope.enabled) env = EnvelopeSpec::standard(T, true);
    PulseSpec pulse = make_unoptimized(target, T, system, oc.frame_corrections, env);
    if (c.tomography.optimized) pulse = optimize(target, T, system, oc).pulse;

    const HilbertLayout layout = HilbertLayout::with_headroom(system.transmon_levels(), L);
    const std::vector<Complex> input = coherent_input(c.tomography.initial_alpha, L);
    CVector psi = CVector::Zero(layout.dim());
    for (int n = 0; n < L; ++n) psi(layout.index(Level::g, n)) = input[n];
    const QuantumState initial(layout, psi);

    CMatrix rho;
    if (system.rates.any()) {
        rho = propagate_lindblad(pulse, system, DensityMatrix::pure(initial), oc.propagation).matrix;
    } else {
        rho = DensityMatrix::pure(propagate_state(pulse, system, initial, oc.propagation)).matrix;
    }
    // Ideal second stage: swap g and the driven level.
    Eigen::VectorXi perm(layout.dim());
    for (int i = 0; i < layout.dim(); ++i) perm(i) = i;
    const int N = layout.fock_truncation();
    const int driven = static_cast<int>(system.driven_level());
    for (int n = 0; n < N; ++n) std::swap(perm(n), perm(driven * N + n));
    Eigen::PermutationMatrix<Eigen::Dynamic> P(perm);
    rho = P * rho * P.transpose();
    return GateOutput{layout, DensityMatrix(layout, rho), target, pulse, input};
}

Json run_interference(const ScenarioConfig &c, OutputSet &out) {
    const GateOutput g = prepare_final_state(c);
    const SystemParams system = c.system_params();
    const double eps = c.tomography.epsilon;
    const PopulationTable p = populations(g.rho);
    const PopulationTable p_eps = interference_populations(g.rho, eps);

    const int L = g.target.modes();
    std::vector<double> c_abs(L);
    for (int n = 0; n < L; ++n) c_abs[n] = std::abs(g.input[n]);
    const PopulationTable first_order = interference_first_order(c_abs, g.target.theta(), eps);

    CsvWriter table({"n", "P_g", "P_eps_g", "P_eps_g_first_order_ideal"});
    for (int n = 0; n < p.fock; ++n) {
        table.row(std::vector<double>{double(n), p.at(Level::g, n), p_eps.at(Level::g, n),
                                      n < L ? first_order.at(Level::g, n) : 0.0});
    }
    std::ostringstream pop_csv, pop_eps_csv;
    write_population_csv(pop_csv, p);
    write_population_csv(pop_eps_csv, p_eps);

    PropagationConfig pc = make_optimizer_config(c).propagation;
    const CoherentErrorSet truth = extract_errors(propagate_modes(g.pulse, system, pc), g.target);

    CsvWriter est({"seed", "n", "dtheta_true", "dtheta_estimate", "uncertainty", "ill_conditioned"});
    double scatter = 0.0;
    int scatter_count = 0;
    for (int s = 0; s < c.tomography.noise_seeds; ++s) {
        PopulationTable noisy = p;
        PopulationTable noisy_eps = p_eps;
        if (c.tomography.noise_sigma > 0.0) {
            std::mt19937_64 rng(c.seed + static_cast<std::uint64_t>(s));
            std::normal_distribution<double> noise(0.0, c.tomography.noise_sigma);
            for (int n = 0; n < p.fock; ++n) {
                noisy.at(Level::g, n) = std::max(0.0, noisy.at(Level::g, n) + noise(rng));
                noisy_eps.at(Level::g, n) = std::max(0.0, noisy_eps.at(Level::g, n) + noise(rng));
            }
        }
        const PhaseErrorEstimate e = solve_phase_errors(noisy, noisy_eps, g.target.theta(), eps);
        for (int n = 0; n < L; ++n) {
            const double true_rel = wrap_phase(truth.modes[n].dtheta - truth.modes[0].dtheta);
            est.row(std::vector<std::string>{std::to_string(s), std::to_string(n), format_double(true_rel),
                                             format_double(e.dtheta[n]), format_double(e.uncertainty[n]),
                                             e.ill_conditioned ? "1" : "0"});
            if (n > 0) {
                scatter += std::pow(wrap_phase(e.dtheta[n] - true_rel), 2);
                ++scatter_count;
            }
        }
    }
    out.add("interference.csv", table.str());
    out.add("populations.csv", pop_csv.str());
    out.add("populations_displaced.csv", pop_eps_csv.str());
    out.add("phase_errors.csv", est.str());
    return Json{{"epsilon", eps},
                {"rms_phase_error_deviation", scatter_count ? std::sqrt(scatter / scatter_count) : 0.0}};
}

Json run_wigner(const ScenarioConfig &c, OutputSet &out) {
    const GateOutput g = prepare_final_state(c);
    const std::vector<Complex> alphas = alpha_grid(c.tomography.wigner_extent, c.tomography.wigner_step);
    const CMatrix rho_cav = cavity_state(g.rho);
    const std::vector<double> w = wigner(rho_cav, alphas);

    const int N = g.layout.fock_truncation();
    CVector ideal = CVector::Zero(N);
    for (int n = 0; n < g.target.modes(); ++n) ideal(n) = g.input[n] * std::polar(1.0, g.target.theta(n));
    const std::vector<double> w_target = wigner(ideal * ideal.adjoint(), alphas);

    std::ostringstream a, b;
    write_wigner_csv(a, alphas, w);
    write_wigner_csv(b, alphas, w_target);
    out.add("wigner.csv", a.str());
    out.add("wigner_target.csv", b.str());
    double overlap = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) overlap += std::abs(w[i] - w_target[i]);
    return Json{{"points", alphas.size()}, {"mean_abs_deviation", overlap / static_cast<double>(w.size())}};
}

}  // namespace

ScenarioResult run_scenario(const ScenarioConfig &config) {
    config.validate();
    OutputSet out(config.output_dir);
    const Json resolved = config.to_json();
    // Hash the physics only: where the files go does not change them.
    Json hashed = resolved;
    hashed.erase("output_dir");
    hashed.erase("workers");
    const std::string canonical = hashed.dump();
    out.add_json("config.json", resolved);

    Json summary;
    if (config.scenario == "duration-scan") summary = run_duration_scan(config, out);
    else if (config.scenario == "optimize") summary = run_optimize(config, out);
    else if (config.scenario == "protocol-compare") summary = run_protocol_compare(config, out);
    else if (config.scenario == "interference") summary = run_interference(config, out);
    else if (config.scenario == "wigner") summary = run_wigner(config, out);
    else summary = run_limit_search(config, out);

    Json files = Json::array();
    for (const EmittedFile &f : out.files()) {
        files.push_back(Json{{"path", f.path}, {"sha256", f.sha256}, {"bytes", f.bytes}});
    }
    Json manifest{{"code_version", kCodeVersion},
                  {"scenario", config.scenario},
                  {"seed", config.seed},
                  {"config_sha256", sha256_hex(canonical)},
                  {"files", files},
                  {"summary", summary}};
    const std::string text = manifest.dump(2) + "\n";
    write_text_file(out.dir() / "manifest.json", text);

    ScenarioResult result;
    result.files = out.files();
    result.files.push_back({"manifest.json", sha256_hex(text), text.size()});
    result.summary = summary;
    return result;
}

}  // namespace snapopt
