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


#include "snapopt/io.hpp"

#include <charconv>
#include <fstream>
#include <memory>
#include <sstream>
#include <stdexcept>

#include <openssl/evp.h>

namespace snapopt {

void to_json(Json &j, const ModeDrive &m) {
    j = Json{{"lambda", m.lambda}, {"omega", m.omega}, {"alpha", m.alpha}, {"omega_ref", m.omega_ref}};
}

void from_json(const Json &j, ModeDrive &m) {
    j.at("lambda").get_to(m.lambda);
    j.at("omega").get_to(m.omega);
    j.at("alpha").get_to(m.alpha);
    // Older files carry no reference frequency: treat the pulse as uncorrected.
    m.omega_ref = j.contains("omega_ref") ? j.at("omega_ref").get<double>() : m.omega;
}

void to_json(Json &j, const EnvelopeSpec &e) { j = Json{{"beta", e.beta}, {"enabled", e.enabled}}; }

void from_json(const Json &j, EnvelopeSpec &e) {
    j.at("beta").get_to(e.beta);
    j.at("enabled").get_to(e.enabled);
}

void to_json(Json &j, const PulseSpec &p) {
    j = Json{{"T", p.gate_time},
             {"modes", p.modes},
             {"envelope", p.envelope},
             {"frame_corrections", p.frame_corrections}};
}

void from_json(const Json &j, PulseSpec &p) {
    j.at("T").get_to(p.gate_time);
    j.at("modes").get_to(p.modes);
    if (j.contains("envelope")) j.at("envelope").get_to(p.envelope);
    p.frame_corrections = j.value("frame_corrections", false);
}

void to_json(Json &j, const ModeError &e) {
    j = Json{{"eps_L", e.eps_L}, {"eps_T", e.eps_T}, {"dtheta", e.dtheta}};
}

void to_json(Json &j, const NoiseRates &r) {
    j = Json{{"decay_eg", r.decay_eg},
             {"decay_fe", r.decay_fe},
             {"dephase_ee", r.dephase_ee},
             {"dephase_ff", r.dephase_ff},
             {"cavity", r.cavity}};
}

void to_json(Json &j, const FidelityReport &r) {
    j = Json{{"fidelity", r.fidelity},
             {"error", r.error()},
             {"f_g", r.f_g},
             {"f_e", r.f_e},
             {"f_f", r.f_f},
             {"coherent_only", r.coherent_only},
             {"error_corrected", r.error_corrected},
             {"real_amplitudes", r.real_amplitudes},
             {"protocol", to_string(r.protocol)},
             {"averaging", to_string(r.averaging)}};
    if (r.averaging == Averaging::monte_carlo) {
        j["samples"] = r.samples;
        j["seed"] = r.seed;
        j["standard_error"] = r.standard_error;
    }
}

void to_json(Json &j, const OptimizerReport &r) {
    j = Json{{"converged", r.converged},
             {"reason", to_string(r.reason)},
             {"iterations", r.iterations},
             {"final_error", r.final_error},
             {"final_errors", r.final_errors.modes},
             {"trace", r.trace},
             {"pulse", r.pulse}};
}

void to_json(Json &j, const ErrorBudget &b) {
    j = Json{{"protocol", to_string(b.variant)},
             {"optimized", b.optimized},
             {"applicable", b.applicable},
             {"modes", b.modes},
             {"chi_t", b.chi_t},
             {"rates", b.rates},
             {"coherent", b.coherent},
             {"transmon_decay", b.transmon_decay},
             {"transmon_dephasing", b.transmon_dephasing},
             {"cavity_decay", b.cavity_decay},
             {"pd_violation_decay", b.pd_violation_decay},
             {"pd_violation_dephasing", b.pd_violation_dephasing},
             {"pd_samples", b.pd_samples},
             {"total", b.total()}};
}

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string sha256_hex(std::string_view bytes) {
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
        EVP_DigestUpdate(ctx.get(), bytes.data(), bytes.size()) != 1 ||
        EVP_DigestFinal_ex(ctx.get(), digest, &len) != 1) {
        throw std::runtime_error("sha256: digest failed");
    }
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[digest[i] >> 4];
        out += hex[digest[i] & 0xf];
    }
    return out;
}

void write_text_file(const std::filesystem::path &path, std::string_view content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot write " + path.string());
    os.write(content.data(), static_cast<std::streamsize>(content.size()));
}

std::string read_text_file(const std::filesystem::path &path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot read " + path.string());
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

CsvWriter::CsvWriter(std::vector<std::string> header) : columns_(header.size()) {
    for (std::size_t i = 0; i < header.size(); ++i) text_ += (i ? "," : "") + header[i];
    text_ += '\n';
}

void CsvWriter::row(const std::vector<double> &values) {
    std::vector<std::string> cells;
    cells.reserve(values.size());
    for (double v : values) cells.push_back(format_double(v));
    row(cells);
}

void CsvWriter::row(const std::vector<std::string> &cells) {
    if (cells.size() != columns_) throw ContractError("CsvWriter: row width differs from header");
    for (std::size_t i = 0; i < cells.size(); ++i) text_ += (i ? "," : "") + cells[i];
    text_ += '\n';
}

}  // namespace snapopt
