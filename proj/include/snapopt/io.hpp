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

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "snapopt/analytics.hpp"
#include "snapopt/errors.hpp"
#include "snapopt/optimizer.hpp"
#include "snapopt/pulse.hpp"

namespace snapopt {

using Json = nlohmann::ordered_json;

void to_json(Json &j, const ModeDrive &m);
void from_json(const Json &j, ModeDrive &m);
void to_json(Json &j, const EnvelopeSpec &e);
void from_json(const Json &j, EnvelopeSpec &e);
/// {"T", "modes": [{lambda, omega, alpha, omega_ref}], "envelope", "frame_corrections"}.
void to_json(Json &j, const PulseSpec &p);
void from_json(const Json &j, PulseSpec &p);
void to_json(Json &j, const ModeError &e);
void to_json(Json &j, const NoiseRates &r);
void to_json(Json &j, const FidelityReport &r);
void to_json(Json &j, const OptimizerReport &r);
void to_json(Json &j, const ErrorBudget &b);

/// Shortest round-trip decimal form ('.' separator, locale independent).
std::string format_double(double v);

/// Lowercase hex SHA-256.
std::string sha256_hex(std::string_view bytes);

/// Writes `content` verbatim (binary mode, '\n' line endings preserved).
void write_text_file(const std::filesystem::path &path, std::string_view content);
std::string read_text_file(const std::filesystem::path &path);

/// Minimal CSV builder: header row then one row per call.
class CsvWriter {
   public:
    explicit CsvWriter(std::vector<std::string> header);
    void row(const std::vector<double> &values);
    void row(const std::vector<std::string> &cells);
    const std::string &str() const { return text_; }

   private:
    std::size_t columns_;
    std::string text_;
};

}  // namespace snapopt
