// Copyright 2026 The spinjj Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "spinjj/model.hpp"

namespace spinjj::cli {

using json = nlohmann::json;

/// Invalid configuration; `line` is 1-based, 0 when no source line applies.
class ConfigError : public std::runtime_error {
  public:
    ConfigError(const std::string& what, std::size_t line = 0);
    std::size_t line() const { return line_; }

  private:
    std::size_t line_;
};

enum class Experiment { Estimate, Concurrence, Holonomic, PhaseGate, SwapGate, ValidateEffective, ValidateRwa };

std::string_view to_string(Experiment e);
std::optional<Experiment> parse_experiment(std::string_view name);

struct Sweep {
    std::string variable;  // dotted path into the config, e.g. "params.kappa"
    double start = 0.0;
    double stop = 0.0;
    std::size_t points = 2;

    std::vector<double> values() const;
};

struct RunConfig {
    Experiment experiment = Experiment::Estimate;
    SystemParams params;
    json options = json::object();  // experiment options with defaults filled in
    std::optional<Sweep> sweep;
    std::uint64_t seed = 12345;
    std::string output_path = "out";

    /// Document with every field resolved; sweeps rewrite one field of it.
    json raw;
};

/// Default options for each experiment.
json default_options(Experiment e);

/// Sets a dotted path (creating objects as needed). The value text is parsed as
/// JSON when possible, otherwise stored as a string.
void apply_override(json& doc, std::string_view assignment);

/// Parses and validates a configuration document. `source` is the original
/// text, used to attach line numbers to errors.
RunConfig parse_config(const json& doc, std::string_view source = {});

/// Reads a file, applies overrides, and validates.
RunConfig load_config(const std::string& path, const std::vector<std::string>& overrides);

json params_to_json(const SystemParams& p);

/// Copy of `cfg` with the dotted path set to `value` and re-validated.
RunConfig with_value(const RunConfig& cfg, const std::string& path, double value);

}  // namespace spinjj::cli
