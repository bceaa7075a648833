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

#include <string>
#include <utility>
#include <vector>

#include "config.hpp"

namespace spinjj::cli {

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

struct ExperimentResult {
    Table table;
    json summary;
    // Scalar results used as columns when the experiment is swept.
    std::vector<std::pair<std::string, double>> headline;
    // Name of the first numerical check that failed, empty when all passed.
    std::string failed_check;
};

/// Runs one experiment (ignoring any sweep). Throws ConfigError for
/// parameter combinations an experiment cannot accept and NumericalError when
/// an integrator check fails outright.
ExperimentResult run_experiment(const RunConfig& cfg);

/// Runs the configured experiment or sweep. Sweep points run on
/// `workers` threads; results are assembled in sweep order.
ExperimentResult run_config(const RunConfig& cfg, int workers = 1);

/// Worker count from SPINJJ_WORKERS (default 1). Throws ConfigError when set
/// to something other than a positive integer.
int workers_from_environment();

/// "%.12g"
std::string format_number(double x);

/// Comma-separated with a header line and '\n' terminators. Throws
/// NumericalError on NaN or infinite entries.
std::string format_csv(const Table& table);

/// Pretty-printed summary. Throws NumericalError if any number is not finite.
std::string format_summary(const json& summary);

struct WrittenFiles {
    std::string csv_path;
    std::string summary_path;
};

/// Writes <dir>/<experiment>.csv and <dir>/<experiment>.summary.json.
WrittenFiles write_outputs(const RunConfig& cfg, const ExperimentResult& result, const std::string& dir);

}  // namespace spinjj::cli
