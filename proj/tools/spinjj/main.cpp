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

#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "config.hpp"
#include "experiments.hpp"
#include "spinjj/qcore.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

}  // namespace

int main(int argc, char** argv) {
    using namespace spinjj::cli;

    CLI::App app{"Spin-ensemble / Josephson-junction simulation runner"};
    app.require_subcommand(1);

    std::string config_path;
    std::vector<std::string> overrides;
    std::string out_dir;

    auto* run = app.add_subcommand("run", "Run the experiment described by a configuration file");
    run->add_option("--config", config_path, "JSON configuration")->required();
    run->add_option("--set", overrides, "Override a field, e.g. params.kappa=0.5 (repeatable)");
    run->add_option("--out", out_dir, "Output directory (default: output_path from the config)");

    auto* validate = app.add_subcommand("validate", "Parse and check a configuration without running it");
    validate->add_option("--config", config_path, "JSON configuration")->required();
    validate->add_option("--set", overrides, "Override a field (repeatable)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        const RunConfig cfg = load_config(config_path, overrides);
        if (validate->parsed()) {
            std::cout << config_path << ": ok (" << to_string(cfg.experiment) << ")\n";
            return kExitOk;
        }
        const int workers = workers_from_environment();
        const auto result = run_config(cfg, workers);
        const auto files = write_outputs(cfg, result, out_dir.empty() ? cfg.output_path : out_dir);
        std::cout << "wrote " << files.csv_path << "\n"
                  << "wrote " << files.summary_path << "\n";
        if (!result.failed_check.empty()) {
            std::cerr << "spinjj: numerical check failed: " << result.failed_check << "\n";
            return kExitNumerical;
        }
        return kExitOk;
    } catch (const ConfigError& e) {
        std::cerr << "spinjj: config error: " << config_path << ": " << e.what() << "\n";
        return kExitConfig;
    } catch (const spinjj::NumericalError& e) {
        std::cerr << "spinjj: numerical check failed: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "spinjj: error: " << e.what() << "\n";
        return 1;
    }
}
