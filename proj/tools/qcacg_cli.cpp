// Copyright 2026 The qcacg Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// Command-line entry point: qcacg run|preset|verify.
#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qcacg/harness/harness.hpp"

namespace {

namespace h = qcacg::harness;

enum ExitCode { ok = 0, checks_failed = 1, bad_config = 2, runtime_failure = 3 };

struct Overrides {
    std::optional<std::uint64_t> seed;
    bool strict_boundary{false};
    std::vector<std::size_t> levels;
    std::optional<double> theta;
    std::optional<std::size_t> steps;
    std::optional<std::string> out;

    void apply(h::json &raw) const {
        if (seed) {
            raw["seed"] = *seed;
        }
        if (strict_boundary) {
            raw["strict_boundary"] = true;
        }
        if (!levels.empty()) {
            raw["levels"] = levels;
        }
        if (theta) {
            raw["theta"] = *theta;
        }
        if (steps) {
            raw["steps"] = *steps;
        }
        if (out) {
            raw["output_dir"] = *out;
        }
    }
};

void add_overrides(CLI::App &cmd, Overrides &o) {
    cmd.add_option("--seed", o.seed, "Seed for randomized checks");
    cmd.add_flag("--strict-boundary", o.strict_boundary,
                 "Fail instead of wrapping when amplitude reaches the lattice edge");
    cmd.add_option("--levels", o.levels, "Coarse-graining levels, comma separated")
        ->delimiter(',');
    cmd.add_option("--theta", o.theta, "Mass angle");
    cmd.add_option("--steps", o.steps, "Level-0 steps");
    cmd.add_option("--out", o.out, "Output directory");
}

int execute(h::json raw, const Overrides &o) {
    o.apply(raw);
    h::ExperimentConfig config;
    try {
        config = h::validate_config(raw);
    } catch (const qcacg::ConfigError &e) {
        std::cerr << e.what() << '\n';
        return bad_config;
    }

    h::RunReport report;
    try {
        report = h::run_experiment(config);
    } catch (const qcacg::Error &e) {
        std::cerr << "error: " << e.what() << '\n';
        return runtime_failure;
    }

    std::printf("%s -> %s (%.2f s)\n", h::to_string(config.experiment).c_str(),
                config.output_dir.c_str(), report.wall_seconds);
    for (const auto &c : report.checks) {
        std::printf("  [%s] %s: value %s, tolerance %s (%s)\n", c.pass ? "PASS" : "FAIL",
                    c.name.c_str(), h::format_number(c.value).c_str(),
                    h::format_number(c.tolerance).c_str(), c.relation.c_str());
    }
    for (const auto &[key, value] : report.summary) {
        std::printf("  %s = %s\n", key.c_str(), h::format_number(value).c_str());
    }
    return report.passed() ? ok : checks_failed;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Coarse-grained Dirac quantum cellular automaton experiments"};
    app.require_subcommand(1);

    Overrides overrides;

    std::string config_path;
    auto *run = app.add_subcommand("run", "Run an experiment from a JSON config");
    run->add_option("config", config_path, "Config file")->required()->check(CLI::ExistingFile);
    add_overrides(*run, overrides);

    std::string preset_name;
    auto *preset = app.add_subcommand("preset", "Run a named preset");
    preset->add_option("name", preset_name, "Preset name")
        ->required()
        ->check(CLI::IsMember(h::preset_names()));
    add_overrides(*preset, overrides);

    auto *verify = app.add_subcommand("verify", "Run the oracle verification suite");
    add_overrides(*verify, overrides);

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            std::ifstream in(config_path);
            h::json raw;
            try {
                raw = h::json::parse(in);
            } catch (const h::json::parse_error &e) {
                std::cerr << config_path << ": " << e.what() << '\n';
                return bad_config;
            }
            return execute(std::move(raw), overrides);
        }
        if (preset->parsed()) {
            return execute(h::preset(preset_name), overrides);
        }
        return execute(h::preset("verify_oracle"), overrides);
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << '\n';
        return runtime_failure;
    }
}
