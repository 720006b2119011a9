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
/**
 * @file
 * Experiment configuration: JSON schema, validation and presets.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "../coarse_grain.hpp"
#include "../errors.hpp"
#include "../lattice.hpp"

namespace qcacg::harness {

using json = nlohmann::json;

enum class Experiment {
    coherence_decay,
    lightcone,
    variance_crossover,
    transport_exact,
    verify_oracle,
    custom,
};

NLOHMANN_JSON_SERIALIZE_ENUM(Experiment,
                             {{Experiment::coherence_decay, "coherence_decay"},
                              {Experiment::lightcone, "lightcone"},
                              {Experiment::variance_crossover, "variance_crossover"},
                              {Experiment::transport_exact, "transport_exact"},
                              {Experiment::verify_oracle, "verify_oracle"},
                              {Experiment::custom, "custom"}})

[[nodiscard]] inline std::string to_string(Experiment e) {
    return json(e).get<std::string>();
}

[[nodiscard]] inline std::string to_string(ScheduleMode m) {
    switch (m) {
    case ScheduleMode::spatial_only:
        return "spatial_only";
    case ScheduleMode::spacetime:
        return "spacetime";
    case ScheduleMode::custom:
        return "custom";
    }
    return "unknown";
}

struct InitialState {
    enum class Kind { centered_superposition, single_excitation, population_profile };
    Kind kind{Kind::centered_superposition};
    SiteIndex site{};
    std::vector<std::pair<SiteIndex, double>> weights;
};

struct ExperimentConfig {
    Experiment experiment{Experiment::custom};
    std::size_t num_cells{512};
    double theta{std::numbers::pi / 4};
    std::size_t steps{200};
    std::vector<std::size_t> levels{0};
    ScheduleMode schedule_mode{ScheduleMode::spatial_only};
    /// Only read for the custom schedule.
    std::size_t h_per_jump{1};
    InitialState initial_state{};
    std::uint64_t seed{0};
    std::string output_dir{"out"};
    bool strict_boundary{false};

    [[nodiscard]] LatticeConfig lattice() const {
        LatticeConfig cfg;
        cfg.num_cells = num_cells;
        cfg.theta = theta;
        cfg.boundary = strict_boundary ? Boundary::strict : Boundary::periodic;
        return cfg;
    }

    [[nodiscard]] CGSchedule schedule(std::size_t level) const {
        const CGLevel l{level};
        switch (schedule_mode) {
        case ScheduleMode::spatial_only:
            return CGSchedule::spatial_only(l);
        case ScheduleMode::spacetime:
            return CGSchedule::spacetime(l);
        case ScheduleMode::custom:
            break;
        }
        return CGSchedule::custom(l, h_per_jump);
    }

    [[nodiscard]] std::size_t max_level() const {
        return levels.empty() ? 0 : *std::max_element(levels.begin(), levels.end());
    }
};

[[nodiscard]] inline json to_json(const InitialState &s) {
    switch (s.kind) {
    case InitialState::Kind::centered_superposition:
        return {{"type", "centered_superposition"}};
    case InitialState::Kind::single_excitation:
        return {{"type", "single_excitation"},
                {"cell", s.site.cell},
                {"subcell", s.site.subcell}};
    case InitialState::Kind::population_profile:
        break;
    }
    json weights = json::array();
    for (const auto &[site, w] : s.weights) {
        weights.push_back({{"cell", site.cell}, {"subcell", site.subcell}, {"weight", w}});
    }
    return {{"type", "population_profile"}, {"weights", weights}};
}

[[nodiscard]] inline json to_json(const ExperimentConfig &c) {
    json j;
    j["experiment"] = c.experiment;
    j["num_cells"] = c.num_cells;
    j["theta"] = c.theta;
    j["steps"] = c.steps;
    j["levels"] = c.levels;
    j["schedule_mode"] = to_string(c.schedule_mode);
    j["h_per_jump"] = c.h_per_jump;
    j["initial_state"] = to_json(c.initial_state);
    j["seed"] = c.seed;
    j["output_dir"] = c.output_dir;
    j["strict_boundary"] = c.strict_boundary;
    return j;
}

/// Mixed initial states are evolved as dense 2N x 2N matrices.
inline constexpr std::size_t max_profile_cells = 1024;

namespace detail {

/// Reads an optional field, recording a violation on a type mismatch.
template <typename V>
void read_field(const json &raw, const char *key, V &out,
                std::vector<std::string> &violations) {
    if (!raw.contains(key)) {
        return;
    }
    try {
        out = raw.at(key).get<V>();
    } catch (const json::exception &) {
        violations.push_back(std::string(key) + ": wrong type (" +
                             raw.at(key).dump() + ")");
    }
}

inline void read_site(const json &raw, const std::string &where, SiteIndex &site,
                      std::vector<std::string> &violations) {
    const auto nonnegative = [&](const char *key) {
        const auto it = raw.find(key);
        return it != raw.end() && it->is_number_integer() && it->get<long long>() >= 0;
    };
    if (!raw.is_object() || !nonnegative("cell") || !nonnegative("subcell")) {
        violations.push_back(where + ": needs nonnegative integer cell and subcell");
        return;
    }
    const auto cell = raw.find("cell");
    const auto subcell = raw.find("subcell");
    site.cell = cell->get<std::size_t>();
    site.subcell = subcell->get<unsigned>();
}

inline InitialState read_initial_state(const json &raw,
                                       std::vector<std::string> &violations) {
    InitialState s;
    if (!raw.is_object() || !raw.contains("type") || !raw["type"].is_string()) {
        violations.push_back("initial_state: needs an object with a string type");
        return s;
    }
    const auto type = raw["type"].get<std::string>();
    if (type == "centered_superposition") {
        s.kind = InitialState::Kind::centered_superposition;
    } else if (type == "single_excitation") {
        s.kind = InitialState::Kind::single_excitation;
        read_site(raw, "initial_state", s.site, violations);
    } else if (type == "population_profile") {
        s.kind = InitialState::Kind::population_profile;
        const auto w = raw.find("weights");
        if (w == raw.end() || !w->is_array() || w->empty()) {
            violations.push_back("initial_state.weights: needs a nonempty array");
            return s;
        }
        for (std::size_t i = 0; i < w->size(); ++i) {
            const auto &entry = (*w)[i];
            const std::string where = "initial_state.weights[" + std::to_string(i) + "]";
            SiteIndex site;
            read_site(entry, where, site, violations);
            if (!entry.contains("weight") || !entry["weight"].is_number()) {
                violations.push_back(where + ": needs a numeric weight");
                continue;
            }
            s.weights.push_back({site, entry["weight"].get<double>()});
        }
    } else {
        violations.push_back("initial_state.type: unknown value '" + type + "'");
    }
    return s;
}

/// Occupied cell range of the declared initial state.
inline std::pair<std::size_t, std::size_t> initial_support(const ExperimentConfig &c) {
    switch (c.initial_state.kind) {
    case InitialState::Kind::centered_superposition:
        return {c.num_cells / 2, c.num_cells / 2};
    case InitialState::Kind::single_excitation:
        return {c.initial_state.site.cell, c.initial_state.site.cell};
    case InitialState::Kind::population_profile:
        break;
    }
    std::size_t lo = c.num_cells;
    std::size_t hi = 0;
    for (const auto &[site, w] : c.initial_state.weights) {
        if (w != 0.0) {
            lo = std::min(lo, site.cell);
            hi = std::max(hi, site.cell);
        }
    }
    return {lo, hi};
}

} // namespace detail

/**
 * @brief Parses and checks a raw JSON config. Missing fields take defaults;
 * every violation found is reported together in one ConfigError.
 */
[[nodiscard]] inline ExperimentConfig validate_config(const json &raw) {
    std::vector<std::string> violations;
    ExperimentConfig c;
    if (!raw.is_object()) {
        throw ConfigError({"config must be a JSON object"});
    }
    static const std::vector<std::string> known{
        "experiment",    "num_cells", "theta", "steps",      "levels",
        "schedule_mode", "h_per_jump", "initial_state", "seed", "output_dir",
        "strict_boundary"};
    for (const auto &[key, value] : raw.items()) {
        if (std::find(known.begin(), known.end(), key) == known.end()) {
            violations.push_back(key + ": unknown field");
        }
    }

    if (raw.contains("experiment")) {
        const auto &e = raw["experiment"];
        c.experiment = e.get<Experiment>();
        // Unknown strings fall back to the first enumerator; catch that.
        if (!e.is_string() || json(c.experiment) != e) {
            violations.push_back("experiment: unknown value " + e.dump());
        }
    } else {
        violations.push_back("experiment: required field is missing");
    }
    detail::read_field(raw, "num_cells", c.num_cells, violations);
    detail::read_field(raw, "theta", c.theta, violations);
    detail::read_field(raw, "steps", c.steps, violations);
    detail::read_field(raw, "levels", c.levels, violations);
    detail::read_field(raw, "h_per_jump", c.h_per_jump, violations);
    detail::read_field(raw, "seed", c.seed, violations);
    detail::read_field(raw, "output_dir", c.output_dir, violations);
    detail::read_field(raw, "strict_boundary", c.strict_boundary, violations);
    if (raw.contains("schedule_mode")) {
        const auto &m = raw["schedule_mode"];
        const std::string s = m.is_string() ? m.get<std::string>() : "";
        if (s == "spatial_only") {
            c.schedule_mode = ScheduleMode::spatial_only;
        } else if (s == "spacetime") {
            c.schedule_mode = ScheduleMode::spacetime;
        } else if (s == "custom") {
            c.schedule_mode = ScheduleMode::custom;
        } else {
            violations.push_back("schedule_mode: unknown value " + m.dump());
        }
    }
    if (raw.contains("initial_state")) {
        c.initial_state = detail::read_initial_state(raw["initial_state"], violations);
    }

    if (c.num_cells < 2) {
        violations.push_back("num_cells: need at least 2 cells, got " +
                             std::to_string(c.num_cells));
    }
    if (!std::isfinite(c.theta)) {
        violations.push_back("theta: must be finite");
    }
    if (c.levels.empty()) {
        violations.push_back("levels: need at least one level");
    }
    if (c.max_level() >= 32) {
        violations.push_back("levels: level " + std::to_string(c.max_level()) +
                             " is too large");
    } else if (c.num_cells >= 2 &&
               c.num_cells % (std::size_t{1} << c.max_level()) != 0) {
        violations.push_back(
            "levels: num_cells = " + std::to_string(c.num_cells) +
            " is not divisible by 2^" + std::to_string(c.max_level()) + " = " +
            std::to_string(std::size_t{1} << c.max_level()));
    }
    if (c.max_level() < 32) {
        for (const auto level : c.levels) {
            try {
                c.schedule(level).validate();
            } catch (const ScheduleError &e) {
                violations.push_back("schedule (level " + std::to_string(level) +
                                     "): " + e.what());
            }
        }
    }

    // Initial state checks that need the lattice size.
    const auto in_range = [&](SiteIndex s) {
        return s.cell < c.num_cells && s.subcell < 2;
    };
    if (c.initial_state.kind == InitialState::Kind::single_excitation &&
        !in_range(c.initial_state.site)) {
        violations.push_back("initial_state: site out of range");
    }
    if (c.initial_state.kind == InitialState::Kind::population_profile) {
        double total = 0.0;
        for (const auto &[site, w] : c.initial_state.weights) {
            if (!in_range(site)) {
                violations.push_back("initial_state.weights: site (" +
                                     std::to_string(site.cell) + ", " +
                                     std::to_string(site.subcell) +
                                     ") out of range");
            }
            if (!(w >= 0.0)) {
                violations.push_back("initial_state.weights: negative weight");
            }
            total += w;
        }
        if (!c.initial_state.weights.empty() && std::abs(total - 1.0) > 1e-12) {
            violations.push_back("initial_state.weights: sum to " +
                                 std::to_string(total) + ", not 1");
        }
    }
    if (c.initial_state.kind == InitialState::Kind::population_profile &&
        c.num_cells > max_profile_cells) {
        violations.push_back("initial_state: population profiles are evolved "
                             "as density matrices; keep num_cells <= " +
                             std::to_string(max_profile_cells));
    }

    if (c.strict_boundary && c.num_cells >= 2) {
        const auto [lo, hi] = detail::initial_support(c);
        if (lo <= hi && hi < c.num_cells) {
            const std::size_t margin = std::min(lo, c.num_cells - 1 - hi);
            if (margin < c.steps) {
                violations.push_back(
                    "steps: " + std::to_string(c.steps) +
                    " steps leave the lattice in strict boundary mode (margin " +
                    std::to_string(margin) + " cells)");
            }
        }
    }

    if (!violations.empty()) {
        throw ConfigError(std::move(violations));
    }
    return c;
}

/// Raw JSON for a named preset; the result still goes through validate_config.
[[nodiscard]] inline json preset(const std::string &name) {
    if (name == "coherence_decay") {
        return {{"experiment", "coherence_decay"},
                {"num_cells", 512},
                {"theta", std::numbers::pi / 4},
                {"steps", 200},
                {"levels", {0, 1, 2, 3, 4, 5, 6}},
                {"schedule_mode", "spatial_only"},
                {"initial_state", {{"type", "centered_superposition"}}},
                {"seed", 0},
                {"output_dir", "out/coherence_decay"},
                {"strict_boundary", true}};
    }
    if (name == "lightcone") {
        return {{"experiment", "lightcone"},
                {"num_cells", 256},
                {"theta", 0.0},
                {"steps", 100},
                {"levels", {0, 2}},
                {"schedule_mode", "spatial_only"},
                {"initial_state", {{"type", "centered_superposition"}}},
                {"seed", 0},
                {"output_dir", "out/lightcone"},
                {"strict_boundary", true}};
    }
    if (name == "variance_crossover") {
        return {{"experiment", "variance_crossover"},
                {"num_cells", 1024},
                {"theta", 0.2},
                {"steps", 400},
                {"levels", {0, 3}},
                {"schedule_mode", "spacetime"},
                {"initial_state", {{"type", "centered_superposition"}}},
                {"seed", 0},
                {"output_dir", "out/variance_crossover"},
                {"strict_boundary", true}};
    }
    if (name == "transport_exact") {
        return {{"experiment", "transport_exact"},
                {"num_cells", 128},
                {"theta", 0.0},
                {"steps", 80},
                {"levels", {1, 2, 3}},
                {"schedule_mode", "spacetime"},
                {"initial_state",
                 {{"type", "population_profile"},
                  {"weights",
                   {{{"cell", 64}, {"subcell", 0}, {"weight", 0.5}},
                    {{"cell", 63}, {"subcell", 1}, {"weight", 0.5}}}}}},
                {"seed", 0},
                {"output_dir", "out/transport_exact"},
                {"strict_boundary", false}};
    }
    if (name == "verify_oracle") {
        return {{"experiment", "verify_oracle"},
                {"num_cells", 4},
                {"theta", 0.7},
                {"steps", 8},
                {"levels", {0, 1}},
                {"schedule_mode", "spatial_only"},
                {"initial_state", {{"type", "centered_superposition"}}},
                {"seed", 20240601},
                {"output_dir", "out/verify_oracle"},
                {"strict_boundary", false}};
    }
    if (name == "custom") {
        return {{"experiment", "custom"},
                {"num_cells", 64},
                {"theta", 0.3},
                {"steps", 24},
                {"levels", {0, 1, 2}},
                {"schedule_mode", "spatial_only"},
                {"initial_state", {{"type", "centered_superposition"}}},
                {"seed", 0},
                {"output_dir", "out/custom"},
                {"strict_boundary", false}};
    }
    throw ConfigError({"unknown preset '" + name + "'"});
}

[[nodiscard]] inline std::vector<std::string> preset_names() {
    return {"coherence_decay", "lightcone",     "variance_crossover",
            "transport_exact", "verify_oracle", "custom"};
}

} // namespace qcacg::harness
