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
 * Experiment orchestration and data-file emission.
 */
#pragma once

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Core>
#include <json.hpp>

#include "../coarse_grain.hpp"
#include "../emergent.hpp"
#include "../oracle.hpp"
#include "config.hpp"
#include "verify.hpp"

namespace qcacg::harness {

inline constexpr const char *version = "0.1.0";

/// Cumulative-mass threshold for front detection.
inline constexpr double front_threshold = 1e-3;

struct RunReport {
    ExperimentConfig config;
    std::vector<Check> checks;
    std::vector<std::string> files;
    /// Scalar summaries (fitted slopes, exponents) echoed into the manifest.
    std::map<std::string, double> summary;
    double wall_seconds{0.0};

    [[nodiscard]] bool passed() const {
        return std::all_of(checks.begin(), checks.end(),
                           [](const Check &c) { return c.pass; });
    }
};

/// Round-trip decimal form with 17 significant digits.
[[nodiscard]] inline std::string format_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

/// Minimal CSV writer; numbers go through format_number.
class CsvWriter {
  public:
    CsvWriter(const std::filesystem::path &path,
              std::initializer_list<const char *> header)
        : out_(path) {
        if (!out_) {
            throw Error("cannot open " + path.string() + " for writing");
        }
        bool first = true;
        for (const char *h : header) {
            out_ << (first ? "" : ",") << h;
            first = false;
        }
        out_ << '\n';
    }

    void row(std::initializer_list<double> values) {
        bool first = true;
        for (const double v : values) {
            out_ << (first ? "" : ",") << format_number(v);
            first = false;
        }
        out_ << '\n';
    }

  private:
    std::ofstream out_;
};

namespace detail {

using InitialData = std::variant<AmplitudeField<double>, DensityMatrix<double>>;

inline InitialData make_initial(const ExperimentConfig &c) {
    const auto lattice = c.lattice();
    switch (c.initial_state.kind) {
    case InitialState::Kind::centered_superposition:
        return init_centered_superposition(lattice);
    case InitialState::Kind::single_excitation:
        return init_single_excitation(lattice, c.initial_state.site);
    case InitialState::Kind::population_profile:
        break;
    }
    return init_population_profile<double>(
        lattice, std::span<const std::pair<SiteIndex, double>>(c.initial_state.weights));
}

/// Coarse trajectory at one level with as many jumps as fit in c.steps.
inline CoarseTrajectory<double> trajectory(const ExperimentConfig &c,
                                           const InitialData &init,
                                           const CGSchedule &schedule) {
    const std::size_t jumps = c.steps / schedule.h_per_jump;
    return std::visit(
        [&](const auto &state) {
            return run_cg_trajectory(state, schedule, c.theta, jumps, c.lattice());
        },
        init);
}

inline CoarseTrajectory<double> trajectory(const ExperimentConfig &c,
                                           const InitialData &init, std::size_t level) {
    return trajectory(c, init, c.schedule(level));
}

/// Mass-weighted mean cell of a field.
inline double center_of_mass(const PopulationField<double> &cells) {
    double mean = 0.0;
    for (std::size_t x = 0; x < cells.size(); ++x) {
        mean += static_cast<double>(x) * cells[x];
    }
    return mean / cells.total();
}

inline std::vector<double> front_series(const CoarseTrajectory<double> &traj) {
    const double center = center_of_mass(traj.samples.front().cell_field());
    std::vector<double> fronts;
    for (const auto &s : traj.samples) {
        fronts.push_back(front_position(s.cell_field(), front_threshold, center));
    }
    return fronts;
}

inline std::vector<double> coarse_times(const CoarseTrajectory<double> &traj) {
    std::vector<double> t;
    for (const auto &s : traj.samples) {
        t.push_back(static_cast<double>(s.coarse_time));
    }
    return t;
}

inline bool has_level(const ExperimentConfig &c, std::size_t level) {
    return std::find(c.levels.begin(), c.levels.end(), level) != c.levels.end();
}

inline void write_coherence(const std::filesystem::path &dir,
                            const std::vector<CoarseTrajectory<double>> &trajs,
                            RunReport &report) {
    CsvWriter csv(dir / "coherence.csv", {"level", "time", "coherence_l1", "bound"});
    for (const auto &traj : trajs) {
        const auto level = traj.schedule.level.value;
        for (const auto &s : traj.samples) {
            csv.row({static_cast<double>(level), static_cast<double>(s.level0_time),
                     s.coherence_l1, coherence_bound(level)});
        }
    }
    report.files.push_back("coherence.csv");
}

inline void write_lightcone(const std::filesystem::path &dir,
                            const std::vector<CoarseTrajectory<double>> &trajs,
                            RunReport &report) {
    CsvWriter csv(dir / "lightcone.csv", {"level", "time", "front_position"});
    for (const auto &traj : trajs) {
        const auto fronts = front_series(traj);
        for (std::size_t m = 0; m < fronts.size(); ++m) {
            csv.row({static_cast<double>(traj.schedule.level.value),
                     static_cast<double>(traj.samples[m].level0_time), fronts[m]});
        }
    }
    report.files.push_back("lightcone.csv");
}

inline void write_variance(const std::filesystem::path &dir,
                           const std::vector<CoarseTrajectory<double>> &trajs,
                           RunReport &report) {
    CsvWriter csv(dir / "variance.csv", {"level", "coarse_time", "variance", "sigma"});
    for (const auto &traj : trajs) {
        for (const auto &s : traj.samples) {
            const double var = variance(s.cell_field());
            csv.row({static_cast<double>(traj.schedule.level.value),
                     static_cast<double>(s.coarse_time), var, std::sqrt(var)});
        }
    }
    report.files.push_back("variance.csv");
}

inline std::vector<CoarseTrajectory<double>> all_levels(const ExperimentConfig &c,
                                                        const InitialData &init) {
    std::vector<CoarseTrajectory<double>> trajs;
    for (const auto level : c.levels) {
        trajs.push_back(trajectory(c, init, level));
    }
    return trajs;
}

inline void run_coherence_decay(const ExperimentConfig &c,
                                const std::filesystem::path &dir, RunReport &report) {
    const auto init = make_initial(c);
    const auto trajs = all_levels(c, init);
    write_coherence(dir, trajs, report);

    // Cross-cell entries stay under the bound at every sample.
    for (const auto &traj : trajs) {
        const auto level = traj.schedule.level.value;
        double worst = 0.0;
        for (const auto &s : traj.samples) {
            worst = std::max<double>(worst, s.max_cross_cell);
        }
        report.checks.push_back(check_at_most("max_cross_cell_L" + std::to_string(level),
                                              worst, coherence_bound(level) + 1e-9));
    }

    // Final-time coherence against level.
    std::vector<std::pair<std::size_t, double>> finals;
    for (const auto &traj : trajs) {
        finals.push_back({traj.schedule.level.value, traj.samples.back().coherence_l1});
    }
    std::sort(finals.begin(), finals.end());
    double violations = 0.0;
    for (std::size_t i = 1; i < finals.size(); ++i) {
        if (!(finals[i].second < finals[i - 1].second)) {
            violations += 1.0;
        }
    }
    report.checks.push_back(
        check_at_most("coherence_l1_strictly_decreasing_violations", violations, 0.0));

    std::vector<double> xs;
    std::vector<double> ys;
    for (const auto &[level, value] : finals) {
        if (level >= 1 && value > 0.0) {
            xs.push_back(static_cast<double>(level));
            ys.push_back(std::log(value));
        }
    }
    if (xs.size() >= 3) {
        const auto fit = linear_fit(xs, ys);
        report.summary["log_coherence_slope_per_level"] = fit.slope;
        report.checks.push_back(check_at_least("log_coherence_r_squared", fit.r_squared, 0.9));
    }
}

inline void run_lightcone(const ExperimentConfig &c, const std::filesystem::path &dir,
                          RunReport &report) {
    const auto init = make_initial(c);
    const auto trajs = all_levels(c, init);
    write_lightcone(dir, trajs, report);

    const auto reference = trajectory(c, init, CGSchedule::spatial_only(CGLevel{0}));
    const double base = linear_fit(coarse_times(reference), front_series(reference)).slope;
    report.summary["front_slope_L0"] = base;
    for (const auto &traj : trajs) {
        const auto level = traj.schedule.level.value;
        if (level == 0 || traj.samples.size() < 2) {
            continue;
        }
        // Coarse cells per coarse step; a jump of h level-0 steps covers
        // h / 2^L coarse cells at the level-0 speed.
        const double slope = linear_fit(coarse_times(traj), front_series(traj)).slope;
        const double expected = static_cast<double>(traj.schedule.h_per_jump) /
                                static_cast<double>(traj.schedule.level.block_cells());
        report.summary["front_slope_L" + std::to_string(level)] = slope;
        report.checks.push_back(check_relative(
            "front_slope_ratio_L" + std::to_string(level), slope / base, expected, 0.05));
    }
}

inline void run_variance_crossover(const ExperimentConfig &c,
                                   const std::filesystem::path &dir, RunReport &report) {
    const auto init = make_initial(c);
    const auto trajs = all_levels(c, init);
    write_variance(dir, trajs, report);

    const double t_max = static_cast<double>(c.steps);
    const double t_min = t_max / 8.0;
    std::map<std::size_t, double> exponents;
    for (const auto &traj : trajs) {
        const auto level = traj.schedule.level.value;
        const double h = static_cast<double>(traj.schedule.h_per_jump);
        std::vector<std::pair<double, double>> var_series;
        std::vector<std::pair<double, double>> sigma_series;
        for (const auto &s : traj.samples) {
            const double var = variance(s.cell_field());
            var_series.push_back({static_cast<double>(s.coarse_time), var});
            sigma_series.push_back({static_cast<double>(s.coarse_time), std::sqrt(var)});
        }
        const std::pair<double, double> window{t_min / h, t_max / h};
        try {
            const auto fit = fit_power_law(var_series, window);
            const auto sfit = fit_power_law(sigma_series, window);
            exponents[level] = fit.exponent;
            report.summary["variance_exponent_L" + std::to_string(level)] = fit.exponent;
            report.summary["variance_r_squared_L" + std::to_string(level)] = fit.r_squared;
            report.summary["sigma_exponent_L" + std::to_string(level)] = sfit.exponent;
        } catch (const FitError &e) {
            report.checks.push_back(
                {"variance_fit_L" + std::to_string(level) + ": " + e.what(),
                 std::nan(""), 0.0, "fit", false});
        }
    }

    if (exponents.contains(0)) {
        report.checks.push_back(check_within("variance_exponent_L0", exponents[0], 1.8, 2.2));
    }
    const std::size_t top = c.max_level();
    if (top > 0 && exponents.contains(top)) {
        const std::string tag = "L" + std::to_string(top);
        report.checks.push_back(
            check_within("variance_exponent_" + tag, exponents[top], 0.7, 1.4));
        if (exponents.contains(0)) {
            report.checks.push_back(check_at_least("exponent_gap_L0_minus_" + tag,
                                                   exponents[0] - exponents[top], 0.5));
        }
        // Final coarse profile against the diffusion reference with
        // D = 1 / 2^L, evolved for the elapsed level-0 time.
        const auto &traj = trajs[static_cast<std::size_t>(
            std::find(c.levels.begin(), c.levels.end(), top) - c.levels.begin())];
        const auto start = traj.samples.front().cell_field();
        const auto &last = traj.samples.back();
        const double diffusivity = 1.0 / static_cast<double>(CGLevel{top}.block_cells());
        const auto ref = diffusion_reference(start, diffusivity,
                                             static_cast<double>(last.level0_time));
        report.checks.push_back(
            check_at_most("diffusion_l1_final_" + tag, l1_distance(last.cell_field(), ref), 0.15));
    }
}

inline void run_transport_exact(const ExperimentConfig &c,
                                const std::filesystem::path &dir, RunReport &report) {
    const auto init = make_initial(c);
    const auto trajs = all_levels(c, init);
    CsvWriter csv(dir / "transport.csv", {"level", "coarse_time", "cell", "population"});
    for (const auto &traj : trajs) {
        const auto level = traj.schedule.level.value;
        for (const auto &s : traj.samples) {
            const auto cells = s.cell_field();
            for (std::size_t x = 0; x < cells.size(); ++x) {
                csv.row({static_cast<double>(level), static_cast<double>(s.coarse_time),
                         static_cast<double>(x), cells[x]});
            }
        }

        if (const auto *rho = std::get_if<DensityMatrix<double>>(&init)) {
            bool sorted = false;
            try {
                sorted = check_block_sorted(*rho, CGLevel{level}, 1e-15);
            } catch (const DomainError &) {
            }
            report.checks.push_back(check_at_least(
                "block_sorted_premise_L" + std::to_string(level), sorted ? 1.0 : 0.0, 1.0));
        }

        // Each mode is carried along its own characteristic.
        const auto &p0 = traj.samples.front().populations;
        const std::size_t n = p0.size() / 2;
        std::vector<double> right(n);
        std::vector<double> left(n);
        for (std::size_t x = 0; x < n; ++x) {
            right[x] = p0[2 * x];
            left[x] = p0[2 * x + 1];
        }
        const auto right_field = PopulationField<double>::cells(right);
        const auto left_field = PopulationField<double>::cells(left);
        const double v = static_cast<double>(traj.schedule.h_per_jump) /
                         static_cast<double>(traj.schedule.level.block_cells());
        double worst = 0.0;
        for (const auto &s : traj.samples) {
            const double shift = v * static_cast<double>(s.coarse_time);
            if (std::abs(shift - std::round(shift)) > 1e-12) {
                continue;
            }
            const double t = static_cast<double>(s.coarse_time);
            const auto r = transport_reference(right_field, v, t);
            const auto l = transport_reference(left_field, -v, t);
            for (std::size_t x = 0; x < n; ++x) {
                worst = std::max({worst, std::abs(s.populations[2 * x] - r[x]),
                                  std::abs(s.populations[2 * x + 1] - l[x])});
            }
        }
        report.checks.push_back(
            check_at_most("transport_max_abs_error_L" + std::to_string(level), worst, 1e-12));
    }
    report.files.push_back("transport.csv");
}

inline void run_verify_oracle(const ExperimentConfig &c,
                              const std::filesystem::path &dir, RunReport &report) {
    report.checks = oracle_checks(c.seed, c.theta, c.steps);
    nlohmann::json out = nlohmann::json::array();
    for (const auto &check : report.checks) {
        out.push_back(to_json(check));
    }
    std::ofstream(dir / "verify.json") << out.dump(2) << '\n';
    report.files.push_back("verify.json");
}

inline void run_custom(const ExperimentConfig &c, const std::filesystem::path &dir,
                       RunReport &report) {
    const auto init = make_initial(c);
    const auto trajs = all_levels(c, init);
    write_coherence(dir, trajs, report);
    write_lightcone(dir, trajs, report);
    write_variance(dir, trajs, report);
}

inline std::string utc_timestamp() {
    const std::time_t now =
        std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

} // namespace detail

[[nodiscard]] inline nlohmann::json manifest(const RunReport &report,
                                             const std::string &started_at) {
    nlohmann::json m;
    m["config"] = to_json(report.config);
    m["version"] = version;
    m["dependencies"] = {
        {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." +
                      std::to_string(EIGEN_MAJOR_VERSION) + "." +
                      std::to_string(EIGEN_MINOR_VERSION)},
        {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                              std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                              std::to_string(NLOHMANN_JSON_VERSION_PATCH)}};
    m["seed"] = report.config.seed;
    m["started_at"] = started_at;
    m["wall_time_seconds"] = report.wall_seconds;
    m["files"] = report.files;
    m["summary"] = report.summary;
    nlohmann::json checks = nlohmann::json::array();
    for (const auto &c : report.checks) {
        checks.push_back(to_json(c));
    }
    m["checks"] = checks;
    m["passed"] = report.passed();
    return m;
}

/**
 * @brief Runs one validated experiment, writing its data files and
 * manifest.json into config.output_dir (created if needed).
 */
inline RunReport run_experiment(const ExperimentConfig &config) {
    const auto started_at = detail::utc_timestamp();
    const auto t0 = std::chrono::steady_clock::now();
    const std::filesystem::path dir(config.output_dir);
    std::filesystem::create_directories(dir);

    RunReport report;
    report.config = config;
    switch (config.experiment) {
    case Experiment::coherence_decay:
        detail::run_coherence_decay(config, dir, report);
        break;
    case Experiment::lightcone:
        detail::run_lightcone(config, dir, report);
        break;
    case Experiment::variance_crossover:
        detail::run_variance_crossover(config, dir, report);
        break;
    case Experiment::transport_exact:
        detail::run_transport_exact(config, dir, report);
        break;
    case Experiment::verify_oracle:
        detail::run_verify_oracle(config, dir, report);
        break;
    case Experiment::custom:
        detail::run_custom(config, dir, report);
        break;
    }
    report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    report.files.push_back("manifest.json");
    std::ofstream(dir / "manifest.json") << manifest(report, started_at).dump(2) << '\n';
    return report;
}

} // namespace qcacg::harness
