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
 * Pass/fail records and the oracle verification suite.
 */
#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "../coarse_grain.hpp"
#include "../oracle.hpp"
#include "../random.hpp"

namespace qcacg::harness {

/// One assertion: `value` compared against `tolerance` with `relation`.
struct Check {
    std::string name;
    double value{0.0};
    double tolerance{0.0};
    std::string relation{"<="};
    bool pass{false};
};

[[nodiscard]] inline Check check_at_most(std::string name, double value,
                                         double tolerance) {
    return {std::move(name), value, tolerance, "<=", value <= tolerance};
}

[[nodiscard]] inline Check check_at_least(std::string name, double value,
                                          double tolerance) {
    return {std::move(name), value, tolerance, ">=", value >= tolerance};
}

/// Pass iff |value - target| <= rel * |target|; tolerance records rel.
[[nodiscard]] inline Check check_relative(std::string name, double value,
                                          double target, double rel) {
    const bool ok = std::abs(value - target) <= rel * std::abs(target);
    return {std::move(name) + " (target " + std::to_string(target) + ")",
            value, rel, "rel", ok};
}

[[nodiscard]] inline Check check_within(std::string name, double value,
                                        double lo, double hi) {
    return {std::move(name) + " in [" + std::to_string(lo) + ", " +
                std::to_string(hi) + "]",
            value, hi - lo, "in", value >= lo && value <= hi};
}

[[nodiscard]] inline nlohmann::json to_json(const Check &c) {
    nlohmann::json j;
    j["check"] = c.name;
    j["tolerance"] = c.tolerance;
    j["relation"] = c.relation;
    // NaN is not valid JSON; report it as null (and the check fails).
    if (std::isfinite(c.value)) {
        j["value"] = c.value;
    } else {
        j["value"] = nullptr;
    }
    j["pass"] = c.pass;
    return j;
}

namespace detail {

template <std::floating_point T>
double max_abs_diff(const DensityMatrix<T> &a, const DensityMatrix<T> &b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.data().size(); ++i) {
        worst = std::max<double>(worst, std::abs(a.data()[i] - b.data()[i]));
    }
    return worst;
}

} // namespace detail

/**
 * @brief Every brute-force check of the one-particle machinery against the
 * full register, plus the channel and bound certificates.
 */
[[nodiscard]] inline std::vector<Check> oracle_checks(std::uint64_t seed,
                                                      double theta = 0.7,
                                                      std::size_t steps = 8) {
    std::vector<Check> checks;
    Rng rng(seed);

    // Sector amplitudes against the full 8-qubit register.
    {
        LatticeConfig cfg;
        cfg.num_cells = 4;
        auto psi = random_pure_field(4, rng);
        auto full = embed_one_particle(psi);
        double worst = 0.0;
        double leak = 0.0;
        for (std::size_t t = 0; t < steps; ++t) {
            psi = step_amplitudes(psi, theta, cfg);
            full = oracle_step_full(full, theta);
            const auto proj = project_one_particle(full);
            for (std::size_t i = 0; i < psi.num_sites(); ++i) {
                worst = std::max<double>(worst, std::abs(psi.flat(i) - proj.flat(i)));
            }
            leak = std::max(leak, std::abs(1.0 - one_particle_weight(full)));
        }
        checks.push_back(check_at_most("sector_amplitudes_vs_full_register", worst, 1e-12));
        checks.push_back(check_at_most("one_particle_sector_leakage", leak, 1e-12));

        const auto psi0 = random_pure_field(4, rng);
        const auto evolved =
            evolve(density_from_amplitudes(psi0), theta, StepSchedule{steps}, cfg);
        auto reg = embed_one_particle(psi0);
        for (std::size_t t = 0; t < steps; ++t) {
            reg = oracle_step_full(reg, theta);
        }
        const auto via_register = restrict_to_one_particle(full_density(reg));
        checks.push_back(check_at_most("density_evolution_vs_full_register",
                                       detail::max_abs_diff(evolved, via_register),
                                       1e-12));

        const auto cg_full = restrict_to_one_particle(apply_local_cg_full(
            full_density(embed_one_particle(psi))));
        const auto cg_fast = cg_once(density_from_amplitudes(psi));
        checks.push_back(check_at_most("full_register_cg_vs_cg_once",
                                       detail::max_abs_diff(cg_full, cg_fast), 1e-12));
    }

    // Larger registers for the channel.
    {
        double worst = 0.0;
        for (const std::size_t n : {2, 6}) {
            const auto psi = random_pure_field(n, rng);
            const auto a = restrict_to_one_particle(
                apply_local_cg_full(full_density(embed_one_particle(psi))));
            const auto b = cg_once(density_from_amplitudes(psi));
            worst = std::max(worst, detail::max_abs_diff(a, b));
        }
        checks.push_back(check_at_most("full_register_cg_vs_cg_once_n2_n6", worst, 1e-12));
    }

    // cg_jump closed form against iterated cg_once.
    {
        double worst = 0.0;
        for (std::size_t level = 1; level <= 4; ++level) {
            const auto rho = random_density(64, rng);
            auto iterated = rho;
            for (std::size_t l = 0; l < level; ++l) {
                iterated = cg_once(iterated);
            }
            worst = std::max(worst,
                             detail::max_abs_diff(cg_jump(rho, CGLevel{level}), iterated));
        }
        checks.push_back(check_at_most("cg_jump_vs_iterated_cg_once", worst, 1e-12));
    }

    // Channel certificates.
    {
        const auto choi = choi_of_local_cg<double>();
        checks.push_back(check_at_least("choi_min_eigenvalue", choi.min_eigenvalue, -1e-12));
        checks.push_back(check_at_most("choi_trace_preservation_error",
                                       choi.trace_preservation_error, 1e-12));
        checks.push_back(
            check_at_most("choi_hermiticity_error", choi.hermiticity_error, 1e-12));
        const auto mutated = choi_of_local_cg<double>(1.0);
        checks.push_back(check_at_most("mutated_choi_min_eigenvalue",
                                       mutated.min_eigenvalue, -0.01));
    }

    // Sum-of-square-roots bound.
    {
        std::uniform_int_distribution<std::size_t> size(2, 64);
        double worst = -1.0;
        for (int trial = 0; trial < 1000; ++trial) {
            const auto p = random_distribution<double>(size(rng), rng);
            const auto r = lemma1_bound(p);
            worst = std::max(worst, r.sum_sqrt - r.bound);
        }
        checks.push_back(check_at_most("sum_sqrt_minus_sqrt_d_max", worst, 1e-12));
        const std::vector<double> uniform(16, 1.0 / 16.0);
        const auto u = lemma1_bound(uniform);
        checks.push_back(check_at_most("uniform_saturation_gap",
                                       std::abs(u.sum_sqrt - u.bound), 1e-12));
    }

    // Cross-cell coherence bound on random states.
    {
        double worst = -1.0;
        for (int trial = 0; trial < 20; ++trial) {
            const auto rho = random_density(64, rng);
            for (std::size_t level = 1; level <= 6; ++level) {
                const double m = max_cross_cell_coherence(cg_jump(rho, CGLevel{level}));
                worst = std::max(worst, m - coherence_bound(level));
            }
        }
        checks.push_back(check_at_most("coherence_bound_excess_max", worst, 1e-9));
    }
    return checks;
}

} // namespace qcacg::harness
