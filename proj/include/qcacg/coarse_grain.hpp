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
 * Coarse-graining channel on the one-particle sector and CG scheduling.
 *
 * One application merges the two subcells of level-L cell k into the single
 * site (floor(k/2), k mod 2) of level L+1, so the coarse flat index equals k
 * and the matrix dimension halves:
 *
 *   diagonal     rho'(k, k)  = sum_a rho((k,a), (k,a))
 *   same cell    rho((k,a), (k,a')), a != a'  is discarded
 *   cross cell   rho'(k, k') = 1/3 sum_{a,a'} rho((k,a), (k',a'))
 *
 * After L levels a coarse site f aggregates the 2^L level-0 sites
 * [f 2^L, (f+1) 2^L), i.e. level-0 cells 2^L x + 2^(L-1) b + s for f = 2x + b
 * and s < 2^(L-1). Cross-site entries carry the factor 3^-L.
 */
#pragma once

#include <cmath>
#include <complex>
#include <concepts>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "emergent.hpp"
#include "errors.hpp"
#include "lattice.hpp"
#include "puqca.hpp"

namespace qcacg {

/// Number of coarse-graining levels applied to a level-0 description.
struct CGLevel {
    std::size_t value{0};

    [[nodiscard]] constexpr std::size_t block_cells() const noexcept {
        return std::size_t{1} << value;
    }
    friend constexpr auto operator<=>(const CGLevel &, const CGLevel &) = default;
};

enum class ScheduleMode {
    spatial_only, ///< h = 1: one level-0 step per coarse sample
    spacetime,    ///< h = 2^L: keeps the emergent front speed at c
    custom,
};

/// Level plus the number of level-0 steps per coarse jump.
struct CGSchedule {
    CGLevel level{};
    std::size_t h_per_jump{1};
    ScheduleMode mode{ScheduleMode::spatial_only};

    [[nodiscard]] static CGSchedule spatial_only(CGLevel level) {
        return {level, 1, ScheduleMode::spatial_only};
    }
    [[nodiscard]] static CGSchedule spacetime(CGLevel level) {
        return {level, level.block_cells(), ScheduleMode::spacetime};
    }
    [[nodiscard]] static CGSchedule custom(CGLevel level, std::size_t h) {
        return {level, h, ScheduleMode::custom};
    }

    /// 1 <= h <= 2^L; a jump may not outrun the grouped cells.
    void validate() const {
        if (level.value >= 63) {
            throw ScheduleError("coarse-graining level too large");
        }
        if (h_per_jump < 1 || h_per_jump > level.block_cells()) {
            throw ScheduleError("h = " + std::to_string(h_per_jump) +
                                " violates 1 <= h <= 2^L = " +
                                std::to_string(level.block_cells()));
        }
        if (mode == ScheduleMode::spatial_only && h_per_jump != 1) {
            throw ScheduleError("spatial_only schedule requires h = 1");
        }
        if (mode == ScheduleMode::spacetime &&
            h_per_jump != level.block_cells()) {
            throw ScheduleError("spacetime schedule requires h = 2^L");
        }
    }
};

namespace detail {

template <std::floating_point T>
void require_coarsenable(const DensityMatrix<T> &rho, CGLevel level) {
    const std::size_t cells = rho.num_cells();
    if (rho.dim() == 0 || rho.dim() % 2 != 0 || level.value >= 63 ||
        cells % level.block_cells() != 0) {
        throw DivisibilityError("a " + std::to_string(cells) +
                                "-cell state cannot be coarse-grained to "
                                "level " +
                                std::to_string(level.value));
    }
}

} // namespace detail

/// One application of the lattice-wide CG channel. Dimension 2N -> N.
template <std::floating_point T>
[[nodiscard]] DensityMatrix<T> cg_once(const DensityMatrix<T> &rho) {
    detail::require_coarsenable(rho, CGLevel{1});
    const std::size_t cells = rho.num_cells();
    const T third = T{1} / T{3};
    DensityMatrix<T> out(cells);
    for (std::size_t k = 0; k < cells; ++k) {
        const auto r0 = rho.row(2 * k);
        const auto r1 = rho.row(2 * k + 1);
        auto dst = out.row(k);
        for (std::size_t kp = 0; kp < cells; ++kp) {
            if (kp == k) {
                dst[k] = r0[2 * k] + r1[2 * k + 1];
            } else {
                dst[kp] = third * (r0[2 * kp] + r0[2 * kp + 1] +
                                   r1[2 * kp] + r1[2 * kp + 1]);
            }
        }
    }
    return out;
}

/**
 * @brief Closed-form jump from level 0 to level L: diagonal entries are block
 * sums of populations, every off-diagonal entry is 3^-L times the sum of the
 * level-0 block it aggregates.
 */
template <std::floating_point T>
[[nodiscard]] DensityMatrix<T> cg_jump(const DensityMatrix<T> &rho,
                                       CGLevel level) {
    detail::require_coarsenable(rho, level);
    if (level.value == 0) {
        return rho;
    }
    const std::size_t block = level.block_cells(); // level-0 sites per site
    const std::size_t dim = rho.dim() / block;
    const T scale = std::pow(T{3}, -static_cast<T>(level.value));

    // Sum rows within each block, then columns.
    std::vector<std::complex<T>> rows(dim * rho.dim());
    for (std::size_t f = 0; f < dim; ++f) {
        auto dst = std::span(rows).subspan(f * rho.dim(), rho.dim());
        for (std::size_t i = f * block; i < (f + 1) * block; ++i) {
            const auto src = rho.row(i);
            for (std::size_t j = 0; j < rho.dim(); ++j) {
                dst[j] += src[j];
            }
        }
    }
    DensityMatrix<T> out(dim);
    for (std::size_t f = 0; f < dim; ++f) {
        const auto src = std::span(rows).subspan(f * rho.dim(), rho.dim());
        auto dst = out.row(f);
        for (std::size_t g = 0; g < dim; ++g) {
            if (g == f) {
                std::complex<T> pop{};
                for (std::size_t i = f * block; i < (f + 1) * block; ++i) {
                    pop += rho(i, i);
                }
                dst[g] = pop;
                continue;
            }
            std::complex<T> acc{};
            for (std::size_t j = g * block; j < (g + 1) * block; ++j) {
                acc += src[j];
            }
            dst[g] = scale * acc;
        }
    }
    return out;
}

/**
 * @brief True iff, inside every block of 2^L cells, subcell-0 population sits
 * only in the left half and subcell-1 population only in the right half.
 * Level 0 is trivially sorted.
 */
template <std::floating_point T>
[[nodiscard]] bool check_block_sorted(const DensityMatrix<T> &rho,
                                      CGLevel level, T tol = T{0}) {
    if (!rho.is_diagonal(tol)) {
        throw DomainError("block-sorted check needs a diagonal state");
    }
    detail::require_coarsenable(rho, level);
    if (level.value == 0) {
        return true;
    }
    const std::size_t block = level.block_cells();
    const std::size_t half = block / 2;
    for (std::size_t k = 0; k < rho.num_cells(); ++k) {
        const bool left = (k % block) < half;
        const T wrong = left ? rho(2 * k + 1, 2 * k + 1).real()
                             : rho(2 * k, 2 * k).real();
        if (std::abs(wrong) > tol) {
            return false;
        }
    }
    return true;
}

/**
 * @brief Block-sorted profile around the lattice center for a level-L jump:
 * `right_movers[l]` on subcell 0 of cell m - 1 - l and `left_movers[l]` on
 * subcell 1 of cell m + l, where m is the midpoint of the block holding cell
 * N/2. Each list may hold up to 2^(L-1) weights.
 */
template <std::floating_point T = double>
[[nodiscard]] DensityMatrix<T>
init_centered_block_profile(const LatticeConfig &config, CGLevel level,
                            std::span<const T> right_movers,
                            std::span<const T> left_movers) {
    config.validate();
    if (level.value == 0) {
        throw DomainError("block profile needs level >= 1");
    }
    config.require_divisible(level.value);
    const std::size_t block = level.block_cells();
    const std::size_t half = block / 2;
    if (right_movers.size() > half || left_movers.size() > half) {
        throw DomainError("at most 2^(L-1) weights per mode");
    }
    const std::size_t mid = (config.num_cells / 2) / block * block + half;
    std::vector<std::pair<SiteIndex, T>> weights;
    for (std::size_t l = 0; l < right_movers.size(); ++l) {
        weights.push_back({{mid - 1 - l, 0}, right_movers[l]});
    }
    for (std::size_t l = 0; l < left_movers.size(); ++l) {
        weights.push_back({{mid + l, 1}, left_movers[l]});
    }
    return init_population_profile<T>(config, weights);
}

/// One sample of a coarse trajectory.
template <std::floating_point T> struct CoarseSample {
    std::size_t level0_time{0};
    std::size_t coarse_time{0};
    /// Diagonal of the level-L state over flattened coarse sites.
    std::vector<T> populations;
    T coherence_l1{0};
    /// Largest off-diagonal modulus between distinct coarse cells.
    T max_cross_cell{0};
    /// Full level-L state, kept only when requested.
    std::optional<DensityMatrix<T>> state;

    [[nodiscard]] PopulationField<T> site_field() const {
        return PopulationField<T>::sites(populations);
    }
    [[nodiscard]] PopulationField<T> cell_field() const {
        return site_field().cell_totals();
    }
};

template <std::floating_point T> struct CoarseTrajectory {
    CGSchedule schedule{};
    double theta{0.0};
    std::vector<CoarseSample<T>> samples;
};

/// Level-L summary of a pure state without forming any matrix: with S_f the
/// amplitude sum over block f, coarse entries are 3^-L S_f conj(S_g).
template <std::floating_point T>
[[nodiscard]] CoarseSample<T> coarse_sample(const AmplitudeField<T> &field,
                                            CGLevel level) {
    const std::size_t dim = field.num_sites();
    if (level.value >= 63 || field.num_cells() % level.block_cells() != 0) {
        throw DivisibilityError("a " + std::to_string(field.num_cells()) +
                                "-cell state cannot be coarse-grained to "
                                "level " +
                                std::to_string(level.value));
    }
    const std::size_t block = level.block_cells();
    const std::size_t coarse = dim / block;
    const T scale = std::pow(T{3}, -static_cast<T>(level.value));

    CoarseSample<T> sample;
    sample.populations.assign(coarse, T{0});
    std::vector<T> moduli(coarse);
    for (std::size_t f = 0; f < coarse; ++f) {
        std::complex<T> sum{};
        T pop{0};
        for (std::size_t i = f * block; i < (f + 1) * block; ++i) {
            const auto z = field.flat(i);
            sum += z;
            pop += std::norm(z);
        }
        sample.populations[f] = pop;
        moduli[f] = std::abs(sum);
    }
    T total{0};
    T total_sq{0};
    for (const T m : moduli) {
        total += m;
        total_sq += m * m;
    }
    sample.coherence_l1 = scale * (total * total - total_sq);

    // Largest product over two distinct coarse cells.
    T best{0};
    T second{0};
    for (std::size_t x = 0; x < coarse / 2; ++x) {
        const T m = std::max(moduli[2 * x], moduli[2 * x + 1]);
        if (m > best) {
            second = best;
            best = m;
        } else if (m > second) {
            second = m;
        }
    }
    sample.max_cross_cell = scale * best * second;
    return sample;
}

template <std::floating_point T>
[[nodiscard]] CoarseSample<T> coarse_sample(const DensityMatrix<T> &rho,
                                            CGLevel level, bool keep_state) {
    DensityMatrix<T> coarse = cg_jump(rho, level);
    CoarseSample<T> sample;
    sample.populations = coarse.diagonal();
    sample.coherence_l1 = coherence_l1(coarse);
    sample.max_cross_cell = max_cross_cell_coherence(coarse);
    if (keep_state) {
        sample.state = std::move(coarse);
    }
    return sample;
}

namespace detail {

inline void check_trajectory(const CGSchedule &schedule,
                             const LatticeConfig &config) {
    schedule.validate();
    config.validate();
    config.require_divisible(schedule.level.value);
}

} // namespace detail

/**
 * @brief Coarse trajectory: the level-0 state is evolved h steps between
 * samples and every sample is the level-L image of the current level-0
 * state. Sample m sits at level-0 time m h and coarse time m.
 */
template <std::floating_point T>
[[nodiscard]] CoarseTrajectory<T>
run_cg_trajectory(const DensityMatrix<T> &rho0, const CGSchedule &schedule,
                  double theta, std::size_t coarse_steps,
                  const LatticeConfig &config, bool keep_states = false) {
    detail::check_trajectory(schedule, config);
    detail::require_matching(config, rho0.num_cells());
    validate_density(rho0);
    const std::size_t h = schedule.h_per_jump;
    detail::check_light_cone(config, rho0.support(), coarse_steps * h);

    CoarseTrajectory<T> traj{schedule, theta, {}};
    traj.samples.reserve(coarse_steps + 1);
    const detail::StepCoefficients<T> coef(theta);
    DensityMatrix<T> current = rho0;
    DensityMatrix<T> next(rho0.dim());
    DensityMatrix<T> scratch(rho0.dim());
    for (std::size_t m = 0;; ++m) {
        auto sample = coarse_sample(current, schedule.level, keep_states);
        sample.level0_time = m * h;
        sample.coarse_time = m;
        traj.samples.push_back(std::move(sample));
        if (m == coarse_steps) {
            break;
        }
        for (std::size_t t = 0; t < h; ++t) {
            detail::step_density_unchecked(current, next, scratch, coef);
            std::swap(current, next);
        }
    }
    return traj;
}

/// Pure-state variant; samples are identical to the density route applied to
/// |psi><psi| (states are never kept).
template <std::floating_point T>
[[nodiscard]] CoarseTrajectory<T>
run_cg_trajectory(const AmplitudeField<T> &psi0, const CGSchedule &schedule,
                  double theta, std::size_t coarse_steps,
                  const LatticeConfig &config) {
    detail::check_trajectory(schedule, config);
    detail::require_matching(config, psi0.num_cells());
    require_normalized(psi0);
    const std::size_t h = schedule.h_per_jump;
    detail::check_light_cone(config, psi0.support(), coarse_steps * h);

    CoarseTrajectory<T> traj{schedule, theta, {}};
    traj.samples.reserve(coarse_steps + 1);
    const detail::StepCoefficients<T> coef(theta);
    AmplitudeField<T> current = psi0;
    AmplitudeField<T> next(psi0.num_cells());
    for (std::size_t m = 0;; ++m) {
        auto sample = coarse_sample(current, schedule.level);
        sample.level0_time = m * h;
        sample.coarse_time = m;
        traj.samples.push_back(std::move(sample));
        if (m == coarse_steps) {
            break;
        }
        for (std::size_t t = 0; t < h; ++t) {
            detail::step_amplitudes_unchecked(current, next, coef);
            std::swap(current, next);
        }
    }
    return traj;
}

} // namespace qcacg
