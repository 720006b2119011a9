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
 * Dirac transition function restricted to the one-particle sector.
 *
 * One step applies the per-cell rotation followed by the per-edge swap. In
 * the one-particle sector this collapses to the two-term recurrence
 *
 *   psi0'(k) = cos(theta) psi0(k-1) - i sin(theta) psi1(k-1)
 *   psi1'(k) = cos(theta) psi1(k+1) - i sin(theta) psi0(k+1)
 *
 * with cell indices taken modulo N. The transition operator is never
 * materialized: amplitudes step in O(N), density matrices in O(N^2).
 */
#pragma once

#include <cmath>
#include <complex>
#include <concepts>
#include <cstddef>
#include <string>

#include "errors.hpp"
#include "lattice.hpp"

namespace qcacg {

/// Number of transition-function applications.
struct StepSchedule {
    std::size_t steps{0};
};

/// theta = m c^2 dt / hbar.
[[nodiscard]] inline double theta_from_mass(double mass, double dt, double c,
                                            double hbar) {
    if (!(mass >= 0.0)) {
        throw DomainError("mass must be nonnegative");
    }
    if (!(dt > 0.0) || !(hbar > 0.0)) {
        throw DomainError("dt and hbar must be positive");
    }
    return mass * c * c * dt / hbar;
}

namespace detail {

template <std::floating_point T> struct StepCoefficients {
    std::complex<T> stay; // cos(theta)
    std::complex<T> flip; // -i sin(theta)

    explicit StepCoefficients(double theta)
        : stay{static_cast<T>(std::cos(theta)), T{0}},
          flip{T{0}, static_cast<T>(-std::sin(theta))} {}
};

/// Throws BoundaryError when, in strict mode, `steps` steps starting from the
/// given support would carry amplitude across the wrap-around point.
inline void
check_light_cone(const LatticeConfig &config,
                 const std::optional<std::pair<std::size_t, std::size_t>> &support,
                 std::size_t steps, std::size_t steps_done = 0) {
    if (config.boundary != Boundary::strict || !support || steps == 0) {
        return;
    }
    const std::size_t n = config.num_cells;
    const std::size_t margin =
        std::min(support->first, n - 1 - support->second);
    if (margin < steps) {
        throw BoundaryError(
            "light cone reaches the lattice boundary at step " +
            std::to_string(steps_done + margin + 1) + " (support [" +
            std::to_string(support->first) + ", " +
            std::to_string(support->second) + "] in " + std::to_string(n) +
            " cells)");
    }
}

template <std::floating_point T>
void step_amplitudes_unchecked(const AmplitudeField<T> &in,
                               AmplitudeField<T> &out,
                               const StepCoefficients<T> &coef) {
    const std::size_t n = in.num_cells();
    const auto p0 = in.psi0();
    const auto p1 = in.psi1();
    auto q0 = out.psi0();
    auto q1 = out.psi1();
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t left = (k + n - 1) % n;
        const std::size_t right = (k + 1) % n;
        q0[k] = coef.stay * p0[left] + coef.flip * p1[left];
        q1[k] = coef.stay * p1[right] + coef.flip * p0[right];
    }
}

/// out = E in E^dagger. The ket pass acts on whole rows, the bra pass on
/// columns with conjugated coefficients.
template <std::floating_point T>
void step_density_unchecked(const DensityMatrix<T> &in, DensityMatrix<T> &out,
                            DensityMatrix<T> &scratch,
                            const StepCoefficients<T> &coef) {
    const std::size_t dim = in.dim();
    const std::size_t n = dim / 2;
    const std::complex<T> stay = coef.stay;
    const std::complex<T> flip = coef.flip;
    const std::complex<T> flip_c = std::conj(coef.flip);

    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t left = (k + n - 1) % n;
        const std::size_t right = (k + 1) % n;
        const auto a0 = in.row(2 * left);
        const auto a1 = in.row(2 * left + 1);
        const auto b0 = in.row(2 * right);
        const auto b1 = in.row(2 * right + 1);
        auto r0 = scratch.row(2 * k);
        auto r1 = scratch.row(2 * k + 1);
        for (std::size_t j = 0; j < dim; ++j) {
            r0[j] = stay * a0[j] + flip * a1[j];
            r1[j] = stay * b1[j] + flip * b0[j];
        }
    }
    for (std::size_t i = 0; i < dim; ++i) {
        const auto src = scratch.row(i);
        auto dst = out.row(i);
        for (std::size_t k = 0; k < n; ++k) {
            const std::size_t left = (k + n - 1) % n;
            const std::size_t right = (k + 1) % n;
            dst[2 * k] = stay * src[2 * left] + flip_c * src[2 * left + 1];
            dst[2 * k + 1] =
                stay * src[2 * right + 1] + flip_c * src[2 * right];
        }
    }
}

inline void require_matching(const LatticeConfig &config, std::size_t num_cells) {
    config.validate();
    if (num_cells != config.num_cells) {
        throw DomainError("state has " + std::to_string(num_cells) +
                          " cells but lattice has " +
                          std::to_string(config.num_cells));
    }
}

} // namespace detail

template <std::floating_point T>
[[nodiscard]] AmplitudeField<T> step_amplitudes(const AmplitudeField<T> &field,
                                                double theta,
                                                const LatticeConfig &config) {
    detail::require_matching(config, field.num_cells());
    detail::check_light_cone(config, field.support(), 1);
    AmplitudeField<T> out(field.num_cells());
    detail::step_amplitudes_unchecked(field, out,
                                      detail::StepCoefficients<T>(theta));
    return out;
}

template <std::floating_point T>
[[nodiscard]] DensityMatrix<T> step_density(const DensityMatrix<T> &rho,
                                            double theta,
                                            const LatticeConfig &config) {
    detail::require_matching(config, rho.num_cells());
    validate_density(rho);
    detail::check_light_cone(config, rho.support(), 1);
    DensityMatrix<T> out(rho.dim());
    DensityMatrix<T> scratch(rho.dim());
    detail::step_density_unchecked(rho, out, scratch,
                                   detail::StepCoefficients<T>(theta));
    return out;
}

/// `schedule.steps` successive amplitude steps. In strict mode the whole run
/// is checked against the light cone before any work is done.
template <std::floating_point T>
[[nodiscard]] AmplitudeField<T> evolve(const AmplitudeField<T> &field,
                                       double theta,
                                       const StepSchedule &schedule,
                                       const LatticeConfig &config) {
    detail::require_matching(config, field.num_cells());
    detail::check_light_cone(config, field.support(), schedule.steps);
    const detail::StepCoefficients<T> coef(theta);
    AmplitudeField<T> current = field;
    AmplitudeField<T> next(field.num_cells());
    for (std::size_t t = 0; t < schedule.steps; ++t) {
        detail::step_amplitudes_unchecked(current, next, coef);
        std::swap(current, next);
    }
    return current;
}

template <std::floating_point T>
[[nodiscard]] DensityMatrix<T> evolve(const DensityMatrix<T> &rho,
                                      double theta,
                                      const StepSchedule &schedule,
                                      const LatticeConfig &config) {
    detail::require_matching(config, rho.num_cells());
    validate_density(rho);
    detail::check_light_cone(config, rho.support(), schedule.steps);
    const detail::StepCoefficients<T> coef(theta);
    DensityMatrix<T> current = rho;
    if (schedule.steps == 0) {
        return current;
    }
    DensityMatrix<T> next(rho.dim());
    DensityMatrix<T> scratch(rho.dim());
    for (std::size_t t = 0; t < schedule.steps; ++t) {
        detail::step_density_unchecked(current, next, scratch, coef);
        std::swap(current, next);
    }
    return current;
}

} // namespace qcacg
