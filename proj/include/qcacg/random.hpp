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
 * Seeded random one-particle states for property checks.
 */
#pragma once

#include <cmath>
#include <complex>
#include <concepts>
#include <cstddef>
#include <random>
#include <vector>

#include "lattice.hpp"

namespace qcacg {

using Rng = std::mt19937_64;

/// Normalized complex-Gaussian one-particle vector.
template <std::floating_point T = double>
[[nodiscard]] AmplitudeField<T> random_pure_field(std::size_t num_cells,
                                                  Rng &rng) {
    std::normal_distribution<T> gauss(T{0}, T{1});
    AmplitudeField<T> field(num_cells);
    T norm2{0};
    for (std::size_t k = 0; k < num_cells; ++k) {
        field.psi0()[k] = {gauss(rng), gauss(rng)};
        field.psi1()[k] = {gauss(rng), gauss(rng)};
        norm2 += std::norm(field.psi0()[k]) + std::norm(field.psi1()[k]);
    }
    const T scale = T{1} / std::sqrt(norm2);
    for (std::size_t k = 0; k < num_cells; ++k) {
        field.psi0()[k] *= scale;
        field.psi1()[k] *= scale;
    }
    return field;
}

/// Convex mixture of between 1 and `max_components` random pure states with
/// uniformly drawn weights.
template <std::floating_point T = double>
[[nodiscard]] DensityMatrix<T> random_density(std::size_t num_cells, Rng &rng,
                                              std::size_t max_components = 8) {
    std::uniform_int_distribution<std::size_t> count(1, max_components);
    std::uniform_real_distribution<T> unit(T{0}, T{1});
    const std::size_t components = count(rng);
    std::vector<T> weights(components);
    T total{0};
    for (auto &w : weights) {
        w = unit(rng) + T{1e-3};
        total += w;
    }
    DensityMatrix<T> rho(2 * num_cells);
    for (std::size_t c = 0; c < components; ++c) {
        const auto psi = random_pure_field<T>(num_cells, rng);
        const T w = weights[c] / total;
        for (std::size_t i = 0; i < rho.dim(); ++i) {
            const auto zi = w * psi.flat(i);
            auto r = rho.row(i);
            for (std::size_t j = 0; j < rho.dim(); ++j) {
                r[j] += zi * std::conj(psi.flat(j));
            }
        }
    }
    return rho;
}

/// Random point on the probability simplex (normalized exponential draws).
template <std::floating_point T = double>
[[nodiscard]] std::vector<T> random_distribution(std::size_t size, Rng &rng) {
    std::exponential_distribution<T> draw(T{1});
    std::vector<T> p(size);
    T total{0};
    for (auto &v : p) {
        v = draw(rng);
        total += v;
    }
    for (auto &v : p) {
        v /= total;
    }
    return p;
}

} // namespace qcacg
