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
 * Classical reference models (transport, diffusion, partitioned CA) and the
 * metrics used to compare coarse-grained automaton output against them.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <map>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "lattice.hpp"

namespace qcacg {

/**
 * @brief Nonnegative populations over cells (`sites_per_cell == 1`) or over
 * (cell, subcell) sites (`sites_per_cell == 2`, flattened as 2 * cell +
 * subcell).
 */
template <std::floating_point T = double> class PopulationField {
  public:
    static constexpr T mass_tolerance = T{1e-10};

    PopulationField() = default;

    [[nodiscard]] static PopulationField cells(std::vector<T> values) {
        return PopulationField(std::move(values), 1);
    }
    [[nodiscard]] static PopulationField sites(std::vector<T> values) {
        if (values.size() % 2 != 0) {
            throw DomainError("site field needs an even number of entries");
        }
        return PopulationField(std::move(values), 2);
    }

    [[nodiscard]] std::span<const T> values() const noexcept {
        return values_;
    }
    [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
    [[nodiscard]] std::size_t sites_per_cell() const noexcept {
        return sites_per_cell_;
    }
    [[nodiscard]] std::size_t num_cells() const noexcept {
        return values_.size() / sites_per_cell_;
    }
    [[nodiscard]] T operator[](std::size_t i) const { return values_[i]; }

    [[nodiscard]] T total() const noexcept {
        return std::accumulate(values_.begin(), values_.end(), T{0});
    }

    /// Sums the subcells of each cell; identity for a cell field.
    [[nodiscard]] PopulationField cell_totals() const {
        if (sites_per_cell_ == 1) {
            return *this;
        }
        std::vector<T> out(num_cells());
        for (std::size_t k = 0; k < out.size(); ++k) {
            out[k] = values_[2 * k] + values_[2 * k + 1];
        }
        return cells(std::move(out));
    }

    /// Throws DomainError unless entries are nonnegative with unit mass.
    void validate() const {
        for (const T v : values_) {
            if (!(v >= -mass_tolerance)) {
                throw DomainError("population field has a negative entry");
            }
        }
        if (std::abs(total() - T{1}) > mass_tolerance) {
            throw DomainError("population field has mass " +
                              std::to_string(total()));
        }
    }

  private:
    PopulationField(std::vector<T> values, std::size_t sites_per_cell)
        : values_(std::move(values)), sites_per_cell_(sites_per_cell) {}

    std::vector<T> values_;
    std::size_t sites_per_cell_{1};
};

/// Profile translated along characteristics by velocity * t cells (periodic).
/// Non-integer shifts need `interpolate`, which splits mass linearly between
/// the two neighbouring integer shifts.
template <std::floating_point T>
[[nodiscard]] PopulationField<T>
transport_reference(const PopulationField<T> &profile, double velocity,
                    double t, bool interpolate = false) {
    const double shift = velocity * t;
    const double whole = std::floor(shift);
    const double frac = shift - whole;
    const double nearest = std::round(shift);
    const std::size_t n = profile.size();
    auto shifted = [&](long long by) {
        std::vector<T> out(n);
        const long long m = static_cast<long long>(n);
        for (std::size_t i = 0; i < n; ++i) {
            const long long j = ((static_cast<long long>(i) + by) % m + m) % m;
            out[static_cast<std::size_t>(j)] = profile[i];
        }
        return out;
    };
    std::vector<T> out;
    if (std::abs(shift - nearest) <= 1e-9) {
        out = shifted(static_cast<long long>(nearest));
    } else if (!interpolate) {
        throw ResolutionError("shift of " + std::to_string(shift) +
                              " cells is not an integer");
    } else {
        const auto lo = shifted(static_cast<long long>(whole));
        const auto hi = shifted(static_cast<long long>(whole) + 1);
        out.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            out[i] = static_cast<T>((1.0 - frac) * lo[i] + frac * hi[i]);
        }
    }
    return profile.sites_per_cell() == 1
               ? PopulationField<T>::cells(std::move(out))
               : PopulationField<T>::sites(std::move(out));
}

/**
 * @brief Exact heat-kernel solution of d_t p = D d_x^2 p on the periodic
 * lattice: circular convolution with a sampled Gaussian of variance 2 D t,
 * renormalized to the input mass.
 */
template <std::floating_point T>
[[nodiscard]] PopulationField<T>
diffusion_reference(const PopulationField<T> &profile, double diffusivity,
                    double t) {
    if (!(diffusivity >= 0.0) || !(t >= 0.0)) {
        throw DomainError("diffusivity and time must be nonnegative");
    }
    const std::size_t n = profile.size();
    const double spread = 2.0 * diffusivity * t;
    if (spread == 0.0 || n == 0) {
        return profile;
    }
    std::vector<double> kernel(n);
    double kernel_sum = 0.0;
    for (std::size_t d = 0; d < n; ++d) {
        const double dist = static_cast<double>(std::min(d, n - d));
        kernel[d] = std::exp(-dist * dist / (2.0 * spread));
        kernel_sum += kernel[d];
    }
    for (auto &k : kernel) {
        k /= kernel_sum;
    }
    std::vector<double> out(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double p = profile[i];
        if (p == 0.0) {
            continue;
        }
        for (std::size_t d = 0; d < n; ++d) {
            out[(i + d) % n] += p * kernel[d];
        }
    }
    const double mass_in = profile.total();
    const double mass_out = std::accumulate(out.begin(), out.end(), 0.0);
    std::vector<T> result(n);
    for (std::size_t i = 0; i < n; ++i) {
        result[i] = static_cast<T>(
            mass_out > 0.0 ? out[i] * (mass_in / mass_out) : 0.0);
    }
    return profile.sites_per_cell() == 1
               ? PopulationField<T>::cells(std::move(result))
               : PopulationField<T>::sites(std::move(result));
}

/**
 * @brief One step of the classical two-subcell partitioned automaton: swap
 * the subcells inside every cell, then swap subcell 1 of x with subcell 0 of
 * x + 1 (periodic).
 */
template <std::floating_point T>
[[nodiscard]] PopulationField<T> pca_step(const PopulationField<T> &field) {
    if (field.sites_per_cell() != 2) {
        throw DomainError("pca_step needs a (cell, subcell) field");
    }
    const std::size_t n = field.num_cells();
    std::vector<T> inner(field.size());
    for (std::size_t x = 0; x < n; ++x) {
        inner[2 * x] = field[2 * x + 1];
        inner[2 * x + 1] = field[2 * x];
    }
    std::vector<T> outer(field.size());
    for (std::size_t x = 0; x < n; ++x) {
        const std::size_t next = (x + 1) % n;
        outer[2 * next] = inner[2 * x + 1];
        outer[2 * x + 1] = inner[2 * next];
    }
    return PopulationField<T>::sites(std::move(outer));
}

/// Sum of |rho_ij| over i != j.
template <std::floating_point T>
[[nodiscard]] T coherence_l1(const DensityMatrix<T> &rho) {
    T total{0};
    for (std::size_t i = 0; i < rho.dim(); ++i) {
        const auto r = rho.row(i);
        for (std::size_t j = 0; j < rho.dim(); ++j) {
            if (i != j) {
                total += std::abs(r[j]);
            }
        }
    }
    return total;
}

/// Largest |rho_ij| between sites of distinct cells.
template <std::floating_point T>
[[nodiscard]] T max_cross_cell_coherence(const DensityMatrix<T> &rho) {
    T worst{0};
    for (std::size_t i = 0; i < rho.dim(); ++i) {
        const auto r = rho.row(i);
        for (std::size_t j = 0; j < rho.dim(); ++j) {
            if (i / 2 != j / 2) {
                worst = std::max(worst, std::abs(r[j]));
            }
        }
    }
    return worst;
}

/// Second central moment of a field over cell positions x = 0, 1, ...
template <std::floating_point T>
[[nodiscard]] double variance(std::span<const T> values) {
    double mass = 0.0;
    double first = 0.0;
    for (std::size_t x = 0; x < values.size(); ++x) {
        mass += values[x];
        first += static_cast<double>(x) * values[x];
    }
    if (!(mass > 0.0)) {
        throw DomainError("variance of a field with zero mass");
    }
    const double mean = first / mass;
    double second = 0.0;
    for (std::size_t x = 0; x < values.size(); ++x) {
        const double d = static_cast<double>(x) - mean;
        second += d * d * values[x];
    }
    return second / mass;
}

template <std::floating_point T>
[[nodiscard]] double variance(const PopulationField<T> &field) {
    const auto totals = field.cell_totals();
    return variance(totals.values());
}

/**
 * @brief Light-cone front: the largest distance r from `center` such that the
 * mass at distance >= r exceeds `threshold`. Subcells are merged into cells
 * first.
 */
template <std::floating_point T>
[[nodiscard]] double front_position(const PopulationField<T> &field,
                                    double threshold, double center) {
    if (!(threshold > 0.0) || !(threshold < 1.0)) {
        throw DomainError("front threshold must lie in (0, 1)");
    }
    const auto totals = field.cell_totals();
    std::map<double, double, std::greater<>> by_distance;
    for (std::size_t x = 0; x < totals.size(); ++x) {
        by_distance[std::abs(static_cast<double>(x) - center)] += totals[x];
    }
    double tail = 0.0;
    for (const auto &[dist, mass] : by_distance) {
        tail += mass;
        if (tail > threshold) {
            return dist;
        }
    }
    return 0.0;
}

struct LinearFit {
    double slope{0.0};
    double intercept{0.0};
    double r_squared{0.0};
};

/// Ordinary least squares y = slope * x + intercept.
[[nodiscard]] inline LinearFit linear_fit(std::span<const double> xs,
                                          std::span<const double> ys) {
    if (xs.size() != ys.size() || xs.size() < 2) {
        throw FitError("linear fit needs at least two paired points");
    }
    const double n = static_cast<double>(xs.size());
    const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
    const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
    double sxx = 0.0;
    double sxy = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
        syy += (ys[i] - my) * (ys[i] - my);
    }
    if (sxx == 0.0) {
        throw FitError("linear fit needs at least two distinct abscissae");
    }
    LinearFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ss_res = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double r = ys[i] - (fit.slope * xs[i] + fit.intercept);
        ss_res += r * r;
    }
    fit.r_squared = syy > 0.0 ? std::clamp(1.0 - ss_res / syy, 0.0, 1.0) : 1.0;
    return fit;
}

struct ScalingFit {
    double exponent{0.0};
    double intercept{0.0};
    double r_squared{0.0};
    std::pair<double, double> window{0.0, 0.0};
};

/// Log-log least squares over the points with t in [window.first,
/// window.second].
[[nodiscard]] inline ScalingFit
fit_power_law(std::span<const std::pair<double, double>> series,
              std::pair<double, double> window) {
    std::vector<double> log_t;
    std::vector<double> log_y;
    for (const auto &[t, y] : series) {
        if (t < window.first || t > window.second) {
            continue;
        }
        if (!(t > 0.0) || !(y > 0.0)) {
            throw FitError("power-law fit needs positive t and y");
        }
        log_t.push_back(std::log(t));
        log_y.push_back(std::log(y));
    }
    if (log_t.size() < 5) {
        throw FitError("power-law fit needs at least 5 points in the window, "
                       "got " +
                       std::to_string(log_t.size()));
    }
    const LinearFit lin = linear_fit(log_t, log_y);
    return {lin.slope, lin.intercept, lin.r_squared, window};
}

/// Sum of |p_i - q_i|.
template <std::floating_point T>
[[nodiscard]] double l1_distance(const PopulationField<T> &p,
                                 const PopulationField<T> &q) {
    if (p.size() != q.size()) {
        throw DomainError("fields differ in size");
    }
    double total = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        total += std::abs(static_cast<double>(p[i]) - q[i]);
    }
    return total;
}

} // namespace qcacg
