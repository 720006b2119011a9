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
 * Lattice geometry, one-particle state containers and initial conditions.
 *
 * A lattice of N cells carries two subcells per cell. Sites are addressed by
 * (cell, subcell) pairs and flattened as 2 * cell + subcell, so a
 * one-particle state is a vector of length 2N and a one-particle density
 * matrix is a dense 2N x 2N complex matrix stored row-major.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <concepts>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "errors.hpp"

namespace qcacg {

/// Default absolute tolerance for normalization/Hermiticity checks at a given
/// precision.
template <std::floating_point T> constexpr T default_tolerance() {
    if constexpr (std::is_same_v<T, float>) {
        return T{1e-5};
    } else {
        return T{1e-12};
    }
}

enum class Boundary {
    periodic,
    /// Periodic storage, but any evolution that lets the light cone touch the
    /// wrap-around point is refused.
    strict,
};

struct LatticeConfig {
    std::size_t num_cells{2};
    double theta{0.0};
    Boundary boundary{Boundary::periodic};
    double dx{1.0};
    double dt{1.0};

    [[nodiscard]] double speed() const noexcept { return dx / dt; }
    [[nodiscard]] std::size_t num_sites() const noexcept {
        return 2 * num_cells;
    }

    void validate() const {
        if (num_cells < 2) {
            throw DomainError("lattice needs at least 2 cells, got " +
                              std::to_string(num_cells));
        }
        if (!(dx > 0.0) || !(dt > 0.0) || !std::isfinite(dx / dt)) {
            throw DomainError("dx and dt must be positive with finite ratio");
        }
    }

    /// Throws unless the lattice can be coarse-grained `level` times.
    void require_divisible(std::size_t level) const {
        if (level >= 63 || num_cells % (std::size_t{1} << level) != 0) {
            throw DivisibilityError(
                std::to_string(num_cells) + " cells are not divisible by 2^" +
                std::to_string(level));
        }
    }
};

struct SiteIndex {
    std::size_t cell{0};
    unsigned subcell{0};

    [[nodiscard]] constexpr std::size_t flat() const noexcept {
        return 2 * cell + subcell;
    }
    [[nodiscard]] static constexpr SiteIndex
    from_flat(std::size_t index) noexcept {
        return {index / 2, static_cast<unsigned>(index % 2)};
    }

    friend constexpr auto operator<=>(const SiteIndex &,
                                      const SiteIndex &) = default;
};

inline void check_site(const LatticeConfig &config, SiteIndex site) {
    if (site.cell >= config.num_cells || site.subcell > 1) {
        throw IndexError("site (" + std::to_string(site.cell) + "," +
                         std::to_string(site.subcell) +
                         ") outside lattice of " +
                         std::to_string(config.num_cells) + " cells");
    }
}

/**
 * @brief Pure one-particle state: the amplitudes of the right-moving
 * (subcell 0) and left-moving (subcell 1) spinor components per cell.
 */
template <std::floating_point T = double> class AmplitudeField {
  public:
    using complex_type = std::complex<T>;

    AmplitudeField() = default;
    explicit AmplitudeField(std::size_t num_cells)
        : psi0_(num_cells), psi1_(num_cells) {}
    AmplitudeField(std::vector<complex_type> psi0,
                   std::vector<complex_type> psi1)
        : psi0_(std::move(psi0)), psi1_(std::move(psi1)) {
        if (psi0_.size() != psi1_.size()) {
            throw DomainError("spinor components differ in length");
        }
    }

    [[nodiscard]] std::size_t num_cells() const noexcept {
        return psi0_.size();
    }
    [[nodiscard]] std::size_t num_sites() const noexcept {
        return 2 * psi0_.size();
    }

    [[nodiscard]] std::span<const complex_type> psi0() const noexcept {
        return psi0_;
    }
    [[nodiscard]] std::span<const complex_type> psi1() const noexcept {
        return psi1_;
    }
    [[nodiscard]] std::span<complex_type> psi0() noexcept { return psi0_; }
    [[nodiscard]] std::span<complex_type> psi1() noexcept { return psi1_; }

    [[nodiscard]] complex_type &operator[](SiteIndex site) {
        return site.subcell == 0 ? psi0_[site.cell] : psi1_[site.cell];
    }
    [[nodiscard]] const complex_type &operator[](SiteIndex site) const {
        return site.subcell == 0 ? psi0_[site.cell] : psi1_[site.cell];
    }
    [[nodiscard]] complex_type flat(std::size_t index) const {
        return (*this)[SiteIndex::from_flat(index)];
    }

    [[nodiscard]] T norm_squared() const noexcept {
        T total{0};
        for (std::size_t k = 0; k < psi0_.size(); ++k) {
            total += std::norm(psi0_[k]) + std::norm(psi1_[k]);
        }
        return total;
    }

    /// Cell-resolved probabilities |psi0(k)|^2 + |psi1(k)|^2.
    [[nodiscard]] std::vector<T> cell_populations() const {
        std::vector<T> out(psi0_.size());
        for (std::size_t k = 0; k < out.size(); ++k) {
            out[k] = std::norm(psi0_[k]) + std::norm(psi1_[k]);
        }
        return out;
    }

    /// Inclusive range of cells holding nonzero amplitude, if any.
    [[nodiscard]] std::optional<std::pair<std::size_t, std::size_t>>
    support() const noexcept {
        std::optional<std::pair<std::size_t, std::size_t>> range;
        for (std::size_t k = 0; k < psi0_.size(); ++k) {
            if (psi0_[k] != complex_type{} || psi1_[k] != complex_type{}) {
                if (!range) {
                    range.emplace(k, k);
                }
                range->second = k;
            }
        }
        return range;
    }

  private:
    std::vector<complex_type> psi0_;
    std::vector<complex_type> psi1_;
};

/**
 * @brief Dense one-particle density matrix over flattened (cell, subcell)
 * sites.
 */
template <std::floating_point T = double> class DensityMatrix {
  public:
    using complex_type = std::complex<T>;
    using EigenMatrix =
        Eigen::Matrix<complex_type, Eigen::Dynamic, Eigen::Dynamic,
                      Eigen::RowMajor>;

    DensityMatrix() = default;
    explicit DensityMatrix(std::size_t dim) : dim_(dim), data_(dim * dim) {}

    [[nodiscard]] std::size_t dim() const noexcept { return dim_; }
    [[nodiscard]] std::size_t num_cells() const noexcept { return dim_ / 2; }

    [[nodiscard]] complex_type &operator()(std::size_t row, std::size_t col) {
        return data_[row * dim_ + col];
    }
    [[nodiscard]] const complex_type &operator()(std::size_t row,
                                                 std::size_t col) const {
        return data_[row * dim_ + col];
    }

    [[nodiscard]] std::span<complex_type> row(std::size_t r) noexcept {
        return {data_.data() + r * dim_, dim_};
    }
    [[nodiscard]] std::span<const complex_type>
    row(std::size_t r) const noexcept {
        return {data_.data() + r * dim_, dim_};
    }
    [[nodiscard]] std::span<const complex_type> data() const noexcept {
        return data_;
    }
    [[nodiscard]] std::span<complex_type> data() noexcept { return data_; }

    [[nodiscard]] complex_type trace() const noexcept {
        complex_type total{};
        for (std::size_t i = 0; i < dim_; ++i) {
            total += (*this)(i, i);
        }
        return total;
    }

    [[nodiscard]] std::vector<T> diagonal() const {
        std::vector<T> out(dim_);
        for (std::size_t i = 0; i < dim_; ++i) {
            out[i] = (*this)(i, i).real();
        }
        return out;
    }

    /// Largest |rho_ij - conj(rho_ji)|.
    [[nodiscard]] T hermiticity_error() const noexcept {
        T worst{0};
        for (std::size_t i = 0; i < dim_; ++i) {
            for (std::size_t j = i; j < dim_; ++j) {
                worst = std::max(
                    worst, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
            }
        }
        return worst;
    }

    [[nodiscard]] bool is_diagonal(T tol = T{0}) const noexcept {
        for (std::size_t i = 0; i < dim_; ++i) {
            for (std::size_t j = 0; j < dim_; ++j) {
                if (i != j && std::abs((*this)(i, j)) > tol) {
                    return false;
                }
            }
        }
        return true;
    }

    [[nodiscard]] Eigen::Map<const EigenMatrix> as_eigen() const {
        return {data_.data(), static_cast<Eigen::Index>(dim_),
                static_cast<Eigen::Index>(dim_)};
    }

    /// Smallest eigenvalue of the Hermitian part. O(dim^3).
    [[nodiscard]] T min_eigenvalue() const {
        if (dim_ == 0) {
            return T{0};
        }
        const EigenMatrix herm =
            (as_eigen() + as_eigen().adjoint()) * complex_type{T{0.5}};
        Eigen::SelfAdjointEigenSolver<EigenMatrix> solver(
            herm, Eigen::EigenvaluesOnly);
        return solver.eigenvalues().minCoeff();
    }

    /// Inclusive range of cells touched by a nonzero row or column.
    [[nodiscard]] std::optional<std::pair<std::size_t, std::size_t>>
    support() const noexcept {
        std::optional<std::pair<std::size_t, std::size_t>> range;
        for (std::size_t i = 0; i < dim_; ++i) {
            const auto r = row(i);
            if (std::any_of(r.begin(), r.end(),
                            [](complex_type z) { return z != complex_type{}; })) {
                const std::size_t cell = i / 2;
                if (!range) {
                    range.emplace(cell, cell);
                }
                range->first = std::min(range->first, cell);
                range->second = std::max(range->second, cell);
            }
        }
        return range;
    }

  private:
    std::size_t dim_{0};
    std::vector<complex_type> data_;
};

/**
 * @brief Checks Hermiticity and unit trace, and positivity when `check_psd`
 * is set (cubic cost). Throws StateError on the first violated invariant.
 */
template <std::floating_point T>
void validate_density(const DensityMatrix<T> &rho, bool check_psd = false,
                      T tol = default_tolerance<T>()) {
    if (rho.dim() == 0 || rho.dim() % 2 != 0) {
        throw StateError("density matrix dimension must be a positive even "
                         "number, got " +
                         std::to_string(rho.dim()));
    }
    if (const T herm = rho.hermiticity_error(); herm > tol) {
        throw StateError("density matrix is not Hermitian (deviation " +
                         std::to_string(herm) + ")");
    }
    if (const auto tr = rho.trace();
        std::abs(tr.real() - T{1}) > tol || std::abs(tr.imag()) > tol) {
        throw StateError("density matrix trace is not 1");
    }
    if (check_psd) {
        if (const T lo = rho.min_eigenvalue(); lo < -T{1e-10}) {
            throw StateError("density matrix has negative eigenvalue " +
                             std::to_string(lo));
        }
    }
}

template <std::floating_point T = double>
[[nodiscard]] AmplitudeField<T>
init_single_excitation(const LatticeConfig &config, SiteIndex site) {
    config.validate();
    check_site(config, site);
    AmplitudeField<T> field(config.num_cells);
    field[site] = T{1};
    return field;
}

/// (|c,0> + |c,1>)/sqrt(2) at the center cell c = N/2.
template <std::floating_point T = double>
[[nodiscard]] AmplitudeField<T>
init_centered_superposition(const LatticeConfig &config) {
    config.validate();
    AmplitudeField<T> field(config.num_cells);
    const std::size_t center = config.num_cells / 2;
    const T amp = T{1} / std::sqrt(T{2});
    field[{center, 0}] = amp;
    field[{center, 1}] = amp;
    return field;
}

/// Diagonal density matrix with the given site populations.
template <std::floating_point T = double>
[[nodiscard]] DensityMatrix<T> init_population_profile(
    const LatticeConfig &config,
    std::span<const std::pair<SiteIndex, T>> weights) {
    config.validate();
    DensityMatrix<T> rho(config.num_sites());
    T total{0};
    for (const auto &[site, weight] : weights) {
        check_site(config, site);
        if (!(weight >= T{0})) {
            throw DomainError("population weights must be nonnegative");
        }
        rho(site.flat(), site.flat()) += weight;
        total += weight;
    }
    if (std::abs(total - T{1}) > default_tolerance<T>()) {
        throw NormalizationError("population weights sum to " +
                                 std::to_string(total) + ", expected 1");
    }
    return rho;
}

template <std::floating_point T = double>
[[nodiscard]] DensityMatrix<T> init_population_profile(
    const LatticeConfig &config,
    std::initializer_list<std::pair<SiteIndex, T>> weights) {
    return init_population_profile<T>(
        config, std::span<const std::pair<SiteIndex, T>>(weights.begin(),
                                                         weights.size()));
}

template <std::floating_point T>
void require_normalized(const AmplitudeField<T> &field,
                        T tol = default_tolerance<T>()) {
    if (const T n2 = field.norm_squared(); std::abs(n2 - T{1}) > tol) {
        throw NormalizationError("amplitude field has squared norm " +
                                 std::to_string(n2));
    }
}

/// rho = |psi><psi|.
template <std::floating_point T>
[[nodiscard]] DensityMatrix<T>
density_from_amplitudes(const AmplitudeField<T> &field) {
    require_normalized(field);
    const std::size_t dim = field.num_sites();
    std::vector<std::complex<T>> flat(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        flat[i] = field.flat(i);
    }
    DensityMatrix<T> rho(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        if (flat[i] == std::complex<T>{}) {
            continue;
        }
        auto r = rho.row(i);
        for (std::size_t j = 0; j < dim; ++j) {
            r[j] = flat[i] * std::conj(flat[j]);
        }
    }
    return rho;
}

} // namespace qcacg
