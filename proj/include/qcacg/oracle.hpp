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
 * Brute-force ground truth on tiny lattices.
 *
 * Every subcell carries a qubit, so an n-cell lattice is a 2n-qubit register.
 * Basis states are bit strings with cell 0 / subcell 0 as the most
 * significant bit. The transition function is applied as explicit two-qubit
 * gates and the local coarse-graining map as an element-wise rule table, so
 * neither route shares code with the sector kernels it is compared against.
 */
#pragma once

#include <array>
#include <bit>
#include <cmath>
#include <complex>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "errors.hpp"
#include "lattice.hpp"

namespace qcacg {

inline constexpr std::size_t max_oracle_cells = 6;

/// Amplitudes over all 2^(2n) occupation configurations of n cells.
template <std::floating_point T = double> class FullHilbertState {
  public:
    using complex_type = std::complex<T>;

    FullHilbertState() = default;
    explicit FullHilbertState(std::size_t num_cells)
        : num_cells_(check_size(num_cells)),
          amplitudes_(std::size_t{1} << (2 * num_cells)) {}

    [[nodiscard]] std::size_t num_cells() const noexcept { return num_cells_; }
    [[nodiscard]] std::size_t num_qubits() const noexcept {
        return 2 * num_cells_;
    }
    [[nodiscard]] std::span<complex_type> amplitudes() noexcept {
        return amplitudes_;
    }
    [[nodiscard]] std::span<const complex_type> amplitudes() const noexcept {
        return amplitudes_;
    }

    /// Basis index with a single excitation on the given subcell.
    [[nodiscard]] std::size_t single_excitation(SiteIndex site) const noexcept {
        return std::size_t{1} << (num_qubits() - 1 - site.flat());
    }

    [[nodiscard]] T norm_squared() const noexcept {
        T total{0};
        for (const auto &z : amplitudes_) {
            total += std::norm(z);
        }
        return total;
    }

  private:
    static std::size_t check_size(std::size_t n) {
        if (n == 0 || n > max_oracle_cells) {
            throw SizeError("oracle lattice must have 1.." +
                            std::to_string(max_oracle_cells) + " cells, got " +
                            std::to_string(n));
        }
        return n;
    }

    std::size_t num_cells_{0};
    std::vector<complex_type> amplitudes_;
};

template <std::floating_point T>
[[nodiscard]] FullHilbertState<T>
embed_one_particle(const AmplitudeField<T> &field) {
    if (field.num_cells() > max_oracle_cells) {
        throw SizeError("cannot embed " + std::to_string(field.num_cells()) +
                        " cells into the full Hilbert space");
    }
    require_normalized(field);
    FullHilbertState<T> state(field.num_cells());
    for (std::size_t i = 0; i < field.num_sites(); ++i) {
        const auto site = SiteIndex::from_flat(i);
        state.amplitudes()[state.single_excitation(site)] = field[site];
    }
    return state;
}

/// Reads the one-particle amplitudes back out of a full state.
template <std::floating_point T>
[[nodiscard]] AmplitudeField<T>
project_one_particle(const FullHilbertState<T> &state) {
    AmplitudeField<T> field(state.num_cells());
    for (std::size_t i = 0; i < field.num_sites(); ++i) {
        const auto site = SiteIndex::from_flat(i);
        field[site] = state.amplitudes()[state.single_excitation(site)];
    }
    return field;
}

/// Squared norm of the projection onto single-excitation configurations.
template <std::floating_point T>
[[nodiscard]] T one_particle_weight(const FullHilbertState<T> &state) {
    T total{0};
    const auto amps = state.amplitudes();
    for (std::size_t b = 0; b < amps.size(); ++b) {
        if (std::popcount(b) == 1) {
            total += std::norm(amps[b]);
        }
    }
    return total;
}

template <std::floating_point T>
using Gate4 = std::array<std::array<std::complex<T>, 4>, 4>;

/// Per-cell rotation in the single-excitation subspace, basis |s0 s1>.
template <std::floating_point T> [[nodiscard]] Gate4<T> w0_gate(double theta) {
    const std::complex<T> c{static_cast<T>(std::cos(theta)), T{0}};
    const std::complex<T> ms{T{0}, static_cast<T>(-std::sin(theta))};
    Gate4<T> g{};
    g[0][0] = T{1};
    g[1][1] = ms;
    g[1][2] = c;
    g[2][1] = c;
    g[2][2] = ms;
    g[3][3] = T{1};
    return g;
}

/// SWAP between subcell 1 of cell x and subcell 0 of cell x + 1.
template <std::floating_point T> [[nodiscard]] Gate4<T> w1_gate() {
    Gate4<T> g{};
    g[0][0] = T{1};
    g[1][2] = T{1};
    g[2][1] = T{1};
    g[3][3] = T{1};
    return g;
}

/// Applies `gate` to qubits (first, second); the gate's basis index is
/// 2 * bit(first) + bit(second). Qubit 0 is the most significant bit.
template <std::floating_point T>
void apply_two_qubit_gate(FullHilbertState<T> &state, std::size_t first,
                          std::size_t second, const Gate4<T> &gate) {
    const std::size_t nq = state.num_qubits();
    const std::size_t m1 = std::size_t{1} << (nq - 1 - first);
    const std::size_t m2 = std::size_t{1} << (nq - 1 - second);
    auto amps = state.amplitudes();
    for (std::size_t b = 0; b < amps.size(); ++b) {
        if ((b & m1) != 0 || (b & m2) != 0) {
            continue;
        }
        const std::array<std::size_t, 4> idx{b, b | m2, b | m1, b | m1 | m2};
        std::array<std::complex<T>, 4> in{};
        for (std::size_t r = 0; r < 4; ++r) {
            in[r] = amps[idx[r]];
        }
        for (std::size_t r = 0; r < 4; ++r) {
            std::complex<T> acc{};
            for (std::size_t c = 0; c < 4; ++c) {
                acc += gate[r][c] * in[c];
            }
            amps[idx[r]] = acc;
        }
    }
}

/// W0 on every cell, then W1 on every edge (periodic).
template <std::floating_point T>
[[nodiscard]] FullHilbertState<T>
oracle_step_full(const FullHilbertState<T> &state, double theta) {
    FullHilbertState<T> out = state;
    const std::size_t n = state.num_cells();
    const auto w0 = w0_gate<T>(theta);
    const auto w1 = w1_gate<T>();
    for (std::size_t k = 0; k < n; ++k) {
        apply_two_qubit_gate(out, 2 * k, 2 * k + 1, w0);
    }
    for (std::size_t k = 0; k < n; ++k) {
        apply_two_qubit_gate(out, 2 * k + 1, 2 * ((k + 1) % n), w1);
    }
    return out;
}

/// Dense operator on the full register of `num_cells` two-qubit cells.
template <std::floating_point T = double> struct FullDensity {
    std::size_t num_cells{0};
    DensityMatrix<T> matrix;
};

template <std::floating_point T>
[[nodiscard]] FullDensity<T> full_density(const FullHilbertState<T> &state) {
    const auto amps = state.amplitudes();
    FullDensity<T> out{state.num_cells(), DensityMatrix<T>(amps.size())};
    for (std::size_t i = 0; i < amps.size(); ++i) {
        if (amps[i] == std::complex<T>{}) {
            continue;
        }
        auto r = out.matrix.row(i);
        for (std::size_t j = 0; j < amps.size(); ++j) {
            r[j] = amps[i] * std::conj(amps[j]);
        }
    }
    return out;
}

/// One-particle block of a full operator, indexed by flattened sites.
template <std::floating_point T>
[[nodiscard]] DensityMatrix<T> restrict_to_one_particle(const FullDensity<T> &full) {
    const std::size_t sites = 2 * full.num_cells;
    DensityMatrix<T> out(sites);
    for (std::size_t i = 0; i < sites; ++i) {
        for (std::size_t j = 0; j < sites; ++j) {
            out(i, j) = full.matrix(std::size_t{1} << (sites - 1 - i),
                                    std::size_t{1} << (sites - 1 - j));
        }
    }
    return out;
}

/// Image of a local operator |ket><bra| under the cell map: coef |out_ket><out_bra|.
template <std::floating_point T> struct LocalImage {
    unsigned out_ket{0};
    unsigned out_bra{0};
    T coef{0};
};

/**
 * @brief Rule table of the local coarse-graining map on a two-subcell cell.
 * Local states are encoded as 2 * s0 + s1. Populations of |01> and |10> both
 * map to |1><1|, vacuum to vacuum; coherences between vacuum and a single
 * excitation map to |1><0| (or |0><1|) times `coherence_factor`; coherences
 * between the two single excitations vanish. Operators touching |11> are
 * outside the domain.
 */
template <std::floating_point T>
[[nodiscard]] LocalImage<T> local_cg_rule(unsigned ket, unsigned bra,
                                          T coherence_factor) {
    if (ket > 2 || bra > 2) {
        throw DomainError("local coarse-graining map is undefined on |11>");
    }
    const bool ket_excited = ket != 0;
    const bool bra_excited = bra != 0;
    if (ket_excited && bra_excited) {
        return {1, 1, ket == bra ? T{1} : T{0}};
    }
    if (!ket_excited && !bra_excited) {
        return {0, 0, T{1}};
    }
    return {ket_excited ? 1u : 0u, bra_excited ? 1u : 0u, coherence_factor};
}

/**
 * @brief Applies the local map to every cell of a full one-particle operator
 * and relabels fine cell k as coarse site (k / 2, k mod 2). The result lives
 * on n/2 coarse cells, again with two qubits each.
 */
template <std::floating_point T>
[[nodiscard]] FullDensity<T>
apply_local_cg_full(const FullDensity<T> &rho,
                    T coherence_factor = T{1} / std::sqrt(T{3})) {
    const std::size_t n = rho.num_cells;
    if (n == 0 || n % 2 != 0 || n > max_oracle_cells) {
        throw DivisibilityError("full coarse-graining needs an even cell count "
                                "of at most " +
                                std::to_string(max_oracle_cells));
    }
    const std::size_t nq = 2 * n;
    const std::size_t dim = std::size_t{1} << nq;
    if (rho.matrix.dim() != dim) {
        throw DomainError("full density has the wrong dimension");
    }
    FullDensity<T> out{n / 2, DensityMatrix<T>(std::size_t{1} << n)};
    for (std::size_t r = 0; r < dim; ++r) {
        for (std::size_t c = 0; c < dim; ++c) {
            const auto z = rho.matrix(r, c);
            if (z == std::complex<T>{}) {
                continue;
            }
            if (std::popcount(r) != 1 || std::popcount(c) != 1) {
                throw DomainError(
                    "full density has support outside the one-particle sector");
            }
            std::size_t out_r = 0;
            std::size_t out_c = 0;
            T coef{1};
            for (std::size_t k = 0; k < n && coef != T{0}; ++k) {
                const std::size_t shift = nq - 2 - 2 * k;
                const auto image = local_cg_rule<T>(
                    static_cast<unsigned>((r >> shift) & 3u),
                    static_cast<unsigned>((c >> shift) & 3u), coherence_factor);
                coef *= image.coef;
                out_r |= std::size_t{image.out_ket} << (n - 1 - k);
                out_c |= std::size_t{image.out_bra} << (n - 1 - k);
            }
            if (coef != T{0}) {
                out.matrix(out_r, out_c) += coef * z;
            }
        }
    }
    return out;
}

/// Choi operator of the local map restricted to span{|00>, |01>, |10>}.
template <std::floating_point T = double> struct ChoiMatrix {
    /// Index 2 * input + output.
    Eigen::Matrix<std::complex<T>, 6, 6> entries;
    T min_eigenvalue{0};
    T hermiticity_error{0};
    /// Largest deviation of Tr_out from the 3x3 identity.
    T trace_preservation_error{0};
};

template <std::floating_point T = double>
[[nodiscard]] ChoiMatrix<T>
choi_of_local_cg(T coherence_factor = T{1} / std::sqrt(T{3})) {
    ChoiMatrix<T> choi;
    choi.entries.setZero();
    for (unsigned i = 0; i < 3; ++i) {
        for (unsigned j = 0; j < 3; ++j) {
            const auto image = local_cg_rule<T>(i, j, coherence_factor);
            choi.entries(2 * i + image.out_ket, 2 * j + image.out_bra) +=
                image.coef;
        }
    }
    choi.hermiticity_error =
        (choi.entries - choi.entries.adjoint()).cwiseAbs().maxCoeff();
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix<std::complex<T>, 6, 6>> solver(
        choi.entries, Eigen::EigenvaluesOnly);
    choi.min_eigenvalue = solver.eigenvalues().minCoeff();
    T worst{0};
    for (unsigned i = 0; i < 3; ++i) {
        for (unsigned j = 0; j < 3; ++j) {
            const auto partial =
                choi.entries(2 * i, 2 * j) + choi.entries(2 * i + 1, 2 * j + 1);
            const T expected = i == j ? T{1} : T{0};
            worst = std::max(worst, std::abs(partial - expected));
        }
    }
    choi.trace_preservation_error = worst;
    return choi;
}

struct Lemma1Result {
    double sum_sqrt{0.0};
    double bound{0.0};
};

/// (sum_i sqrt(p_i), sqrt(D)) for a probability vector of length D >= 2.
[[nodiscard]] inline Lemma1Result lemma1_bound(std::span<const double> p) {
    if (p.size() < 2) {
        throw DomainError("distribution needs at least two outcomes");
    }
    double total = 0.0;
    double sum_sqrt = 0.0;
    for (const double v : p) {
        if (!(v >= 0.0)) {
            throw DomainError("probabilities must be nonnegative");
        }
        total += v;
        sum_sqrt += std::sqrt(v);
    }
    if (std::abs(total - 1.0) > 1e-12) {
        throw DomainError("probabilities sum to " + std::to_string(total));
    }
    return {sum_sqrt, std::sqrt(static_cast<double>(p.size()))};
}

/// (2 sqrt(2) / 3)^L, the bound on any cross-cell coherence at level L.
[[nodiscard]] inline double coherence_bound(std::size_t level) {
    return std::pow(2.0 * std::sqrt(2.0) / 3.0, static_cast<double>(level));
}

} // namespace qcacg
