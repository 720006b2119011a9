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
#include <bit>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include <catch_amalgamated.hpp>

#include "qcacg/coarse_grain.hpp"
#include "qcacg/oracle.hpp"
#include "qcacg/random.hpp"
#include "support/compare.hpp"

using namespace qcacg;
using Catch::Matchers::WithinAbs;
using cplx = std::complex<double>;

namespace {
LatticeConfig lattice(std::size_t n) {
    LatticeConfig cfg;
    cfg.num_cells = n;
    return cfg;
}
} // namespace

TEST_CASE("embedding a single excitation", "[oracle]") {
    const auto psi = init_single_excitation(lattice(2), {1, 0});
    const auto full = embed_one_particle(psi);
    REQUIRE(full.num_qubits() == 4);
    for (std::size_t b = 0; b < 16; ++b) {
        REQUIRE(full.amplitudes()[b] == cplx(b == 2 ? 1.0 : 0.0));
    }
    REQUIRE(full.single_excitation({0, 0}) == 8);
    REQUIRE(full.single_excitation({1, 1}) == 1);

    const auto back = project_one_particle(full);
    REQUIRE(test::max_abs_diff(back, psi) == 0.0);
    REQUIRE(one_particle_weight(full) == 1.0);

    REQUIRE_THROWS_AS(FullHilbertState<double>(7), SizeError);
    REQUIRE_THROWS_AS(FullHilbertState<double>(0), SizeError);
    REQUIRE_THROWS_AS(embed_one_particle(AmplitudeField<double>(7)), SizeError);
}

TEST_CASE("gates", "[oracle]") {
    const double theta = 0.37;
    const auto w0 = w0_gate<double>(theta);
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    REQUIRE(w0[0][0] == cplx(1.0));
    REQUIRE(w0[3][3] == cplx(1.0));
    REQUIRE(w0[1][1] == cplx(0.0, -s));
    REQUIRE(w0[1][2] == cplx(c));
    REQUIRE(w0[2][1] == cplx(c));
    REQUIRE(w0[2][2] == cplx(0.0, -s));
    const auto w1 = w1_gate<double>();
    REQUIRE(w1[1][2] == cplx(1.0));
    REQUIRE(w1[2][1] == cplx(1.0));
    REQUIRE(w1[1][1] == cplx{});
}

TEST_CASE("vacuum and full filling are fixed", "[oracle]") {
    for (std::size_t n = 1; n <= 4; ++n) {
        FullHilbertState<double> vacuum(n);
        vacuum.amplitudes()[0] = 1.0;
        const auto v = oracle_step_full(vacuum, 0.9);
        REQUIRE(v.amplitudes()[0] == cplx(1.0));

        FullHilbertState<double> filled(n);
        filled.amplitudes().back() = 1.0;
        const auto f = oracle_step_full(filled, 0.9);
        REQUIRE(std::abs(f.amplitudes().back() - cplx(1.0)) < 1e-15);
    }
}

TEST_CASE("one-particle sector of the full register", "[oracle][property]") {
    Rng rng(41);
    std::uniform_real_distribution<double> angle(0.0, 2 * std::numbers::pi);
    for (std::size_t n = 2; n <= 4; ++n) {
        for (int trial = 0; trial < 3; ++trial) {
            const double theta = angle(rng);
            auto psi = random_pure_field(n, rng);
            auto full = embed_one_particle(psi);
            for (int t = 0; t < 10; ++t) {
                psi = step_amplitudes(psi, theta, lattice(n));
                full = oracle_step_full(full, theta);
                REQUIRE_THAT(one_particle_weight(full), WithinAbs(1.0, 1e-12));
                REQUIRE(test::max_abs_diff(project_one_particle(full), psi) < 1e-12);
            }
        }
    }
}

TEST_CASE("particle number is conserved", "[oracle][property]") {
    Rng rng(43);
    std::normal_distribution<double> gauss;
    for (std::size_t particles = 0; particles <= 6; ++particles) {
        FullHilbertState<double> state(3);
        double norm2 = 0.0;
        for (std::size_t b = 0; b < state.amplitudes().size(); ++b) {
            if (static_cast<std::size_t>(std::popcount(b)) == particles) {
                state.amplitudes()[b] = {gauss(rng), gauss(rng)};
                norm2 += std::norm(state.amplitudes()[b]);
            }
        }
        for (auto &z : state.amplitudes()) {
            z /= std::sqrt(norm2);
        }
        for (int t = 0; t < 5; ++t) {
            state = oracle_step_full(state, 1.1);
        }
        double inside = 0.0;
        for (std::size_t b = 0; b < state.amplitudes().size(); ++b) {
            if (static_cast<std::size_t>(std::popcount(b)) == particles) {
                inside += std::norm(state.amplitudes()[b]);
            }
        }
        REQUIRE_THAT(inside, WithinAbs(1.0, 1e-12));
    }
}

TEST_CASE("local coarse-graining rule", "[oracle]") {
    const double f = 1.0 / std::sqrt(3.0);
    const auto pop = local_cg_rule(1u, 1u, f);
    REQUIRE((pop.out_ket == 1 && pop.out_bra == 1 && pop.coef == 1.0));
    REQUIRE(local_cg_rule(2u, 2u, f).coef == 1.0);
    REQUIRE(local_cg_rule(1u, 2u, f).coef == 0.0);
    const auto vac = local_cg_rule(0u, 0u, f);
    REQUIRE((vac.out_ket == 0 && vac.out_bra == 0 && vac.coef == 1.0));
    const auto coh = local_cg_rule(2u, 0u, f);
    REQUIRE((coh.out_ket == 1 && coh.out_bra == 0 && coh.coef == f));
    REQUIRE_THROWS_AS(local_cg_rule(3u, 0u, f), DomainError);
}

TEST_CASE("Choi operator of the local map", "[oracle]") {
    const auto choi = choi_of_local_cg<double>();
    REQUIRE(choi.hermiticity_error < 1e-15);
    REQUIRE(choi.trace_preservation_error < 1e-15);
    REQUIRE(choi.min_eigenvalue >= -1e-12);

    // Without the 1/sqrt(3) damping the map is not completely positive.
    const auto undamped = choi_of_local_cg<double>(1.0);
    REQUIRE(undamped.min_eigenvalue < -0.01);
    REQUIRE_THAT(undamped.min_eigenvalue, WithinAbs(1.0 - std::sqrt(2.0), 1e-12));
}

TEST_CASE("full-register coarse-graining", "[oracle]") {
    SECTION("cross-cell coherence picks up one third") {
        AmplitudeField<double> psi(2);
        psi.psi0()[0] = 1.0 / std::sqrt(2.0);
        psi.psi0()[1] = 1.0 / std::sqrt(2.0);
        const auto image = restrict_to_one_particle(
            apply_local_cg_full(full_density(embed_one_particle(psi))));
        REQUIRE(image.dim() == 2);
        REQUIRE_THAT(image(0, 0).real(), WithinAbs(0.5, 1e-15));
        REQUIRE_THAT(image(0, 1).real(), WithinAbs(1.0 / 6.0, 1e-15));
    }
    SECTION("same-cell coherence vanishes") {
        AmplitudeField<double> psi(2);
        psi.psi0()[0] = 1.0 / std::sqrt(2.0);
        psi.psi1()[0] = 1.0 / std::sqrt(2.0);
        const auto image = restrict_to_one_particle(
            apply_local_cg_full(full_density(embed_one_particle(psi))));
        REQUIRE_THAT(image(0, 0).real(), WithinAbs(1.0, 1e-15));
        REQUIRE(std::abs(image(0, 1)) < 1e-15);
    }
    SECTION("agrees with cg_once on random states") {
        Rng rng(47);
        for (const std::size_t n : {2, 4, 6}) {
            for (int trial = 0; trial < 3; ++trial) {
                const auto psi = random_pure_field(n, rng);
                const auto image = restrict_to_one_particle(
                    apply_local_cg_full(full_density(embed_one_particle(psi))));
                REQUIRE(test::max_abs_diff(image,
                                           cg_once(density_from_amplitudes(psi))) <
                        1e-12);
            }
        }
    }
    SECTION("odd cell count") {
        FullHilbertState<double> s(3);
        s.amplitudes()[1] = 1.0;
        REQUIRE_THROWS_AS(apply_local_cg_full(full_density(s)), DivisibilityError);
    }
    SECTION("two-particle support is rejected") {
        FullHilbertState<double> s(2);
        s.amplitudes()[3] = 1.0;
        REQUIRE_THROWS_AS(apply_local_cg_full(full_density(s)), DomainError);
    }
}

TEST_CASE("sum of square roots bound", "[oracle]") {
    const std::vector<double> uniform{0.25, 0.25, 0.25, 0.25};
    const auto u = lemma1_bound(uniform);
    REQUIRE_THAT(u.sum_sqrt, WithinAbs(2.0, 1e-15));
    REQUIRE_THAT(u.bound, WithinAbs(2.0, 1e-15));

    const std::vector<double> point{1.0, 0.0, 0.0};
    REQUIRE_THAT(lemma1_bound(point).sum_sqrt, WithinAbs(1.0, 1e-15));

    const std::vector<double> single{1.0};
    REQUIRE_THROWS_AS(lemma1_bound(single), DomainError);
    const std::vector<double> negative{1.5, -0.5};
    REQUIRE_THROWS_AS(lemma1_bound(negative), DomainError);
    const std::vector<double> short_mass{0.5, 0.4};
    REQUIRE_THROWS_AS(lemma1_bound(short_mass), DomainError);

    Rng rng(53);
    std::uniform_int_distribution<std::size_t> size(2, 64);
    for (int trial = 0; trial < 1000; ++trial) {
        const auto p = random_distribution<double>(size(rng), rng);
        const auto r = lemma1_bound(p);
        REQUIRE(r.sum_sqrt <= r.bound + 1e-12);
    }
}
