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
// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "qcacg/qcacg.hpp"

using namespace qcacg;

namespace {

struct Outcome {
    bool pass{false};
    std::string detail;
};

std::string fmt(const char *spec, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

LatticeConfig lattice(std::size_t n) {
    LatticeConfig cfg;
    cfg.num_cells = n;
    return cfg;
}

double max_abs_diff(const DensityMatrix<double> &a, const DensityMatrix<double> &b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.data().size(); ++i) {
        worst = std::max(worst, std::abs(a.data()[i] - b.data()[i]));
    }
    return worst;
}

DensityMatrix<double> diagonal_density(const std::vector<double> &p) {
    DensityMatrix<double> rho(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
        rho(i, i) = p[i];
    }
    return rho;
}

/// Random diagonal state; subcell-0 mass only in the left half of every
/// 2^L-cell block, subcell-1 mass only in the right half. Either mode may be
/// switched off.
std::vector<double> random_block_sorted(std::size_t cells, std::size_t level, Rng &rng,
                                        bool right_movers, bool left_movers) {
    auto p = random_distribution<double>(2 * cells, rng);
    const std::size_t block = std::size_t{1} << level;
    double total = 0.0;
    for (std::size_t k = 0; k < cells; ++k) {
        const bool left_half = (k % block) < block / 2;
        if (!left_half || !right_movers) {
            p[2 * k] = 0.0;
        }
        if (left_half || !left_movers) {
            p[2 * k + 1] = 0.0;
        }
        total += p[2 * k] + p[2 * k + 1];
    }
    for (auto &v : p) {
        v /= total;
    }
    return p;
}

// Shared by criteria 1 and 2.
AmplitudeField<double> figure2_state() {
    const auto cfg = lattice(512);
    return evolve(init_centered_superposition(cfg), std::numbers::pi / 4,
                  StepSchedule{200}, cfg);
}

Outcome coherence_decay() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto psi = figure2_state();
    std::vector<double> c;
    for (std::size_t level = 0; level <= 6; ++level) {
        c.push_back(coarse_sample(psi, CGLevel{level}).coherence_l1);
    }
    bool decreasing = true;
    for (std::size_t l = 1; l < c.size(); ++l) {
        decreasing = decreasing && c[l] < c[l - 1];
    }
    std::vector<double> xs;
    std::vector<double> ys;
    for (std::size_t l = 1; l <= 6; ++l) {
        xs.push_back(static_cast<double>(l));
        ys.push_back(std::log(c[l]));
    }
    const auto fit = linear_fit(xs, ys);
    std::string series;
    for (const double v : c) {
        series += (series.empty() ? "" : " ") + fmt("%.4g", v);
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return {decreasing && fit.r_squared >= 0.9 && secs <= 300.0,
            "coherence_l1 L=0..6 = [" + series + "], strictly decreasing = " +
                (decreasing ? "yes" : "no") + ", log-linear r^2 = " +
                fmt("%.4f", fit.r_squared) + " (need >= 0.9), " + fmt("%.2f", secs) +
                " s (need <= 300 s)"};
}

Outcome theorem_bound() {
    std::size_t violations = 0;
    double worst_ratio = 0.0;
    const auto record = [&](double value, std::size_t level) {
        const double bound = coherence_bound(level);
        worst_ratio = std::max(worst_ratio, value / bound);
        if (value > bound + 1e-9) {
            ++violations;
        }
    };
    const auto psi = figure2_state();
    for (std::size_t level = 1; level <= 6; ++level) {
        record(coarse_sample(psi, CGLevel{level}).max_cross_cell, level);
    }
    Rng rng(1001);
    for (int trial = 0; trial < 100; ++trial) {
        const auto rho = random_density(64, rng);
        for (std::size_t level = 1; level <= 6; ++level) {
            const auto coarse = cg_jump(rho, CGLevel{level});
            // Every cross-cell entry, not just the largest.
            for (std::size_t i = 0; i < coarse.dim(); ++i) {
                for (std::size_t j = 0; j < coarse.dim(); ++j) {
                    if (i / 2 != j / 2) {
                        record(std::abs(coarse(i, j)), level);
                    }
                }
            }
        }
    }
    return {violations == 0, std::to_string(violations) +
                                 " violations of (2 sqrt2/3)^L + 1e-9; largest "
                                 "entry/bound ratio " +
                                 fmt("%.4f", worst_ratio)};
}

Outcome lemma1() {
    Rng rng(1003);
    std::uniform_int_distribution<std::size_t> size(2, 64);
    double worst = -1.0;
    for (int trial = 0; trial < 1000; ++trial) {
        const auto p = random_distribution<double>(size(rng), rng);
        const auto r = lemma1_bound(p);
        worst = std::max(worst, r.sum_sqrt - r.bound);
    }
    double saturation = 0.0;
    for (std::size_t d = 2; d <= 64; ++d) {
        const std::vector<double> uniform(d, 1.0 / static_cast<double>(d));
        const auto r = lemma1_bound(uniform);
        saturation = std::max(saturation, std::abs(r.sum_sqrt - r.bound));
    }
    return {worst <= 1e-12 && saturation <= 1e-12,
            "max(sum sqrt p - sqrt D) = " + fmt("%.3e", worst) +
                " (need <= 1e-12), uniform gap = " + fmt("%.3e", saturation) +
                " (need <= 1e-12)"};
}

Outcome cptp() {
    const auto choi = choi_of_local_cg<double>();
    const auto mutated = choi_of_local_cg<double>(1.0);
    const bool ok = choi.min_eigenvalue >= -1e-12 &&
                    choi.trace_preservation_error <= 1e-12 &&
                    mutated.min_eigenvalue < -0.01;
    return {ok, "Choi min eigenvalue " + fmt("%.3e", choi.min_eigenvalue) +
                    " (need >= -1e-12), trace error " +
                    fmt("%.3e", choi.trace_preservation_error) +
                    " (need <= 1e-12), mutated min eigenvalue " +
                    fmt("%.4f", mutated.min_eigenvalue) + " (need < -0.01)"};
}

Outcome oracle_equivalence() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto cfg = lattice(4);
    const double theta = 0.7;
    Rng rng(1005);
    auto psi = random_pure_field(4, rng);
    auto full = embed_one_particle(psi);
    double amp_err = 0.0;
    for (int t = 0; t < 8; ++t) {
        psi = step_amplitudes(psi, theta, cfg);
        full = oracle_step_full(full, theta);
        const auto proj = project_one_particle(full);
        for (std::size_t i = 0; i < 8; ++i) {
            amp_err = std::max(amp_err, std::abs(psi.flat(i) - proj.flat(i)));
        }
    }
    const auto fd = full_density(full);
    const double cg_err = max_abs_diff(restrict_to_one_particle(apply_local_cg_full(fd)),
                                       cg_once(restrict_to_one_particle(fd)));
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return {amp_err <= 1e-12 && cg_err <= 1e-12 && secs <= 10.0,
            "amplitude error " + fmt("%.3e", amp_err) + ", CG error " +
                fmt("%.3e", cg_err) + " (need <= 1e-12), " + fmt("%.3f", secs) +
                " s (need <= 10 s)"};
}

Outcome transport() {
    Rng rng(1007);
    const auto cfg = lattice(128);
    const std::size_t coarse_steps = 12;
    double worst = 0.0;
    for (std::size_t level = 1; level <= 3; ++level) {
        for (const bool right : {true, false}) {
            const auto p = random_block_sorted(128, level, rng, right, !right);
            const auto traj = run_cg_trajectory(
                diagonal_density(p), CGSchedule::spacetime(CGLevel{level}), 0.0,
                coarse_steps, cfg);
            const auto start = traj.samples.front().cell_field();
            for (const auto &s : traj.samples) {
                const auto ref = transport_reference(start, right ? 1.0 : -1.0,
                                                     static_cast<double>(s.coarse_time));
                const auto now = s.cell_field();
                for (std::size_t x = 0; x < now.size(); ++x) {
                    worst = std::max(worst, std::abs(now[x] - ref[x]));
                }
            }
        }
    }
    return {worst <= 1e-12, "max |coarse - shifted| = " + fmt("%.3e", worst) +
                                " over " + std::to_string(coarse_steps) +
                                " coarse steps, L = 1..3, both modes (need <= 1e-12)"};
}

Outcome speed_rescaling() {
    const auto cfg = lattice(256);
    const auto psi = init_centered_superposition(cfg);
    const std::size_t steps = 100;
    const auto slope = [&](const CGSchedule &schedule, std::size_t jumps) {
        const auto traj = run_cg_trajectory(psi, schedule, 0.0, jumps, cfg);
        const double center =
            static_cast<double>(cfg.num_cells / 2 / schedule.level.block_cells());
        std::vector<double> t;
        std::vector<double> f;
        for (const auto &s : traj.samples) {
            t.push_back(static_cast<double>(s.coarse_time));
            f.push_back(front_position(s.cell_field(), 1e-3, center));
        }
        return linear_fit(t, f).slope;
    };
    const double base = slope(CGSchedule::spatial_only(CGLevel{0}), steps);
    const double spatial = slope(CGSchedule::spatial_only(CGLevel{2}), steps);
    const double spacetime = slope(CGSchedule::spacetime(CGLevel{2}), steps / 4);
    const double ratio = spatial / base;
    const bool ok = std::abs(ratio - 0.25) <= 0.05 * 0.25 &&
                    std::abs(spacetime - base) <= 1e-12;
    return {ok, "spatial-only L=2 slope ratio " + fmt("%.5f", ratio) +
                    " (need 0.25 within 5%), spacetime slope " +
                    fmt("%.15g", spacetime) + " vs level-0 " + fmt("%.15g", base) +
                    " (need equal within 1e-12)"};
}

std::vector<Outcome> crossover() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto cfg = lattice(1024);
    const double theta = 0.2;
    const std::size_t steps = 400;
    const auto psi = init_centered_superposition(cfg);

    const auto series = [](const CoarseTrajectory<double> &traj) {
        std::vector<std::pair<double, double>> out;
        for (const auto &s : traj.samples) {
            out.push_back({static_cast<double>(s.coarse_time), variance(s.cell_field())});
        }
        return out;
    };
    const auto fine =
        run_cg_trajectory(psi, CGSchedule::spatial_only(CGLevel{0}), theta, steps, cfg);
    const auto coarse =
        run_cg_trajectory(psi, CGSchedule::spacetime(CGLevel{3}), theta, steps / 8, cfg);
    const auto fit0 = fit_power_law(series(fine), {50.0, 400.0});
    const auto fit3 = fit_power_law(series(coarse), {50.0 / 8.0, 400.0 / 8.0});

    const auto start = coarse.samples.front().cell_field();
    const auto &last = coarse.samples.back();
    const auto ref = diffusion_reference(start, 1.0 / 8.0,
                                         static_cast<double>(last.level0_time));
    const double l1 = l1_distance(last.cell_field(), ref);
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    const double gap = fit0.exponent - fit3.exponent;
    return {
        {fit0.exponent >= 1.8 && fit0.exponent <= 2.2,
         "level-0 variance exponent " + fmt("%.4f", fit0.exponent) +
             " over t in [50, 400] (need [1.8, 2.2])"},
        {fit3.exponent >= 0.7 && fit3.exponent <= 1.4,
         "level-3 spacetime coarse variance exponent " + fmt("%.4f", fit3.exponent) +
             " over coarse t in [6.25, 50] (need [0.7, 1.4])"},
        {gap >= 0.5, "exponent gap " + fmt("%.4f", gap) + " (need >= 0.5)"},
        {l1 <= 0.15 && secs <= 600.0,
         "final level-3 profile L1 distance to diffusion (D = 1/8) " + fmt("%.4f", l1) +
             " (need <= 0.15), " + fmt("%.2f", secs) + " s (need <= 600 s)"},
    };
}

Outcome pca() {
    Rng rng(1009);
    const auto cfg = lattice(64);
    double worst = 0.0;
    for (std::size_t level = 1; level <= 2; ++level) {
        for (int trial = 0; trial < 5; ++trial) {
            const auto p = random_block_sorted(64, level, rng, true, true);
            const auto traj = run_cg_trajectory(
                diagonal_density(p), CGSchedule::spacetime(CGLevel{level}), 0.0, 20, cfg);
            auto classical = traj.samples.front().site_field();
            for (const auto &s : traj.samples) {
                for (std::size_t i = 0; i < classical.size(); ++i) {
                    worst = std::max(worst, std::abs(s.populations[i] - classical[i]));
                }
                classical = pca_step(classical);
            }
        }
    }
    return {worst <= 1e-12, "max |coarse - PCA| = " + fmt("%.3e", worst) +
                                " over 20 coarse steps, L = 1, 2, block-sorted "
                                "random diagonals (need <= 1e-12)"};
}

/// Cell populations on the coarsest grid; `ratio` fine cells per bin.
std::vector<double> binned(const AmplitudeField<double> &psi, std::size_t ratio) {
    const auto cells = psi.cell_populations();
    std::vector<double> out(cells.size() / ratio, 0.0);
    for (std::size_t k = 0; k < cells.size(); ++k) {
        out[k / ratio] += cells[k];
    }
    return out;
}

AmplitudeField<double> dirac_run(double dx, double length, double mass, double time) {
    const auto n = static_cast<std::size_t>(std::llround(length / dx));
    LatticeConfig cfg = lattice(n);
    cfg.dx = dx;
    cfg.dt = dx;
    AmplitudeField<double> psi(n);
    double norm2 = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double x = -length / 2 + (static_cast<double>(k) + 0.5) * dx;
        const double g = std::exp(-x * x / 2.0);
        psi.psi0()[k] = g;
        psi.psi1()[k] = {0.0, g};
        norm2 += 2.0 * g * g;
    }
    for (std::size_t k = 0; k < n; ++k) {
        psi.psi0()[k] /= std::sqrt(norm2);
        psi.psi1()[k] /= std::sqrt(norm2);
    }
    const double theta = theta_from_mass(mass, cfg.dt, cfg.speed(), 1.0);
    const auto steps = static_cast<std::size_t>(std::llround(time / cfg.dt));
    return evolve(psi, theta, StepSchedule{steps}, cfg);
}

Outcome continuum() {
    const double length = 32.0;
    const double mass = 1.0;
    const double time = 4.0;
    const double coarsest = 1.0 / 8.0;
    const double reference_dx = 1.0 / 1024.0;
    const auto ref = binned(dirac_run(reference_dx, length, mass, time),
                            static_cast<std::size_t>(coarsest / reference_dx));
    std::vector<double> errors;
    for (const double dx : {1.0 / 8.0, 1.0 / 16.0, 1.0 / 32.0}) {
        const auto p = binned(dirac_run(dx, length, mass, time),
                              static_cast<std::size_t>(coarsest / dx));
        double e = 0.0;
        for (std::size_t j = 0; j < p.size(); ++j) {
            e += std::abs(p[j] - ref[j]);
        }
        errors.push_back(e);
    }
    const double r1 = errors[0] / errors[1];
    const double r2 = errors[1] / errors[2];
    const bool ok = r1 >= 1.7 && r1 <= 2.3 && r2 >= 1.7 && r2 <= 2.3;
    return {ok, "L1 errors " + fmt("%.4g", errors[0]) + ", " + fmt("%.4g", errors[1]) +
                    ", " + fmt("%.4g", errors[2]) + " against dx = 1/1024; ratios " +
                    fmt("%.3f", r1) + ", " + fmt("%.3f", r2) + " (need [1.7, 2.3])"};
}

} // namespace

int main() {
    int failures = 0;
    const auto report = [&](const std::string &label, const std::string &title,
                            const std::function<Outcome()> &run) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = run();
        } catch (const std::exception &e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        failures += o.pass ? 0 : 1;
        std::printf("%s criterion %s %s: %s [%.2f s]\n", o.pass ? "PASS" : "FAIL",
                    label.c_str(), title.c_str(), o.detail.c_str(), secs);
        std::fflush(stdout);
    };

    report("1", "coherence decay", coherence_decay);
    report("2", "coherence bound", theorem_bound);
    report("3", "sum of square roots", lemma1);
    report("4", "complete positivity", cptp);
    report("5", "oracle equivalence", oracle_equivalence);
    report("6", "exact transport", transport);
    report("7", "speed rescaling", speed_rescaling);

    std::vector<Outcome> parts;
    try {
        parts = crossover();
    } catch (const std::exception &e) {
        parts.assign(4, {false, std::string("exception: ") + e.what()});
    }
    const char *names[] = {"8a", "8b", "8c", "8d"};
    for (std::size_t i = 0; i < parts.size(); ++i) {
        report(names[i], "ballistic-to-diffusive crossover",
               [&] { return parts[i]; });
    }

    report("9", "classical PCA", pca);
    report("10", "continuum convergence", continuum);

    std::printf("%d criterion line(s) failed\n", failures);
    return failures == 0 ? 0 : 1;
}
