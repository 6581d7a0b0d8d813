// SPDX-License-Identifier: Apache-2.0
//
// pcmscat - reflective polarization-conversion metasurface modelling
// Copyright (C) 2026 The pcmscat authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include <doctest.h>

#include <cmath>
#include <random>

#include "pcm/error.hpp"
#include "pcm/optimize.hpp"

using namespace pcm;
using namespace pcm::optimize;

namespace {

std::vector<Frequency> ghz_grid(double lo, double hi, std::size_t n) {
    std::vector<Frequency> f;
    for (std::size_t i = 0; i < n; ++i) {
        f.push_back(Frequency::ghz(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1)));
    }
    return f;
}

double quadratic(std::span<const double> x) { return -(x[0] - 0.3) * (x[0] - 0.3); }

DesignBounds reference_bounds() { return {{2.5, 4.5}, {0.5, 2.5}, {3.0, 5.0}, {0.5, 2.0}}; }

}  // namespace

TEST_CASE("fractional bandwidth of a triangular curve") {
    // pcr rises linearly 0 -> 1 over 20..40 GHz and falls back over 40..60 GHz.
    const auto f = ghz_grid(20, 60, 41);
    std::vector<double> pcr;
    for (const auto& x : f) pcr.push_back(1.0 - std::abs(x.in_ghz() - 40.0) / 20.0);
    // pcr >= 0.5 between 30 and 50 GHz: 20 / 40.
    CHECK(fractional_bandwidth(f, pcr, 0.5) == doctest::Approx(0.5).epsilon(1e-12));
    // Crossings off the sample grid: pcr >= 0.9 over 38..42 GHz.
    CHECK(fractional_bandwidth(f, pcr, 0.9) == doctest::Approx(4.0 / 40.0).epsilon(1e-12));
    CHECK(fractional_bandwidth(f, pcr, 1.1) == 0.0);
}

TEST_CASE("threshold zero spans the whole band") {
    const auto f = ghz_grid(20, 60, 161);
    const std::vector<double> pcr(f.size(), 0.3);
    CHECK(fractional_bandwidth(f, pcr, 0.0) == doctest::Approx(40.0 / 40.0));
    const auto g = ghz_grid(30, 40, 11);
    CHECK(fractional_bandwidth(g, std::vector<double>(11, 0.0), 0.0) == doctest::Approx(10.0 / 35.0));
}

TEST_CASE("the widest single run is reported") {
    const auto f = ghz_grid(10, 60, 51);
    std::vector<double> pcr(f.size(), 0.0);
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double g = f[i].in_ghz();
        if (g >= 12 && g <= 20) pcr[i] = 1.0;  // 8 GHz wide around 16: 0.5
        if (g >= 40 && g <= 55) pcr[i] = 1.0;  // 15 GHz wide around 47.5: 0.316
    }
    const double bw = fractional_bandwidth(f, pcr, 0.5);
    // Edges interpolate half-way to the neighbouring zero samples.
    CHECK(bw == doctest::Approx(9.0 / 16.0).epsilon(1e-12));
}

TEST_CASE("fractional bandwidth is non-increasing in threshold") {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const auto f = ghz_grid(20, 60, 81);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> pcr;
        double level = u(rng);
        for (std::size_t i = 0; i < f.size(); ++i) {
            level = std::clamp(level + 0.2 * (u(rng) - 0.5), 0.0, 1.0);
            pcr.push_back(level);
        }
        double prev = 2.0;
        for (double t = 0.0; t <= 1.0001; t += 0.01) {
            const double bw = fractional_bandwidth(f, pcr, t);
            CHECK(bw <= prev + 1e-15);
            CHECK(bw >= 0.0);
            CHECK(bw <= 1.0);
            prev = bw;
        }
    }
}

TEST_CASE("fractional bandwidth input validation") {
    CHECK_THROWS_AS(fractional_bandwidth(ghz_grid(20, 60, 3), {0.1, 0.2}, 0.5), Error);
}

TEST_CASE("pattern search finds the quadratic optimum") {
    const auto r = pattern_search(quadratic, {{-1.0, 1.0}}, {0.9}, {500, 1, 0.25, 1e-9, 10000});
    CHECK(std::abs(r.best_x[0] - 0.3) < 1e-6);
    CHECK(r.evaluations == 500);
    const auto r2 = pattern_search(quadratic, {{-1.0, 1.0}}, {}, {500, 17, 0.25, 1e-9, 10000});
    CHECK(std::abs(r2.best_x[0] - 0.3) < 1e-6);
}

TEST_CASE("pattern search trace: monotone best, bounds respected, reproducible") {
    const auto rosen = [](std::span<const double> x) {
        return -(100.0 * std::pow(x[1] - x[0] * x[0], 2) + std::pow(1.0 - x[0], 2));
    };
    const std::vector<Bounds> b{{-2.0, 2.0}, {-1.0, 3.0}};
    const SearchOptions opt{300, 99, 0.25, 1e-6, 10000};
    const auto a = pattern_search(rosen, b, {}, opt);
    const auto c = pattern_search(rosen, b, {}, opt);
    REQUIRE(a.trace.size() == c.trace.size());
    double best = -1e300;
    for (std::size_t i = 0; i < a.trace.size(); ++i) {
        const auto& e = a.trace[i];
        CHECK(e.x == c.trace[i].x);
        CHECK(e.value == c.trace[i].value);
        CHECK(e.best >= best);
        best = e.best;
        CHECK(e.best == std::max(best, e.value));
        for (std::size_t d = 0; d < 2; ++d) {
            CHECK(e.x[d] >= b[d].lo);
            CHECK(e.x[d] <= b[d].hi);
        }
    }
    CHECK(a.best_value == best);
    const auto other = pattern_search(rosen, b, {}, {300, 100, 0.25, 1e-6, 10000});
    CHECK(other.trace.front().x != a.trace.front().x);
}

TEST_CASE("infeasible points are never evaluated") {
    const auto feasible_half = [](std::span<const double> x) { return x[0] + x[1] <= 1.0; };
    const auto obj = [](std::span<const double> x) { return x[0] + 2.0 * x[1]; };
    const auto r = pattern_search(obj, {{0.0, 1.0}, {0.0, 1.0}}, {0.1, 0.1},
                                  {200, 4, 0.25, 1e-9, 10000}, feasible_half);
    for (const auto& e : r.trace) CHECK(e.x[0] + e.x[1] <= 1.0);
    CHECK(r.best_value > 0.3);
    CHECK(r.best_x[0] + r.best_x[1] == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("no feasible point raises NO_FEASIBLE") {
    const auto never = [](std::span<const double>) { return false; };
    try {
        pattern_search(quadratic, {{0.0, 1.0}}, {}, {10, 1, 0.25, 1e-9, 100}, never);
        FAIL("expected NO_FEASIBLE");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NoFeasible);
    }
    // Minor axis always longer than the major axis.
    const DesignBounds impossible{{1.0, 1.5}, {2.0, 3.0}, {4.0, 4.0}, {1.0, 1.0}};
    SearchOptions small;
    small.budget = 5;
    small.max_draws = 200;
    try {
        optimize_design(impossible, {1.2, 2.5, 4.0, 1.0}, EvaluationContext{}, small);
        FAIL("expected NO_FEASIBLE");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NoFeasible);
    }
}

TEST_CASE("pattern search argument checks") {
    CHECK_THROWS_AS(pattern_search(quadratic, {{0.0, 1.0}}, {}, {0, 1, 0.25, 1e-9, 10}), Error);
    CHECK_THROWS_AS(pattern_search(quadratic, {{1.0, 0.0}}, {}, {10, 1, 0.25, 1e-9, 10}), Error);
}

TEST_CASE("design feasibility follows the fit rule") {
    CHECK(feasible({3.8, 1.3, 4.0, 1.0}));
    CHECK_FALSE(feasible({6.0, 1.3, 4.0, 1.0}));
    CHECK_FALSE(feasible({1.0, 1.3, 4.0, 1.0}));
    CHECK_FALSE(feasible({3.8, 1.3, 4.0, 0.0}));
    CHECK_THROWS_AS(evaluate_design({6.0, 1.3, 4.0, 1.0}, EvaluationContext{}), Error);
}

TEST_CASE("surrogate: disc gives no conversion, ellipse converts") {
    const EvaluationContext ctx;
    CHECK(evaluate_design({2.0, 2.0, 4.0, 1.0}, ctx) == 0.0);
    const auto cell = design_cell({2.0, 2.0, 4.0, 1.0}, ctx.substrate);
    for (const double p : tl_pcr_curve(cell, ctx.band)) CHECK(p < 1e-20);
    CHECK(evaluate_design({3.8, 1.3, 4.0, 1.0}, ctx) > 0.2);
}

TEST_CASE("surrogate sheet is lossless and resonates below the band edge") {
    const EvaluationContext ctx;
    const auto cell = design_cell({3.8, 1.3, 4.0, 1.0}, ctx.substrate);
    const auto low = tl_sheet_impedances(cell, Frequency::ghz(5));
    const auto high = tl_sheet_impedances(cell, Frequency::ghz(200));
    CHECK(low.z_u.real() == 0.0);
    CHECK(low.z_u.imag() < 0.0);   // capacitive below resonance
    CHECK(high.z_u.imag() > 0.0);  // inductive above
    // The long axis resonates in the band; the short axis stays capacitive.
    double f_u = 0.0;
    for (double g = 5.0; g < 400.0 && f_u == 0.0; g += 0.5) {
        if (tl_sheet_impedances(cell, Frequency::ghz(g)).z_u.imag() > 0.0) f_u = g;
    }
    CHECK(f_u > 20.0);
    CHECK(f_u < 120.0);
    for (double g = 20.0; g <= 60.0; g += 1.0) {
        CHECK(tl_sheet_impedances(cell, Frequency::ghz(g)).z_v.imag() < 0.0);
    }
}

TEST_CASE("threshold monotonicity through evaluate_design") {
    EvaluationContext ctx;
    double prev = 2.0;
    for (double t = 0.0; t <= 1.0; t += 0.05) {
        ctx.threshold = t;
        const double bw = evaluate_design({3.8, 1.3, 4.0, 1.0}, ctx);
        CHECK(bw <= prev);
        prev = bw;
    }
    ctx.threshold = 0.0;
    CHECK(evaluate_design({3.8, 1.3, 4.0, 1.0}, ctx) == doctest::Approx(1.0));
}

TEST_CASE("optimizing from a perturbed design never loses bandwidth") {
    const EvaluationContext ctx;
    const DesignVector start{3.8, 1.3 * 1.1, 4.0, 1.0};
    const double initial = evaluate_design(start, ctx);
    SearchOptions opt;
    opt.budget = 120;
    opt.seed = 5;
    const auto r = optimize_design(reference_bounds(), start, ctx, opt);
    CHECK(r.bandwidth >= initial);
    CHECK(r.search.trace.front().x == start.to_vector());
    CHECK(r.search.trace.front().value == initial);
    for (const auto& e : r.search.trace) {
        const auto d = DesignVector::from_vector(e.x);
        CHECK(feasible(d));
        CHECK(d.major_axis >= 2.5);
        CHECK(d.major_axis <= 4.5);
    }
    const auto again = optimize_design(reference_bounds(), start, ctx, opt);
    REQUIRE(again.search.trace.size() == r.search.trace.size());
    for (std::size_t i = 0; i < r.search.trace.size(); ++i) {
        CHECK(again.search.trace[i].x == r.search.trace[i].x);
        CHECK(again.search.trace[i].value == r.search.trace[i].value);
    }
}
