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

#include "pcm/error.hpp"
#include "pcm/solver.hpp"

using namespace pcm;
using namespace pcm::solver;
using jones::cplx;

namespace {

constexpr double kC = 299792458.0;
constexpr double kEta = 376.730313668;

geometry::StackUp rt5880(double tan_delta = 0.0009) {
    return {{"RT5880", 2.2, tan_delta}, Length::mm(1.0), Length::mm(0.035), true};
}

SolverConfig coarse() {
    SolverConfig c;
    c.resolution = Length::mm(0.1);
    return c;
}

geometry::UnitCellGeometry cell(double major, double minor, const geometry::StackUp& s = rt5880()) {
    return geometry::build_unit_cell(Length::mm(4), Length::mm(major), Length::mm(minor), s,
                                     geometry::Handedness::Unit);
}

cplx slab_oracle(double eps_r, double h_m, double f_hz) {
    const double beta = 2.0 * M_PI * f_hz * std::sqrt(eps_r) / kC;
    const cplx z_in = cplx(0.0, 1.0) * (kEta / std::sqrt(eps_r)) * std::tan(beta * h_m);
    return (z_in - kEta) / (z_in + kEta);
}

double wrap_deg(double d) {
    while (d > 180.0) d -= 360.0;
    while (d <= -180.0) d += 360.0;
    return d;
}

ErrorCode code_of(const auto& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an exception");
    return ErrorCode::InvalidArgument;
}

// One shared solve of the reference cell at the coarse grid.
const CellRun& reference_run() {
    static const CellRun run = run_unit_cell(cell(3.8, 1.3), coarse());
    return run;
}

}  // namespace

TEST_CASE("config validation") {
    auto c = coarse();
    c.courant = 1.2;
    CHECK(code_of([&] { validate(c, rt5880()); }) == ErrorCode::StabilityError);
    CHECK(code_of([&] { run_unit_cell(cell(3.8, 1.3), c); }) == ErrorCode::StabilityError);
    c.courant = 0.0;
    CHECK(code_of([&] { validate(c, rt5880()); }) == ErrorCode::StabilityError);
    c = coarse();
    c.resolution = Length::mm(0.2);  // 5 cells across 1 mm and above lambda/20
    CHECK(code_of([&] { validate(c, rt5880()); }) == ErrorCode::ResolutionError);
    c = coarse();
    c.f_max = Frequency::ghz(10);
    CHECK_THROWS_AS(validate(c, rt5880()), Error);
    CHECK_NOTHROW(validate(SolverConfig{}, rt5880()));
}

TEST_CASE("band sampling and time step") {
    const auto f = band_frequencies(SolverConfig{});
    REQUIRE(f.size() == 161);
    CHECK(f.front().in_ghz() == doctest::Approx(20.0));
    CHECK(f[1].in_ghz() == doctest::Approx(20.25));
    CHECK(f.back().in_ghz() == doctest::Approx(60.0));
    const auto c = coarse();
    CHECK(time_step(c) == doctest::Approx(0.99 * 1e-4 / (kC * std::sqrt(3.0))).epsilon(1e-12));
    CHECK(grating_onset(Length::mm(4)).in_ghz() == doctest::Approx(74.948).epsilon(1e-4));
}

TEST_CASE("direct DFT places sample n at (n + 1) dt") {
    std::vector<double> s(10, 0.0);
    s[3] = 2.0;
    const double dt = 1e-12;
    const auto out = direct_dft(s, dt, {Frequency::ghz(37.0)});
    const cplx expect = 2.0 * std::exp(cplx(0.0, -2.0 * M_PI * 37e9 * 4.0 * dt));
    CHECK(std::abs(out[0] - expect) < 1e-14);
}

TEST_CASE("reference run excites the whole band") {
    const auto ref = run_reference(rt5880(), coarse());
    CHECK(ref.frequencies.size() == 161);
    double peak = 0.0;
    for (const auto& v : ref.incident_spectrum) peak = std::max(peak, std::abs(v));
    for (const auto& v : ref.incident_spectrum) CHECK(std::abs(v) >= 0.01 * peak);
    CHECK(ref.record.residual <= coarse().decay_threshold);
    for (const double v : ref.record.ex) CHECK(std::isfinite(v));
}

TEST_CASE("no scattered field reaches the monitor before the structure can respond") {
    auto c = coarse();
    c.air_gap = Length::mm(10.0);
    const auto ref = run_reference(rt5880(), c);
    // Fields move at most one cell per step: source plane -> ground -> monitor.
    const std::size_t ks = 10;
    const std::size_t kb = ks + 100;
    const std::size_t km = kb + 2;
    const std::size_t window = kb + km;
    double inc = 0.0;
    double leak = 0.0;
    for (std::size_t n = 0; n < window; ++n) {
        inc = std::max(inc, std::abs(ref.record.incident[n]));
        leak = std::max(leak, std::abs(ref.record.ex[n]));
        leak = std::max(leak, std::abs(ref.record.ey[n]));
    }
    CHECK(inc > 0.0);
    CHECK(leak <= 1e-7 * inc);
}

TEST_CASE("metal plane on a full lateral grid reflects -1") {
    auto c = coarse();
    c.collapse_uniform = false;
    c.resolution = Length::mm(0.1);
    const auto run = run_mask(geometry::uniform_mask(Length::mm(2.0), c.resolution, true), rt5880(), c);
    for (const auto& s : run.spectrum.samples()) {
        CHECK(std::abs(s.j.xx() + 1.0) <= 1e-3);
        CHECK(std::abs(s.j.yy() + 1.0) <= 1e-3);
        CHECK(std::abs(s.j.xy()) <= 1e-3);
    }
}

TEST_CASE("empty grounded slab matches the impedance formula") {
    const auto run = run_mask(geometry::uniform_mask(Length::mm(4.0), Length::mm(0.1), false),
                              rt5880(0.0), coarse());
    CHECK(run.spectrum.basis() == jones::Basis::XY);
    CHECK(run.spectrum.reference_plane() == "patch surface");
    for (const auto& s : run.spectrum.samples()) {
        const cplx ref = slab_oracle(2.2, 1e-3, s.f.hertz);
        CHECK(std::abs(std::abs(s.j.xx()) - std::abs(ref)) <= 0.02 * std::abs(ref));
        CHECK(std::abs(wrap_deg(jones::phase_deg(s.j.xx()) - jones::phase_deg(ref))) <= 5.0);
        CHECK(std::abs(s.j.yy() - s.j.xx()) < 1e-12);
    }
}

TEST_CASE("too few steps is reported as non-converged") {
    auto c = coarse();
    c.max_steps = 200;
    CHECK(code_of([&] {
              run_mask(geometry::uniform_mask(Length::mm(4.0), c.resolution, false), rt5880(), c);
          }) == ErrorCode::NonConverged);
}

TEST_CASE("grating warning above the first non-specular order") {
    auto c = coarse();
    c.f_max = Frequency::ghz(80);
    const auto run = run_mask(geometry::uniform_mask(Length::mm(4.0), c.resolution, false), rt5880(), c);
    bool found = false;
    for (const auto& w : run.warnings) found = found || w.rfind("GRATING_WARNING", 0) == 0;
    CHECK(found);
    CHECK(reference_run().warnings.empty());
}

TEST_CASE("disc patch produces no cross-polarization") {
    const auto run = run_unit_cell(cell(1.3, 1.3), coarse());
    for (const auto& s : run.spectrum.samples()) {
        CHECK(std::abs(s.j.xy()) <= 0.05);
        CHECK(std::abs(s.j.yx()) <= 0.05);
    }
}

TEST_CASE("reference cell converts across the band") {
    const auto& s = reference_run().spectrum;
    int minima = 0;
    const auto& v = s.samples();
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double g = v[i].f.in_ghz();
        CHECK(std::abs(v[i].j.xy() - v[i].j.yx()) <= 1e-3);
        if (g >= 26.0 && g <= 58.0) {
            CHECK(jones::pcr(v[i].j, jones::Polarization::Y) >= 0.8);
            CHECK(std::abs(v[i].j.xy()) >= 0.85);
        }
        if (i > 0 && i + 1 < v.size() && std::abs(v[i].j.yy()) < std::abs(v[i - 1].j.yy()) &&
            std::abs(v[i].j.yy()) < std::abs(v[i + 1].j.yy())) {
            ++minima;
        }
    }
    CHECK(minima >= 3);
}

TEST_CASE("mirror cell equals the mirror transform of the unit cell") {
    const auto mirror = run_unit_cell(geometry::mirror_unit(cell(3.8, 1.3)), coarse());
    const auto expect = reference_run().spectrum.mirrored();
    for (std::size_t i = 0; i < expect.size(); ++i) {
        const auto& a = mirror.spectrum.samples()[i].j;
        const auto& b = expect.samples()[i].j;
        for (int k = 0; k < 4; ++k) CHECK(std::abs(a.r[k] - b.r[k]) <= 1e-3);
        const double dphi = wrap_deg(jones::phase_deg(reference_run().spectrum.samples()[i].j.xy()) -
                                     jones::phase_deg(a.xy()));
        CHECK(std::abs(std::abs(dphi) - 180.0) <= 0.5);
    }
}

TEST_CASE("results are bit-identical across repeats and thread counts") {
    auto c = coarse();
    c.threads = 2;
    const auto again = run_unit_cell(cell(3.8, 1.3), c);
    CHECK(again.spectrum == reference_run().spectrum);
    CHECK(again.x_run.steps == reference_run().x_run.steps);
}

TEST_CASE("lossless reference cell conserves energy") {
    const auto run = run_unit_cell(cell(3.8, 1.3, rt5880(0.0)), coarse());
    for (const auto& s : run.spectrum.samples()) {
        const double total = std::norm(s.j.xy()) + std::norm(s.j.yy());
        CHECK(total == doctest::Approx(1.0).epsilon(0.02));
    }
}
