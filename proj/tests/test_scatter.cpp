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
#include "pcm/scatter.hpp"

using namespace pcm;
using namespace pcm::scatter;
using geometry::TileKind;
using jones::Basis;
using jones::cplx;
using jones::Jones2;
using jones::Polarization;

namespace {

constexpr double kC = 299792458.0;

geometry::UnitCellGeometry reference_cell() {
    const geometry::StackUp s{{"RT5880", 2.2, 0.0009}, Length::mm(1), Length::mm(0.035), true};
    return geometry::build_unit_cell(Length::mm(4), Length::mm(3.8), Length::mm(1.3), s,
                                     geometry::Handedness::Unit);
}

jones::ReflectionSpectrum ideal() {
    return constant_spectrum(Jones2::make(0, -1, -1, 0, Basis::XY), Frequency::ghz(1),
                             Frequency::ghz(200));
}

// Brute-force physical-optics sum written out independently.
cplx naive_sum(const ApertureField& ap, bool co, double theta_deg, double phi_deg) {
    const double k = 2.0 * M_PI * ap.frequency().hertz / kC;
    const double t = theta_deg * M_PI / 180.0;
    const double p = phi_deg * M_PI / 180.0;
    const double u = std::sin(t) * std::cos(p);
    const double v = std::sin(t) * std::sin(p);
    const double d = ap.pitch().metres;
    const double cx = 0.5 * d * static_cast<double>(ap.nx());
    const double cy = 0.5 * d * static_cast<double>(ap.ny());
    cplx sum = 0.0;
    for (std::size_t i = 0; i < ap.nx(); ++i) {
        for (std::size_t j = 0; j < ap.ny(); ++j) {
            const double x = (static_cast<double>(i) + 0.5) * d - cx;
            const double y = (static_cast<double>(j) + 0.5) * d - cy;
            const cplx e = co ? ap.co(i, j) : ap.cross(i, j);
            sum += e * std::exp(cplx(0.0, k * (u * x + v * y)));
        }
    }
    return sum * d * d;
}

ApertureField random_aperture(std::size_t nx, std::size_t ny, unsigned seed, Frequency f) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    ApertureField ap(Length::mm(1.5), nx, ny, 1, f, Polarization::Y);
    for (std::size_t i = 0; i < nx; ++i) {
        for (std::size_t j = 0; j < ny; ++j) {
            ap.co(i, j) = {d(rng), d(rng)};
            ap.cross(i, j) = {d(rng), d(rng)};
        }
    }
    return ap;
}

double max_dbsm(const FarFieldPattern& p) {
    double m = -1e300;
    for (std::size_t t = 0; t < p.theta_deg.size(); ++t)
        for (std::size_t k = 0; k < p.phi_deg.size(); ++k) m = std::max(m, p.sigma_dbsm(t, k));
    return m;
}

}  // namespace

TEST_CASE("uniform ideal converters paint a uniform cross-pol field") {
    const auto layout = geometry::uniform_layout(3, 5, 2, Length::mm(4), TileKind::Unit);
    const auto ap = paint_aperture(layout, ideal(), ideal().mirrored(), Frequency::ghz(37.75),
                                   Polarization::Y);
    CHECK(ap.nx() == 3 * 2 * ap.block());
    for (std::size_t i = 0; i < ap.nx(); ++i) {
        for (std::size_t j = 0; j < ap.ny(); ++j) {
            CHECK(ap.cross(i, j) == cplx(-1.0));
            CHECK(ap.co(i, j) == cplx(0.0));
        }
    }
}

TEST_CASE("ideal checkerboard alternates cross-pol sign by tile") {
    const auto layout = geometry::build_checkerboard(3, 5, 2, reference_cell());
    const auto ap = paint_aperture(layout, ideal(), ideal().mirrored(), Frequency::ghz(37.75),
                                   Polarization::Y);
    const std::size_t per_tile = 2 * ap.block();
    for (std::size_t i = 0; i < ap.nx(); ++i) {
        for (std::size_t j = 0; j < ap.ny(); ++j) {
            const bool unit = ((i / per_tile) + (j / per_tile)) % 2 == 0;
            CHECK(ap.cross(i, j) == cplx(unit ? -1.0 : 1.0));
        }
    }
}

TEST_CASE("PEC and absent tiles") {
    const auto pec = geometry::uniform_layout(2, 2, 2, Length::mm(4), TileKind::Pec);
    const auto absent = geometry::uniform_layout(2, 2, 2, Length::mm(4), TileKind::Absent);
    const auto f = Frequency::ghz(30);
    const auto a = paint_aperture(pec, ideal(), ideal(), f, Polarization::X);
    const auto b = paint_aperture(absent, ideal(), ideal(), f, Polarization::X);
    for (std::size_t i = 0; i < a.nx(); ++i) {
        for (std::size_t j = 0; j < a.ny(); ++j) {
            CHECK(a.co(i, j) == cplx(-1.0));
            CHECK(a.cross(i, j) == cplx(0.0));
            CHECK(b.co(i, j) == cplx(0.0));
            CHECK(b.cross(i, j) == cplx(0.0));
        }
    }
}

TEST_CASE("painting outside the spectrum band fails") {
    const auto narrow = constant_spectrum(Jones2::make(0, 1, 1, 0, Basis::XY), Frequency::ghz(20),
                                          Frequency::ghz(60));
    const auto layout = geometry::uniform_layout(1, 1, 1, Length::mm(4), TileKind::Unit);
    try {
        paint_aperture(layout, narrow, narrow, Frequency::ghz(70), Polarization::Y);
        FAIL("expected BAND_ERROR");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::BandError);
    }
}

TEST_CASE("24 x 40 mm PEC aperture matches the plate formula at broadside") {
    const auto f = Frequency::ghz(37.75);
    const auto layout = geometry::uniform_layout(3, 5, 2, Length::mm(4), TileKind::Pec);
    const auto ap = paint_aperture(layout, ideal(), ideal(), f, Polarization::Y);
    const auto p = far_field(ap, {0.0}, {0.0});
    const double lambda = kC / 37.75e9;
    const double area = 0.024 * 0.040;
    const double expect = 10.0 * std::log10(4.0 * M_PI * area * area / (lambda * lambda));
    CHECK(p.sigma_dbsm(0, 0) == doctest::Approx(expect).epsilon(1e-10));
    CHECK(p.sigma_dbsm(0, 0) == doctest::Approx(-7.36).epsilon(0.002));
    CHECK(pec_plate_rcs(Length::mm(24), Length::mm(40), f) == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("plate formula values and monotonicity") {
    CHECK(pec_plate_rcs(Length::mm(28.7), Length::mm(41.6), Frequency::ghz(30)) ==
          doctest::Approx(-7.46).epsilon(0.01 / 7.46));
    CHECK(pec_plate_rcs(Length::mm(28.7), Length::mm(41.6), Frequency::ghz(37.75)) ==
          doctest::Approx(-5.47).epsilon(0.01 / 5.47));
    double prev = -1e300;
    for (double f = 10; f <= 60; f += 5) {
        const double s = pec_plate_rcs(Length::mm(28.7), Length::mm(41.6), Frequency::ghz(f));
        CHECK(s > prev);
        prev = s;
    }
    CHECK(pec_plate_rcs(Length::mm(30), Length::mm(41.6), Frequency::ghz(30)) >
          pec_plate_rcs(Length::mm(28.7), Length::mm(41.6), Frequency::ghz(30)));
    CHECK(std::isinf(pec_plate_rcs(Length::mm(0), Length::mm(41.6), Frequency::ghz(30))));
}

TEST_CASE("fast and direct far fields agree with a brute-force sum") {
    const auto f = Frequency::ghz(37.75);
    const auto ap = random_aperture(12, 20, 42, f);
    const auto thetas = uniform_grid(0.0, 89.0, 3.5);
    const auto phis = uniform_grid(0.0, 355.0, 5.0);
    const auto fast = far_field(ap, thetas, phis, FarFieldMethod::Fast);
    const auto direct = far_field(ap, thetas, phis, FarFieldMethod::Direct);
    double worst = 0.0;
    for (std::size_t i = 0; i < fast.co.size(); ++i) {
        worst = std::max(worst, std::abs(fast.co[i] - direct.co[i]) / std::abs(direct.co[i]));
        worst = std::max(worst, std::abs(fast.cross[i] - direct.cross[i]) / std::abs(direct.cross[i]));
    }
    CHECK(worst < 1e-9);
    for (const std::size_t t : {0u, 7u, 20u}) {
        for (const std::size_t k : {0u, 13u, 50u}) {
            const auto i = direct.index(t, k);
            const cplx oracle = naive_sum(ap, true, thetas[t], phis[k]);
            CHECK(std::abs(direct.co[i] - oracle) / std::abs(oracle) < 1e-11);
        }
    }
}

TEST_CASE("block apertures: fast path agrees with direct path") {
    const auto layout = geometry::build_checkerboard(3, 5, 2, reference_cell());
    const auto unit = constant_spectrum(Jones2::make({0.1, 0.2}, {-0.9, 0.1}, {-0.9, 0.1}, {0.2, -0.3}, Basis::XY),
                                        Frequency::ghz(1), Frequency::ghz(100));
    const auto ap = paint_aperture(layout, unit, unit.mirrored(), Frequency::ghz(33.0), Polarization::Y);
    const auto thetas = uniform_grid(0.0, 89.0, 4.0);
    const auto phis = uniform_grid(0.0, 350.0, 10.0);
    const auto fast = far_field(ap, thetas, phis, FarFieldMethod::Fast);
    const auto direct = far_field(ap, thetas, phis, FarFieldMethod::Direct);
    for (std::size_t i = 0; i < fast.co.size(); ++i) {
        const double scale = std::max({std::abs(direct.co[i]), std::abs(direct.cross[i]), 1e-12});
        CHECK(std::abs(fast.co[i] - direct.co[i]) / scale < 1e-9);
        CHECK(std::abs(fast.cross[i] - direct.cross[i]) / scale < 1e-9);
    }
}

TEST_CASE("sampling finer than a quarter wavelength is required") {
    ApertureField ap(Length::mm(2.5), 4, 4, 1, Frequency::ghz(37.75), Polarization::Y);
    try {
        far_field(ap, {0.0}, {0.0});
        FAIL("expected SAMPLING_ERROR");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::SamplingError);
    }
}

TEST_CASE("zero aperture reports the dBsm floor") {
    ApertureField ap(Length::mm(1), 6, 6, 1, Frequency::ghz(30), Polarization::Y);
    const auto p = far_field(ap, uniform_grid(0, 80, 10), uniform_grid(0, 300, 60));
    for (std::size_t t = 0; t < p.theta_deg.size(); ++t)
        for (std::size_t k = 0; k < p.phi_deg.size(); ++k) CHECK(p.sigma_dbsm(t, k) == kDbsmFloor);
    CHECK(to_dbsm(0.0) == kDbsmFloor);
    CHECK(to_dbsm(1e-20) == kDbsmFloor);
    CHECK(to_dbsm(1.0) == 0.0);
}

TEST_CASE("far field is linear in the aperture") {
    const auto f = Frequency::ghz(40);
    const auto a = random_aperture(10, 14, 1, f);
    const auto b = random_aperture(10, 14, 2, f);
    const auto thetas = uniform_grid(0.0, 85.0, 5.0);
    const auto phis = uniform_grid(0.0, 350.0, 10.0);
    const auto fa = far_field(a, thetas, phis);
    const auto fb = far_field(b, thetas, phis);
    const auto fab = far_field(a + b, thetas, phis);
    for (std::size_t i = 0; i < fab.co.size(); ++i) {
        const double scale = std::abs(fa.co[i]) + std::abs(fb.co[i]);
        CHECK(std::abs(fab.co[i] - (fa.co[i] + fb.co[i])) <= 1e-12 * scale);
        const double scale_x = std::abs(fa.cross[i]) + std::abs(fb.cross[i]);
        CHECK(std::abs(fab.cross[i] - (fa.cross[i] + fb.cross[i])) <= 1e-12 * scale_x);
    }
}

TEST_CASE("broadside amplitude is the plain sample sum times the sample area") {
    const auto ap = random_aperture(9, 13, 8, Frequency::ghz(35));
    cplx sum = 0.0;
    for (std::size_t i = 0; i < ap.nx(); ++i)
        for (std::size_t j = 0; j < ap.ny(); ++j) sum += ap.co(i, j);
    const double area = ap.pitch().metres * ap.pitch().metres;
    const auto p = far_field(ap, {0.0}, {0.0});
    CHECK(std::abs(p.co[0] - sum * area) < 1e-12 * std::abs(sum * area));
}

TEST_CASE("swapping unit and mirror tiles leaves the RCS unchanged") {
    const auto unit = constant_spectrum(Jones2::make({0.1, 0.2}, {-0.8, 0.3}, {-0.8, 0.3}, {0.3, -0.1}, Basis::XY),
                                        Frequency::ghz(1), Frequency::ghz(100));
    const auto layout = geometry::build_checkerboard(4, 3, 2, reference_cell());
    const auto f = Frequency::ghz(36);
    const auto thetas = uniform_grid(0.0, 88.0, 4.0);
    const auto phis = uniform_grid(0.0, 350.0, 10.0);
    const auto a = far_field(paint_aperture(layout, unit, unit.mirrored(), f, Polarization::Y), thetas, phis);
    const auto b = far_field(paint_aperture(layout.swapped_handedness(), unit, unit.mirrored(), f,
                                            Polarization::Y),
                             thetas, phis);
    for (std::size_t i = 0; i < a.sigma_m2.size(); ++i) {
        CHECK(b.sigma_m2[i] == doctest::Approx(a.sigma_m2[i]).epsilon(1e-9));
    }
}

TEST_CASE("co-pol and cross-pol parts recombine to the full RCS") {
    const auto f = Frequency::ghz(31);
    const auto ap = random_aperture(8, 8, 77, f);
    const auto thetas = uniform_grid(0.0, 80.0, 10.0);
    const auto phis = uniform_grid(0.0, 330.0, 30.0);
    const auto full = far_field(ap, thetas, phis);
    const auto co = far_field(ap.co_only(), thetas, phis);
    const auto cross = far_field(ap.cross_only(), thetas, phis);
    const double lambda = kC / f.hertz;
    for (std::size_t i = 0; i < full.sigma_m2.size(); ++i) {
        const double sum = 4.0 * M_PI / (lambda * lambda) * (std::norm(co.co[i]) + std::norm(cross.cross[i]));
        CHECK(full.sigma_m2[i] == doctest::Approx(sum).epsilon(1e-12));
        CHECK(std::abs(co.cross[i]) == 0.0);
        CHECK(std::abs(cross.co[i]) == 0.0);
    }
}

TEST_CASE("checkerboard broadside reduction: imbalance and exact cancellation") {
    const auto cell = reference_cell();
    const auto odd = monostatic_reduction(geometry::build_checkerboard(3, 5, 2, cell), ideal(),
                                          ideal().mirrored(), Frequency::ghz(30), Frequency::ghz(40), 11);
    REQUIRE(odd.size() == 11);
    for (const auto& p : odd) {
        CHECK(p.delta_db == doctest::Approx(20.0 * std::log10(1.0 / 15.0)).epsilon(0.1 / 23.52));
        CHECK(p.sigma_pec_dbsm ==
              doctest::Approx(pec_plate_rcs(Length::mm(24), Length::mm(40), p.f)).epsilon(1e-9));
    }
    const auto even = monostatic_reduction(geometry::build_checkerboard(4, 4, 2, cell), ideal(),
                                           ideal().mirrored(), Frequency::ghz(30), Frequency::ghz(40), 11);
    for (const auto& p : even) CHECK(p.delta_db < -60.0);
}

TEST_CASE("lobe prediction") {
    const auto lobes = predict_lobes(Length::mm(8), Frequency::ghz(37.75));
    REQUIRE(lobes.size() == 4);
    const double lambda = kC / 37.75e9;
    const double theta = std::asin(lambda / (std::sqrt(2.0) * 0.008)) * 180.0 / M_PI;
    CHECK(theta == doctest::Approx(44.6).epsilon(0.001));
    const double phis[] = {45, 135, 225, 315};
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(lobes[i].theta_deg == doctest::Approx(theta).epsilon(1e-12));
        CHECK(lobes[i].phi_deg == doctest::Approx(phis[i]));
    }
    CHECK(predict_lobes(Length::m(1000), Frequency::ghz(37.75))[0].theta_deg < 0.01);
    CHECK(predict_lobes(Length::mm(4), Frequency::ghz(30)).empty());
    CHECK(angular_separation_deg({10, 0}, {10, 360}) == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(angular_separation_deg({0, 0}, {30, 123}) == doctest::Approx(30.0));
}

TEST_CASE("plate pattern has one dominant peak at broadside") {
    const auto layout = geometry::uniform_layout(3, 5, 2, Length::mm(4), TileKind::Pec);
    const auto ap = paint_aperture(layout, ideal(), ideal(), Frequency::ghz(37.75), Polarization::Y);
    const auto peaks = find_peaks(far_field(ap, default_theta_grid(), default_phi_grid()), 10.0);
    REQUIRE(peaks.size() == 1);
    CHECK(peaks[0].theta_deg == 0.0);
}

TEST_CASE("large ideal checkerboard scatters into the four predicted lobes") {
    const auto f = Frequency::ghz(37.75);
    const auto layout = geometry::build_checkerboard(16, 16, 2, reference_cell());
    const auto ap = paint_aperture(layout, ideal(), ideal().mirrored(), f, Polarization::Y);
    const auto pattern = far_field(ap, default_theta_grid(), default_phi_grid());
    const auto peaks = find_peaks(pattern, 6.0);
    const auto lobes = predict_lobes(layout.tile_pitch(), f);
    REQUIRE(peaks.size() == 4);
    for (const auto& p : peaks) {
        double best = 180.0;
        for (const auto& l : lobes) best = std::min(best, angular_separation_deg({p.theta_deg, p.phi_deg}, l));
        CHECK(best <= 1.0);
        CHECK(p.sigma_dbsm == doctest::Approx(max_dbsm(pattern)).epsilon(1e-6));
    }
}

TEST_CASE("monotone synthetic pattern peaks only at the pole") {
    FarFieldPattern p;
    p.f = Frequency::ghz(30);
    p.theta_deg = uniform_grid(0.0, 89.0, 0.5);
    p.phi_deg = uniform_grid(0.0, 359.0, 1.0);
    for (const double t : p.theta_deg) {
        for (std::size_t k = 0; k < p.phi_deg.size(); ++k) {
            p.sigma_m2.push_back(std::pow(10.0, -t / 10.0));
            p.co.push_back(0.0);
            p.cross.push_back(0.0);
        }
    }
    const auto peaks = find_peaks(p, 200.0);
    REQUIRE(peaks.size() == 1);
    CHECK(peaks[0].theta_deg == 0.0);
}

TEST_CASE("peaks are sorted by level with ties broken by angle") {
    FarFieldPattern p;
    p.f = Frequency::ghz(30);
    p.theta_deg = uniform_grid(0.0, 60.0, 1.0);
    p.phi_deg = uniform_grid(0.0, 359.0, 1.0);
    p.sigma_m2.assign(p.theta_deg.size() * p.phi_deg.size(), 1e-6);
    p.co.assign(p.sigma_m2.size(), 0.0);
    p.cross.assign(p.sigma_m2.size(), 0.0);
    p.sigma_m2[p.index(0, 0)] = 1e-7;  // pole below its ring
    p.sigma_m2[p.index(30, 200)] = 1e-2;
    p.sigma_m2[p.index(20, 100)] = 1e-2;
    p.sigma_m2[p.index(20, 50)] = 1e-2;
    p.sigma_m2[p.index(40, 10)] = 1e-3;
    const auto peaks = find_peaks(p, 15.0);
    REQUIRE(peaks.size() == 4);
    CHECK(peaks[0].theta_deg == 20.0);
    CHECK(peaks[0].phi_deg == 50.0);
    CHECK(peaks[1].theta_deg == 20.0);
    CHECK(peaks[1].phi_deg == 100.0);
    CHECK(peaks[2].theta_deg == 30.0);
    CHECK(peaks[3].theta_deg == 40.0);
    CHECK(find_peaks(p, 5.0).size() == 3);
}
