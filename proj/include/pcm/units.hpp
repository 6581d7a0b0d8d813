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

#ifndef PCM_UNITS_HPP
#define PCM_UNITS_HPP

#include <cmath>
#include <compare>
#include <numbers>
#include <utility>

namespace pcm {

inline constexpr double kSpeedOfLight = 299792458.0;        // m/s
inline constexpr double kMu0 = 1.25663706212e-6;            // H/m
inline constexpr double kEps0 = 1.0 / (kMu0 * kSpeedOfLight * kSpeedOfLight);
inline constexpr double kEta0 = kMu0 * kSpeedOfLight;       // ohm
inline constexpr double kPi = std::numbers::pi;

// Lengths are carried in metres; the mm helpers exist because every
// external format (configs, CSVs) speaks millimetres.
struct Length {
    double metres = 0.0;

    static constexpr Length mm(double v) { return Length{v / 1e3}; }
    static constexpr Length m(double v) { return Length{v}; }
    constexpr double in_mm() const { return metres * 1e3; }

    constexpr Length operator+(Length o) const { return {metres + o.metres}; }
    constexpr Length operator-(Length o) const { return {metres - o.metres}; }
    constexpr Length operator*(double s) const { return {metres * s}; }
    constexpr Length operator/(double s) const { return {metres / s}; }
    constexpr double operator/(Length o) const { return metres / o.metres; }
    constexpr auto operator<=>(const Length&) const = default;
};

struct Frequency {
    double hertz = 0.0;

    static constexpr Frequency ghz(double v) { return Frequency{v * 1e9}; }
    static constexpr Frequency hz(double v) { return Frequency{v}; }
    constexpr double in_ghz() const { return hertz / 1e9; }
    constexpr double angular() const { return 2.0 * kPi * hertz; }
    constexpr Length wavelength() const { return Length{kSpeedOfLight / hertz}; }
    constexpr double wavenumber() const { return angular() / kSpeedOfLight; }

    constexpr auto operator<=>(const Frequency&) const = default;
};

/// cos and sin of an angle in degrees; multiples of 45 deg come out exact
/// (cos 45 == sin 45 bit for bit, cos 90 == 0) so symmetric geometries stay
/// symmetric after rounding.
inline std::pair<double, double> cos_sin_deg(double deg) {
    const double eighths = deg / 45.0;
    if (std::nearbyint(eighths) == eighths && std::abs(eighths) < 1e6) {
        static constexpr double h = std::numbers::sqrt2 / 2.0;
        static constexpr double c[8] = {1.0, h, 0.0, -h, -1.0, -h, 0.0, h};
        static constexpr double s[8] = {0.0, h, 1.0, h, 0.0, -h, -1.0, -h};
        long idx = static_cast<long>(eighths) % 8;
        if (idx < 0) idx += 8;
        return {c[idx], s[idx]};
    }
    const double rad = deg * kPi / 180.0;
    return {std::cos(rad), std::sin(rad)};
}

}  // namespace pcm

#endif  // PCM_UNITS_HPP
