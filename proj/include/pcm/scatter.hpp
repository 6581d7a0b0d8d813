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

#ifndef PCM_SCATTER_HPP
#define PCM_SCATTER_HPP

#include <cstddef>
#include <vector>

#include "pcm/geometry.hpp"
#include "pcm/jones.hpp"
#include "pcm/units.hpp"

namespace pcm::scatter {

using jones::cplx;

inline constexpr double kDbsmFloor = -100.0;

/// Reflected tangential field sampled over the aperture. Sample (i, j) covers
/// [i, i+1) x [j, j+1) pitches from the aperture corner. `block` samples per
/// side share one value (one unit cell), which the fast far-field path uses.
class ApertureField {
public:
    ApertureField(Length pitch, std::size_t nx, std::size_t ny, std::size_t block, Frequency f,
                  jones::Polarization incident);

    Length pitch() const { return pitch_; }
    std::size_t nx() const { return nx_; }
    std::size_t ny() const { return ny_; }
    std::size_t block() const { return block_; }
    Frequency frequency() const { return f_; }
    jones::Polarization incident() const { return incident_; }

    cplx& co(std::size_t i, std::size_t j) { return co_[i * ny_ + j]; }
    cplx& cross(std::size_t i, std::size_t j) { return cross_[i * ny_ + j]; }
    cplx co(std::size_t i, std::size_t j) const { return co_[i * ny_ + j]; }
    cplx cross(std::size_t i, std::size_t j) const { return cross_[i * ny_ + j]; }

    /// Element-wise sum; both fields must share sampling and frequency.
    ApertureField operator+(const ApertureField& other) const;
    ApertureField co_only() const;
    ApertureField cross_only() const;

private:
    Length pitch_;
    std::size_t nx_;
    std::size_t ny_;
    std::size_t block_;
    Frequency f_;
    jones::Polarization incident_;
    std::vector<cplx> co_;
    std::vector<cplx> cross_;
};

/// Smallest per-cell subdivision keeping the sample pitch at or below lambda/4.
std::size_t samples_per_cell_for(Length cell_period, Frequency f);

/// Assigns each cell its infinite-array reflection (local periodicity).
/// `samples_per_cell` = 0 picks the coarsest sampling that still satisfies lambda/4.
ApertureField paint_aperture(const geometry::ApertureLayout& layout,
                             const jones::ReflectionSpectrum& unit_spectrum,
                             const jones::ReflectionSpectrum& mirror_spectrum, Frequency f,
                             jones::Polarization incident, std::size_t samples_per_cell = 0);

/// Spectrum holding one Jones matrix across [f_lo, f_hi].
jones::ReflectionSpectrum constant_spectrum(const jones::Jones2& j, Frequency f_lo, Frequency f_hi);

enum class FarFieldMethod { Fast, Direct };

struct FarFieldPattern {
    std::vector<double> theta_deg;
    std::vector<double> phi_deg;
    Frequency f;
    // Row-major [theta][phi]. Amplitudes are the aperture integral in m^2.
    std::vector<cplx> co;
    std::vector<cplx> cross;
    std::vector<double> sigma_m2;

    std::size_t index(std::size_t t, std::size_t p) const { return t * phi_deg.size() + p; }
    double sigma_dbsm(std::size_t t, std::size_t p) const;
};

/// Physical-optics far field of the aperture with direction cosines
/// u = sin(theta) cos(phi), v = sin(theta) sin(phi); sigma = 4 pi / lambda^2 * |F|^2
/// summed over both polarizations.
FarFieldPattern far_field(const ApertureField& ap, const std::vector<double>& theta_deg,
                          const std::vector<double>& phi_deg,
                          FarFieldMethod method = FarFieldMethod::Fast);

std::vector<double> default_theta_grid();
std::vector<double> default_phi_grid();
std::vector<double> uniform_grid(double start, double stop, double step);

/// Converts an RCS in m^2 to dBsm, clamped at kDbsmFloor.
double to_dbsm(double sigma_m2);

/// Broadside RCS of a flat PEC plate, 4 pi A^2 / lambda^2, in dBsm (unclamped).
double pec_plate_rcs(Length width, Length height, Frequency f);

struct ReductionPoint {
    Frequency f;
    double sigma_layout_dbsm = 0.0;
    double sigma_pec_dbsm = 0.0;
    double delta_db = 0.0;
};

/// Broadside RCS of the layout minus that of a PEC plate of the same extent,
/// at n_freq evenly spaced points across [f_lo, f_hi]. Negative means reduction.
std::vector<ReductionPoint> monostatic_reduction(const geometry::ApertureLayout& layout,
                                                 const jones::ReflectionSpectrum& unit_spectrum,
                                                 const jones::ReflectionSpectrum& mirror_spectrum,
                                                 Frequency f_lo, Frequency f_hi,
                                                 std::size_t n_freq,
                                                 jones::Polarization incident =
                                                     jones::Polarization::Y);

struct Direction {
    double theta_deg = 0.0;
    double phi_deg = 0.0;
};

/// First-order checkerboard lobes for a tile pitch d; empty when lambda > sqrt(2) d.
std::vector<Direction> predict_lobes(Length tile_pitch, Frequency f);

/// Great-circle angle between two directions, degrees.
double angular_separation_deg(const Direction& a, const Direction& b);

struct Peak {
    double theta_deg = 0.0;
    double phi_deg = 0.0;
    double sigma_dbsm = 0.0;
};

/// Local maxima of the pattern within `min_prominence_db` of the strongest
/// direction, sorted by sigma descending (ties: smaller theta, then smaller phi).
std::vector<Peak> find_peaks(const FarFieldPattern& pattern, double min_prominence_db);

}  // namespace pcm::scatter

#endif  // PCM_SCATTER_HPP
