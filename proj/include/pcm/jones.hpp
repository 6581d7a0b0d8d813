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

#ifndef PCM_JONES_HPP
#define PCM_JONES_HPP

#include <array>
#include <complex>
#include <string>
#include <vector>

#include "pcm/geometry.hpp"
#include "pcm/units.hpp"

namespace pcm::jones {

using cplx = std::complex<double>;

enum class Basis { XY, UV };
enum class Polarization { X, Y };

std::string to_string(Basis basis);
std::string to_string(Polarization pol);

/// 2x2 reflection matrix. Columns index the incident polarization and rows
/// the reflected one, so r_xy is the x-polarized reflection of a y-polarized
/// incident field.
struct Jones2 {
    std::array<cplx, 4> r{};  // row-major: xx, xy, yx, yy
    Basis basis = Basis::XY;

    cplx xx() const { return r[0]; }
    cplx xy() const { return r[1]; }
    cplx yx() const { return r[2]; }
    cplx yy() const { return r[3]; }

    static Jones2 make(cplx xx, cplx xy, cplx yx, cplx yy, Basis basis) {
        return Jones2{{xx, xy, yx, yy}, basis};
    }
    static Jones2 diag(cplx a, cplx b, Basis basis) { return make(a, 0.0, 0.0, b, basis); }

    /// Reflected field vector for an incident field vector (e_x, e_y).
    std::array<cplx, 2> apply(cplx ex, cplx ey) const {
        return {r[0] * ex + r[1] * ey, r[2] * ex + r[3] * ey};
    }

    bool operator==(const Jones2&) const = default;
};

/// Polarization conversion ratio |r_cross|^2 / (|r_cross|^2 + |r_co|^2).
double pcr(const Jones2& j, Polarization incident);

/// Change of basis between the ellipse axes (u, v) and the cell axes (x, y);
/// u lies at theta_deg from +x. A UV matrix comes back in XY and vice versa.
Jones2 rotate_basis(const Jones2& j, double theta_deg);

/// Reflection about the x axis: M R M with M = diag(1, -1).
Jones2 mirror_transform(const Jones2& j);

/// Phase in degrees on (-180, 180].
double phase_deg(cplx z);

struct SlabReflection {
    cplx r;
    bool singular = false;  // beta*h sits on an odd multiple of pi/2
};

/// Normal-incidence reflection of a grounded dielectric slab referenced to
/// its top surface, e^{+j omega t} convention.
SlabReflection grounded_slab_reflection(const geometry::StackUp& stack, Frequency f);

/// Input impedance of the shorted slab, j eta_d tan(beta h). Infinite at
/// quarter-wave resonance.
cplx slab_input_impedance(const geometry::StackUp& stack, Frequency f);

/// Impedance of a series L-C sheet, j(omega L - 1/(omega C)).
cplx series_lc_impedance(double inductance, double capacitance, Frequency f);

/// Impedance sentinel for an open sheet (no metal along that axis).
cplx open_sheet();

/// Anisotropic impedance sheet over a grounded slab, one transmission line
/// per ellipse axis. Returns diag(r_u, r_v) in the UV basis.
Jones2 tl_converter_model(const geometry::StackUp& stack, cplx z_u, cplx z_v, Frequency f);

struct SpectrumSample {
    Frequency f;
    Jones2 j;

    bool operator==(const SpectrumSample&) const = default;
};

class ReflectionSpectrum {
public:
    ReflectionSpectrum(std::vector<SpectrumSample> samples, Basis basis,
                       std::string reference_plane);

    const std::vector<SpectrumSample>& samples() const { return samples_; }
    Basis basis() const { return basis_; }
    const std::string& reference_plane() const { return reference_plane_; }
    std::size_t size() const { return samples_.size(); }
    Frequency f_min() const { return samples_.front().f; }
    Frequency f_max() const { return samples_.back().f; }
    bool covers(Frequency f) const { return f >= f_min() && f <= f_max(); }

    /// Linear interpolation of real and imaginary parts; BAND_ERROR outside range.
    Jones2 at(Frequency f) const;

    ReflectionSpectrum mirrored() const;

    bool operator==(const ReflectionSpectrum&) const = default;

private:
    std::vector<SpectrumSample> samples_;
    Basis basis_;
    std::string reference_plane_;
};

}  // namespace pcm::jones

#endif  // PCM_JONES_HPP
