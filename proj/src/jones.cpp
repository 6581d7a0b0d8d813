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

#include "pcm/jones.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pcm/error.hpp"

namespace pcm::jones {

std::string to_string(Basis basis) { return basis == Basis::XY ? "XY" : "UV"; }
std::string to_string(Polarization pol) { return pol == Polarization::X ? "X" : "Y"; }

double pcr(const Jones2& j, Polarization incident) {
    if (j.basis != Basis::XY) throw Error(ErrorCode::BasisError, "PCR needs an XY matrix");
    const cplx cross = incident == Polarization::Y ? j.xy() : j.yx();
    const cplx co = incident == Polarization::Y ? j.yy() : j.xx();
    const double pc = std::norm(cross);
    const double pp = std::norm(co);
    if (pc + pp == 0.0) {
        throw Error(ErrorCode::Degenerate, "co- and cross-polarized reflections are both zero");
    }
    return pc / (pc + pp);
}

Jones2 rotate_basis(const Jones2& j, double theta_deg) {
    // Q R Q^T written with double angles so multiples of 45 deg stay exact.
    // Q maps UV components to XY; the reverse direction rotates by -theta.
    const double sign = j.basis == Basis::UV ? 1.0 : -1.0;
    const auto [c2, s2] = cos_sin_deg(2.0 * theta_deg);
    const Basis target = j.basis == Basis::UV ? Basis::XY : Basis::UV;
    if (s2 == 0.0 && c2 == 1.0) return Jones2{j.r, target};
    if (s2 == 0.0 && c2 == -1.0) return Jones2::make(j.yy(), -j.yx(), -j.xy(), j.xx(), target);
    const double s2d = sign * s2;
    const cplx sum = 0.5 * (j.xx() + j.yy());
    const cplx diff = 0.5 * (j.xx() - j.yy());
    const cplx off_sum = 0.5 * (j.xy() + j.yx());
    const cplx off_diff = 0.5 * (j.xy() - j.yx());
    Jones2 out;
    out.r[0] = sum + diff * c2 - off_sum * s2d;
    out.r[1] = diff * s2d + off_sum * c2 + off_diff;
    out.r[2] = diff * s2d + off_sum * c2 - off_diff;
    out.r[3] = sum - diff * c2 + off_sum * s2d;
    out.basis = target;
    return out;
}

Jones2 mirror_transform(const Jones2& j) {
    if (j.basis != Basis::XY) throw Error(ErrorCode::BasisError, "mirror transform needs XY");
    return Jones2::make(j.xx(), -j.xy(), -j.yx(), j.yy(), Basis::XY);
}

double phase_deg(cplx z) {
    double p = std::arg(z) * 180.0 / kPi;
    if (p <= -180.0) p += 360.0;
    return p;
}

namespace {

bool is_infinite(cplx z) { return std::isinf(z.real()) || std::isinf(z.imag()); }

// Complex permittivity eps_r (1 - j tan_delta) for the e^{+j omega t} convention.
cplx complex_eps(const geometry::Material& m) { return m.eps_r * cplx(1.0, -m.tan_delta); }

// Admittance of the shorted slab seen from its top surface, -j cot(beta h) / eta_d.
// Finite at quarter wave (zero) and infinite for h -> 0.
cplx slab_admittance(const geometry::StackUp& stack, Frequency f) {
    const cplx eps = complex_eps(stack.substrate);
    const cplx n = std::sqrt(eps);
    const cplx eta_d = kEta0 / n;
    const cplx beta_h = f.wavenumber() * n * stack.thickness.metres;
    const cplx t = std::tan(beta_h);
    if (t == 0.0) return {std::numeric_limits<double>::infinity(), 0.0};
    return 1.0 / (cplx(0.0, 1.0) * eta_d * t);
}

cplx reflection_from_admittance(cplx y) {
    if (is_infinite(y)) return -1.0;
    const cplx yn = y * kEta0;
    return (1.0 - yn) / (1.0 + yn);
}

cplx sheet_admittance(cplx z) {
    if (is_infinite(z)) return 0.0;
    if (z == 0.0) return {std::numeric_limits<double>::infinity(), 0.0};
    return 1.0 / z;
}

}  // namespace

cplx slab_input_impedance(const geometry::StackUp& stack, Frequency f) {
    const cplx n = std::sqrt(complex_eps(stack.substrate));
    return cplx(0.0, 1.0) * (kEta0 / n) * std::tan(f.wavenumber() * n * stack.thickness.metres);
}

SlabReflection grounded_slab_reflection(const geometry::StackUp& stack, Frequency f) {
    if (!(f.hertz > 0.0)) throw Error(ErrorCode::InvalidArgument, "frequency must be positive");
    if (stack.thickness.metres == 0.0) return {-1.0, false};
    const double beta_h =
        f.wavenumber() * std::sqrt(stack.substrate.eps_r) * stack.thickness.metres;
    const double odd = beta_h / (kPi / 2.0);
    const bool singular = std::abs(std::cos(beta_h)) < 1e-12 && std::nearbyint(odd) != 0.0;
    return {reflection_from_admittance(slab_admittance(stack, f)), singular};
}

cplx series_lc_impedance(double inductance, double capacitance, Frequency f) {
    const double w = f.angular();
    return {0.0, w * inductance - 1.0 / (w * capacitance)};
}

cplx open_sheet() { return {0.0, std::numeric_limits<double>::infinity()}; }

Jones2 tl_converter_model(const geometry::StackUp& stack, cplx z_u, cplx z_v, Frequency f) {
    const cplx y_slab = stack.thickness.metres == 0.0
                            ? cplx(std::numeric_limits<double>::infinity(), 0.0)
                            : slab_admittance(stack, f);
    const auto axis = [&](cplx z) {
        const cplx ys = sheet_admittance(z);
        if (is_infinite(ys) || is_infinite(y_slab)) return cplx(-1.0);
        return reflection_from_admittance(ys + y_slab);
    };
    return Jones2::diag(axis(z_u), axis(z_v), Basis::UV);
}

ReflectionSpectrum::ReflectionSpectrum(std::vector<SpectrumSample> samples, Basis basis,
                                       std::string reference_plane)
    : samples_(std::move(samples)), basis_(basis), reference_plane_(std::move(reference_plane)) {
    if (samples_.empty()) throw Error(ErrorCode::InvalidArgument, "empty spectrum");
    for (std::size_t i = 0; i < samples_.size(); ++i) {
        if (samples_[i].j.basis != basis_) {
            throw Error(ErrorCode::BasisError, "spectrum samples must share one basis");
        }
        if (i > 0 && !(samples_[i].f > samples_[i - 1].f)) {
            throw Error(ErrorCode::InvalidArgument, "spectrum frequencies must strictly increase");
        }
    }
}

Jones2 ReflectionSpectrum::at(Frequency f) const {
    if (!covers(f)) {
        throw Error(ErrorCode::BandError, std::to_string(f.in_ghz()) +
                                              " GHz lies outside the spectrum [" +
                                              std::to_string(f_min().in_ghz()) + ", " +
                                              std::to_string(f_max().in_ghz()) + "] GHz");
    }
    auto it = std::lower_bound(samples_.begin(), samples_.end(), f,
                               [](const SpectrumSample& s, Frequency v) { return s.f < v; });
    if (it->f == f) return it->j;
    const auto& hi = *it;
    const auto& lo = *(it - 1);
    const double t = (f.hertz - lo.f.hertz) / (hi.f.hertz - lo.f.hertz);
    Jones2 out;
    out.basis = basis_;
    for (std::size_t k = 0; k < 4; ++k) {
        const cplx a = lo.j.r[k];
        const cplx b = hi.j.r[k];
        out.r[k] = {a.real() + t * (b.real() - a.real()), a.imag() + t * (b.imag() - a.imag())};
    }
    return out;
}

ReflectionSpectrum ReflectionSpectrum::mirrored() const {
    std::vector<SpectrumSample> out;
    out.reserve(samples_.size());
    for (const auto& s : samples_) out.push_back({s.f, mirror_transform(s.j)});
    return ReflectionSpectrum(std::move(out), basis_, reference_plane_);
}

}  // namespace pcm::jones
