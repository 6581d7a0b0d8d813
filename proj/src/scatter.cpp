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

#include "pcm/scatter.hpp"

#include <algorithm>
#include <cmath>
#include <array>
#include <limits>
#include <numeric>

#include "pcm/error.hpp"

namespace pcm::scatter {

using geometry::TileKind;

ApertureField::ApertureField(Length pitch, std::size_t nx, std::size_t ny, std::size_t block,
                             Frequency f, jones::Polarization incident)
    : pitch_(pitch),
      nx_(nx),
      ny_(ny),
      block_(block),
      f_(f),
      incident_(incident),
      co_(nx * ny),
      cross_(nx * ny) {
    if (nx == 0 || ny == 0) throw Error(ErrorCode::InvalidArgument, "empty aperture");
    if (block == 0 || nx % block != 0 || ny % block != 0) {
        throw Error(ErrorCode::InvalidArgument, "block size must divide the sample grid");
    }
    if (!(pitch.metres > 0.0) || !(f.hertz > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "pitch and frequency must be positive");
    }
}

ApertureField ApertureField::operator+(const ApertureField& other) const {
    if (nx_ != other.nx_ || ny_ != other.ny_ || pitch_ != other.pitch_ || f_ != other.f_) {
        throw Error(ErrorCode::InvalidArgument, "aperture fields are sampled differently");
    }
    ApertureField out(pitch_, nx_, ny_, std::gcd(block_, other.block_), f_, incident_);
    for (std::size_t k = 0; k < co_.size(); ++k) {
        out.co_[k] = co_[k] + other.co_[k];
        out.cross_[k] = cross_[k] + other.cross_[k];
    }
    return out;
}

ApertureField ApertureField::co_only() const {
    ApertureField out = *this;
    std::fill(out.cross_.begin(), out.cross_.end(), cplx{});
    return out;
}

ApertureField ApertureField::cross_only() const {
    ApertureField out = *this;
    std::fill(out.co_.begin(), out.co_.end(), cplx{});
    return out;
}

std::size_t samples_per_cell_for(Length cell_period, Frequency f) {
    const double quarter = f.wavelength().metres / 4.0;
    return static_cast<std::size_t>(std::max(1.0, std::ceil(cell_period.metres / quarter - 1e-12)));
}

ApertureField paint_aperture(const geometry::ApertureLayout& layout,
                             const jones::ReflectionSpectrum& unit_spectrum,
                             const jones::ReflectionSpectrum& mirror_spectrum, Frequency f,
                             jones::Polarization incident, std::size_t samples_per_cell) {
    if (unit_spectrum.basis() != jones::Basis::XY || mirror_spectrum.basis() != jones::Basis::XY) {
        throw Error(ErrorCode::BasisError, "aperture painting needs XY spectra");
    }
    // at() raises BAND_ERROR outside either spectrum.
    const jones::Jones2 unit = unit_spectrum.at(f);
    const jones::Jones2 mirror = mirror_spectrum.at(f);
    const std::size_t s =
        samples_per_cell == 0 ? samples_per_cell_for(layout.cell_period(), f) : samples_per_cell;
    const std::size_t cpt = layout.cells_per_tile();
    const std::size_t per_tile = cpt * s;

    const bool y_in = incident == jones::Polarization::Y;
    const auto reflect = [&](const jones::Jones2& j) {
        const auto out = y_in ? j.apply(0.0, 1.0) : j.apply(1.0, 0.0);
        // {co, cross}
        return y_in ? std::pair{out[1], out[0]} : std::pair{out[0], out[1]};
    };
    const auto [unit_co, unit_cross] = reflect(unit);
    const auto [mirror_co, mirror_cross] = reflect(mirror);

    ApertureField ap(layout.cell_period() / static_cast<double>(s), layout.tiles_x() * per_tile,
                     layout.tiles_y() * per_tile, s, f, incident);
    for (std::size_t ti = 0; ti < layout.tiles_x(); ++ti) {
        for (std::size_t tj = 0; tj < layout.tiles_y(); ++tj) {
            cplx co{}, cross{};
            switch (layout.at(ti, tj)) {
                case TileKind::Unit: co = unit_co; cross = unit_cross; break;
                case TileKind::Mirror: co = mirror_co; cross = mirror_cross; break;
                case TileKind::Pec: co = -1.0; break;
                case TileKind::Absent: break;
            }
            for (std::size_t a = 0; a < per_tile; ++a) {
                for (std::size_t b = 0; b < per_tile; ++b) {
                    ap.co(ti * per_tile + a, tj * per_tile + b) = co;
                    ap.cross(ti * per_tile + a, tj * per_tile + b) = cross;
                }
            }
        }
    }
    return ap;
}

jones::ReflectionSpectrum constant_spectrum(const jones::Jones2& j, Frequency f_lo, Frequency f_hi) {
    return jones::ReflectionSpectrum({{f_lo, j}, {f_hi, j}}, j.basis, "ideal");
}

double FarFieldPattern::sigma_dbsm(std::size_t t, std::size_t p) const {
    return to_dbsm(sigma_m2[index(t, p)]);
}

namespace {

// sum_{m=0}^{n-1} e^{j alpha m}
cplx dirichlet(double alpha, std::size_t n) {
    if (n == 1) return 1.0;
    const double half = 0.5 * alpha;
    const double den = std::sin(half);
    if (den == 0.0) return static_cast<double>(n);
    const double nn = static_cast<double>(n);
    return std::polar(std::sin(nn * half) / den, half * (nn - 1.0));
}

struct Amplitudes {
    cplx co;
    cplx cross;
};

Amplitudes direct_sum(const ApertureField& ap, double u, double v) {
    const double k = ap.frequency().wavenumber();
    const double p = ap.pitch().metres;
    const double x0 = (0.5 - 0.5 * static_cast<double>(ap.nx())) * p;
    const double y0 = (0.5 - 0.5 * static_cast<double>(ap.ny())) * p;
    cplx co{}, cross{};
    for (std::size_t i = 0; i < ap.nx(); ++i) {
        const double x = x0 + static_cast<double>(i) * p;
        for (std::size_t j = 0; j < ap.ny(); ++j) {
            const double y = y0 + static_cast<double>(j) * p;
            const cplx w = std::polar(1.0, k * (u * x + v * y));
            co += ap.co(i, j) * w;
            cross += ap.cross(i, j) * w;
        }
    }
    const double area = p * p;
    return {co * area, cross * area};
}

// Blocks of identical samples factor into (block element factor) x (array
// factor over blocks); the array factor is evaluated with nested Horner sums.
class BlockTransform {
public:
    explicit BlockTransform(const ApertureField& ap)
        : ap_(ap), b_(ap.block()), mx_(ap.nx() / b_), my_(ap.ny() / b_) {
        co_.resize(mx_ * my_);
        cross_.resize(mx_ * my_);
        for (std::size_t I = 0; I < mx_; ++I) {
            for (std::size_t J = 0; J < my_; ++J) {
                co_[I * my_ + J] = ap.co(I * b_, J * b_);
                cross_[I * my_ + J] = ap.cross(I * b_, J * b_);
            }
        }
        row_co_.resize(mx_);
        row_cross_.resize(mx_);
    }

    Amplitudes operator()(double u, double v) {
        const double k = ap_.frequency().wavenumber();
        const double p = ap_.pitch().metres;
        const double bp = static_cast<double>(b_) * p;
        const cplx zx = std::polar(1.0, k * u * bp);
        const cplx zy = std::polar(1.0, k * v * bp);
        for (std::size_t I = 0; I < mx_; ++I) {
            cplx a{}, c{};
            const cplx* rco = &co_[I * my_];
            const cplx* rcr = &cross_[I * my_];
            for (std::size_t J = my_; J-- > 0;) {
                a = a * zy + rco[J];
                c = c * zy + rcr[J];
            }
            row_co_[I] = a;
            row_cross_[I] = c;
        }
        cplx co{}, cross{};
        for (std::size_t I = mx_; I-- > 0;) {
            co = co * zx + row_co_[I];
            cross = cross * zx + row_cross_[I];
        }
        const double x0 = (0.5 - 0.5 * static_cast<double>(ap_.nx())) * p;
        const double y0 = (0.5 - 0.5 * static_cast<double>(ap_.ny())) * p;
        const cplx element = std::polar(p * p, k * (u * x0 + v * y0)) *
                             dirichlet(k * u * p, b_) * dirichlet(k * v * p, b_);
        return {co * element, cross * element};
    }

private:
    const ApertureField& ap_;
    std::size_t b_;
    std::size_t mx_;
    std::size_t my_;
    std::vector<cplx> co_, cross_, row_co_, row_cross_;
};

}  // namespace

FarFieldPattern far_field(const ApertureField& ap, const std::vector<double>& theta_deg,
                          const std::vector<double>& phi_deg, FarFieldMethod method) {
    const Length lambda = ap.frequency().wavelength();
    if (ap.pitch().metres > lambda.metres / 4.0 * (1.0 + 1e-12)) {
        throw Error(ErrorCode::SamplingError, "sample pitch " + std::to_string(ap.pitch().in_mm()) +
                                                  " mm exceeds lambda/4 = " +
                                                  std::to_string(lambda.in_mm() / 4.0) + " mm");
    }
    FarFieldPattern pat;
    pat.theta_deg = theta_deg;
    pat.phi_deg = phi_deg;
    pat.f = ap.frequency();
    const std::size_t n = theta_deg.size() * phi_deg.size();
    pat.co.resize(n);
    pat.cross.resize(n);
    pat.sigma_m2.resize(n);

    BlockTransform fast(ap);
    const double scale = 4.0 * kPi / (lambda.metres * lambda.metres);
    for (std::size_t t = 0; t < theta_deg.size(); ++t) {
        const double st = std::sin(theta_deg[t] * kPi / 180.0);
        for (std::size_t p = 0; p < phi_deg.size(); ++p) {
            const auto [cp, sp] = cos_sin_deg(phi_deg[p]);
            const double u = st * cp;
            const double v = st * sp;
            const Amplitudes a = method == FarFieldMethod::Fast ? fast(u, v) : direct_sum(ap, u, v);
            const std::size_t idx = pat.index(t, p);
            pat.co[idx] = a.co;
            pat.cross[idx] = a.cross;
            pat.sigma_m2[idx] = scale * (std::norm(a.co) + std::norm(a.cross));
        }
    }
    return pat;
}

std::vector<double> uniform_grid(double start, double stop, double step) {
    std::vector<double> out;
    const auto n = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(start + static_cast<double>(i) * step);
    return out;
}

std::vector<double> default_theta_grid() { return uniform_grid(0.0, 89.0, 0.5); }
std::vector<double> default_phi_grid() { return uniform_grid(0.0, 359.5, 0.5); }

double to_dbsm(double sigma_m2) {
    if (!(sigma_m2 > 0.0)) return kDbsmFloor;
    return std::max(kDbsmFloor, 10.0 * std::log10(sigma_m2));
}

double pec_plate_rcs(Length width, Length height, Frequency f) {
    if (!(f.hertz > 0.0) || width.metres < 0.0 || height.metres < 0.0) {
        throw Error(ErrorCode::InvalidArgument, "plate dimensions and frequency must be positive");
    }
    const double area = width.metres * height.metres;
    const double lambda = f.wavelength().metres;
    const double sigma = 4.0 * kPi * area * area / (lambda * lambda);
    if (sigma == 0.0) return -std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(sigma);
}

std::vector<ReductionPoint> monostatic_reduction(const geometry::ApertureLayout& layout,
                                                 const jones::ReflectionSpectrum& unit_spectrum,
                                                 const jones::ReflectionSpectrum& mirror_spectrum,
                                                 Frequency f_lo, Frequency f_hi,
                                                 std::size_t n_freq, jones::Polarization incident) {
    if (n_freq == 0 || f_hi < f_lo) {
        throw Error(ErrorCode::InvalidArgument, "reduction sweep needs f_lo <= f_hi and n_freq >= 1");
    }
    for (const auto f : {f_lo, f_hi}) {
        if (!unit_spectrum.covers(f) || !mirror_spectrum.covers(f)) {
            throw Error(ErrorCode::BandError, std::to_string(f.in_ghz()) +
                                                  " GHz lies outside the spectrum coverage");
        }
    }
    std::vector<ReductionPoint> out;
    out.reserve(n_freq);
    for (std::size_t i = 0; i < n_freq; ++i) {
        const double t = n_freq == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(n_freq - 1);
        const Frequency f =
            i + 1 == n_freq ? f_hi : Frequency::hz(f_lo.hertz + t * (f_hi.hertz - f_lo.hertz));
        const auto ap = paint_aperture(layout, unit_spectrum, mirror_spectrum, f, incident);
        const auto pat = far_field(ap, {0.0}, {0.0});
        ReductionPoint pt;
        pt.f = f;
        pt.sigma_layout_dbsm = to_dbsm(pat.sigma_m2[0]);
        pt.sigma_pec_dbsm = pec_plate_rcs(layout.width(), layout.height(), f);
        pt.delta_db = pt.sigma_layout_dbsm - pt.sigma_pec_dbsm;
        out.push_back(pt);
    }
    return out;
}

std::vector<Direction> predict_lobes(Length tile_pitch, Frequency f) {
    if (!(tile_pitch.metres > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "tile pitch must be positive");
    }
    const double s = f.wavelength().metres / (std::sqrt(2.0) * tile_pitch.metres);
    if (s > 1.0) return {};
    const double theta = std::asin(s) * 180.0 / kPi;
    return {{theta, 45.0}, {theta, 135.0}, {theta, 225.0}, {theta, 315.0}};
}

double angular_separation_deg(const Direction& a, const Direction& b) {
    const auto unit = [](const Direction& d) {
        const double t = d.theta_deg * kPi / 180.0;
        const auto [cp, sp] = cos_sin_deg(d.phi_deg);
        return std::array<double, 3>{std::sin(t) * cp, std::sin(t) * sp, std::cos(t)};
    };
    const auto ua = unit(a);
    const auto ub = unit(b);
    const double c = std::clamp(ua[0] * ub[0] + ua[1] * ub[1] + ua[2] * ub[2], -1.0, 1.0);
    // atan2 form keeps precision for nearly parallel directions.
    const std::array<double, 3> x = {ua[1] * ub[2] - ua[2] * ub[1], ua[2] * ub[0] - ua[0] * ub[2],
                                     ua[0] * ub[1] - ua[1] * ub[0]};
    const double s = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
    return std::atan2(s, c) * 180.0 / kPi;
}

std::vector<Peak> find_peaks(const FarFieldPattern& pattern, double min_prominence_db) {
    const std::size_t nt = pattern.theta_deg.size();
    const std::size_t np = pattern.phi_deg.size();
    if (nt == 0 || np == 0) return {};
    const bool pole = pattern.theta_deg.front() == 0.0;
    bool wrap = false;
    if (np > 1) {
        const double step = pattern.phi_deg[1] - pattern.phi_deg[0];
        wrap = std::abs(pattern.phi_deg.back() + step - pattern.phi_deg.front() - 360.0) < 1e-6;
    }

    const auto value = [&](std::size_t t, std::size_t p) {
        return pattern.sigma_dbsm(t, pole && t == 0 ? 0 : p);
    };
    // Tie-break on flat tops: the node that comes first in (theta, phi) order wins.
    const auto beats = [&](std::size_t t, std::size_t p, std::size_t t2, std::size_t p2) {
        const double a = value(t, p);
        const double b = value(t2, p2);
        if (a != b) return a > b;
        return std::pair{t, p} < std::pair{t2, p2};
    };

    std::vector<Peak> peaks;
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < nt; ++t) {
        for (std::size_t p = 0; p < np; ++p) best = std::max(best, value(t, p));
    }

    for (std::size_t t = 0; t < nt; ++t) {
        const std::size_t p_end = pole && t == 0 ? 1 : np;
        for (std::size_t p = 0; p < p_end; ++p) {
            bool is_peak = true;
            if (pole && t == 0) {
                for (std::size_t q = 0; q < np && nt > 1 && is_peak; ++q) {
                    is_peak = beats(0, 0, 1, q);
                }
            } else {
                for (int dt = -1; dt <= 1 && is_peak; ++dt) {
                    if ((dt < 0 && t == 0) || (dt > 0 && t + 1 == nt)) continue;
                    const std::size_t t2 = t + static_cast<std::size_t>(dt + 1) - 1;
                    for (int dp = -1; dp <= 1 && is_peak; ++dp) {
                        if (dt == 0 && dp == 0) continue;
                        std::size_t p2;
                        if (dp < 0) {
                            if (p == 0 && !wrap) continue;
                            p2 = p == 0 ? np - 1 : p - 1;
                        } else if (dp > 0) {
                            if (p + 1 == np && !wrap) continue;
                            p2 = p + 1 == np ? 0 : p + 1;
                        } else {
                            p2 = p;
                        }
                        const std::size_t p2n = pole && t2 == 0 ? 0 : p2;
                        if (t2 == t && p2n == p) continue;
                        is_peak = beats(t, p, t2, p2n);
                    }
                }
            }
            const double v = value(t, p);
            if (is_peak && v >= best - min_prominence_db) {
                peaks.push_back({pattern.theta_deg[t], pattern.phi_deg[p], v});
            }
        }
    }
    std::sort(peaks.begin(), peaks.end(), [](const Peak& a, const Peak& b) {
        if (a.sigma_dbsm != b.sigma_dbsm) return a.sigma_dbsm > b.sigma_dbsm;
        if (a.theta_deg != b.theta_deg) return a.theta_deg < b.theta_deg;
        return a.phi_deg < b.phi_deg;
    });
    return peaks;
}

}  // namespace pcm::scatter
