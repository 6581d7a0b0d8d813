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

#include "yee_grid.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "pcm/error.hpp"

namespace pcm::solver::detail {

namespace {

constexpr int kGradingOrder = 3;
constexpr std::size_t kAuxPmlCells = 120;

// CPML update coefficients at normalized depth rho in [0, 1] (kappa = 1).
struct CpmlCoef {
    double b = 1.0;
    double a = 0.0;
};

CpmlCoef cpml_coef(double rho, double dx, double dt, double alpha_max) {
    if (rho <= 0.0) return {};
    rho = std::min(rho, 1.0);
    const double sigma_max = 0.8 * (kGradingOrder + 1) / (kEta0 * dx);
    const double sigma = sigma_max * std::pow(rho, kGradingOrder);
    const double alpha = alpha_max * (1.0 - rho);
    const double b = std::exp(-(sigma + alpha) * dt / kEps0);
    const double a = sigma / (sigma + alpha) * (b - 1.0);
    return {b, a};
}

// Free-space 1-D Yee line carrying the incident plane wave. With the same dx
// and dt it reproduces the 3-D grid's normal-incidence dispersion exactly, so
// the TF/SF boundary leaks nothing.
class IncidentLine {
public:
    IncidentLine(double dx, double dt, double alpha_max, const Pulse& pulse)
        : pulse_(pulse), dt_(dt), ch_(dt / (kMu0 * dx)), ce_(dt / (kEps0 * dx)) {
        n_ = 2 * kAuxPmlCells + 30;
        boundary_ = kAuxPmlCells + 10;
        source_ = boundary_ + 10;
        const std::size_t top = source_ + 10;
        e_.assign(n_ + 1, 0.0);
        h_.assign(n_, 0.0);
        psi_e_.assign(n_ + 1, 0.0);
        psi_h_.assign(n_, 0.0);
        ce_b_.resize(n_ + 1);
        ce_a_.resize(n_ + 1);
        ch_b_.resize(n_);
        ch_a_.resize(n_);
        const double np = static_cast<double>(kAuxPmlCells);
        const auto depth = [&](double z) {
            if (z < np) return (np - z) / np;
            if (z > static_cast<double>(top)) return (z - static_cast<double>(top)) / np;
            return 0.0;
        };
        for (std::size_t a = 0; a <= n_; ++a) {
            const auto c = cpml_coef(depth(static_cast<double>(a)), dx, dt, alpha_max);
            ce_b_[a] = c.b;
            ce_a_[a] = c.a;
        }
        for (std::size_t a = 0; a < n_; ++a) {
            const auto c = cpml_coef(depth(static_cast<double>(a) + 0.5), dx, dt, alpha_max);
            ch_b_[a] = c.b;
            ch_a_[a] = c.a;
        }
    }

    // Incident E at the boundary plane (time n) and H just above it (time n + 1/2).
    double e_boundary() const { return e_[boundary_]; }
    double h_boundary() const { return h_[boundary_]; }

    void update_h() {
        for (std::size_t a = 0; a < n_; ++a) {
            const double de = e_[a + 1] - e_[a];
            psi_h_[a] = ch_b_[a] * psi_h_[a] + ch_a_[a] * de;
            h_[a] -= ch_ * (de + psi_h_[a]);
        }
    }

    void update_e(std::size_t step) {
        for (std::size_t a = 1; a < n_; ++a) {
            const double dh = h_[a] - h_[a - 1];
            psi_e_[a] = ce_b_[a] * psi_e_[a] + ce_a_[a] * dh;
            e_[a] -= ce_ * (dh + psi_e_[a]);
        }
        e_[source_] += pulse_.value(static_cast<double>(step + 1) * dt_);
    }

private:
    Pulse pulse_;
    double dt_;
    double ch_;
    double ce_;
    std::size_t n_ = 0;
    std::size_t boundary_ = 0;
    std::size_t source_ = 0;
    std::vector<double> e_, h_, psi_e_, psi_h_;
    std::vector<double> ce_b_, ce_a_, ch_b_, ch_a_;
};

class YeeGrid {
public:
    YeeGrid(const GridSpec& spec) : s_(spec), nzp_(spec.nz + 1) {
        const std::size_t cells = s_.nx * s_.ny * nzp_;
        ex_.assign(cells, 0.0);
        ey_.assign(cells, 0.0);
        ez_.assign(cells, 0.0);
        hx_.assign(cells, 0.0);
        hy_.assign(cells, 0.0);
        hz_.assign(cells, 0.0);

        ch_ = s_.dt / (kMu0 * s_.dx);
        ca_t_.resize(nzp_);
        cb_t_.resize(nzp_);
        ca_z_.resize(nzp_);
        cb_z_.resize(nzp_);
        eps_t_.resize(nzp_);
        eps_z_.resize(nzp_);
        for (std::size_t k = 0; k < nzp_; ++k) {
            double eps = 1.0;
            double sig = 0.0;
            if (k < s_.ks) {
                eps = s_.eps_r;
                sig = s_.sigma;
            } else if (k == s_.ks) {
                // Interface edges see the average of substrate and air.
                eps = 0.5 * (s_.eps_r + 1.0);
                sig = 0.5 * s_.sigma;
            }
            eps_t_[k] = eps;
            std::tie(ca_t_[k], cb_t_[k]) = coefficients(eps, sig);
            const double eps_z = k < s_.ks ? s_.eps_r : 1.0;
            const double sig_z = k < s_.ks ? s_.sigma : 0.0;
            eps_z_[k] = eps_z;
            std::tie(ca_z_[k], cb_z_[k]) = coefficients(eps_z, sig_z);
        }

        npml_ = s_.nz - s_.kp;
        const double np = static_cast<double>(npml_);
        pe_b_.resize(npml_ + 1);
        pe_a_.resize(npml_ + 1);
        ph_b_.resize(npml_);
        ph_a_.resize(npml_);
        for (std::size_t q = 0; q <= npml_; ++q) {
            const auto c = cpml_coef(static_cast<double>(q) / np, s_.dx, s_.dt, s_.alpha_max);
            pe_b_[q] = c.b;
            pe_a_[q] = c.a;
        }
        for (std::size_t q = 0; q < npml_; ++q) {
            const auto c =
                cpml_coef((static_cast<double>(q) + 0.5) / np, s_.dx, s_.dt, s_.alpha_max);
            ph_b_[q] = c.b;
            ph_a_[q] = c.a;
        }
        const std::size_t lateral = s_.nx * s_.ny;
        psi_exz_.assign(lateral * (npml_ + 1), 0.0);
        psi_eyz_.assign(lateral * (npml_ + 1), 0.0);
        psi_hxz_.assign(lateral * npml_, 0.0);
        psi_hyz_.assign(lateral * npml_, 0.0);
    }

    void update_h(double ex_inc, double ey_inc) {
        const std::size_t nx = s_.nx, ny = s_.ny, nz = s_.nz;
        for (std::size_t i = 0; i < nx; ++i) {
            const std::size_t ip = i + 1 == nx ? 0 : i + 1;
            for (std::size_t j = 0; j < ny; ++j) {
                const std::size_t jp = j + 1 == ny ? 0 : j + 1;
                const std::size_t b = idx(i, j);
                const std::size_t bip = idx(ip, j);
                const std::size_t bjp = idx(i, jp);
                double* hx = &hx_[b];
                double* hy = &hy_[b];
                double* hz = &hz_[b];
                const double* ex = &ex_[b];
                const double* ey = &ey_[b];
                const double* ez = &ez_[b];
                const double* ex_jp = &ex_[bjp];
                const double* ey_ip = &ey_[bip];
                const double* ez_ip = &ez_[bip];
                const double* ez_jp = &ez_[bjp];
                for (std::size_t k = 0; k < nz; ++k) {
                    hx[k] -= ch_ * ((ez_jp[k] - ez[k]) - (ey[k + 1] - ey[k]));
                    hy[k] -= ch_ * ((ex[k + 1] - ex[k]) - (ez_ip[k] - ez[k]));
                }
                for (std::size_t k = 0; k <= nz; ++k) {
                    hz[k] -= ch_ * ((ey_ip[k] - ey[k]) - (ex_jp[k] - ex[k]));
                }
                double* phx = &psi_hxz_[(i * ny + j) * npml_];
                double* phy = &psi_hyz_[(i * ny + j) * npml_];
                for (std::size_t q = 0; q < npml_; ++q) {
                    const std::size_t k = s_.kp + q;
                    phx[q] = ph_b_[q] * phx[q] + ph_a_[q] * (ey[k + 1] - ey[k]);
                    phy[q] = ph_b_[q] * phy[q] + ph_a_[q] * (ex[k + 1] - ex[k]);
                    hx[k] += ch_ * phx[q];
                    hy[k] -= ch_ * phy[q];
                }
                // TF/SF: H just above kb is scattered-field; remove the incident E below it.
                hy[s_.kb] -= ch_ * ex_inc;
                hx[s_.kb] += ch_ * ey_inc;
            }
        }
    }

    void update_e(double hy_inc, double hx_inc) {
        const std::size_t nx = s_.nx, ny = s_.ny, nz = s_.nz;
        for (std::size_t i = 0; i < nx; ++i) {
            const std::size_t im = i == 0 ? nx - 1 : i - 1;
            for (std::size_t j = 0; j < ny; ++j) {
                const std::size_t jm = j == 0 ? ny - 1 : j - 1;
                const std::size_t b = idx(i, j);
                const std::size_t bim = idx(im, j);
                const std::size_t bjm = idx(i, jm);
                double* ex = &ex_[b];
                double* ey = &ey_[b];
                double* ez = &ez_[b];
                const double* hx = &hx_[b];
                const double* hy = &hy_[b];
                const double* hz = &hz_[b];
                const double* hx_jm = &hx_[bjm];
                const double* hy_im = &hy_[bim];
                const double* hz_im = &hz_[bim];
                const double* hz_jm = &hz_[bjm];
                for (std::size_t k = 1; k < nz; ++k) {
                    ex[k] = ca_t_[k] * ex[k] +
                            cb_t_[k] * ((hz[k] - hz_jm[k]) - (hy[k] - hy[k - 1]));
                    ey[k] = ca_t_[k] * ey[k] +
                            cb_t_[k] * ((hx[k] - hx[k - 1]) - (hz[k] - hz_im[k]));
                }
                for (std::size_t k = 0; k < nz; ++k) {
                    ez[k] = ca_z_[k] * ez[k] +
                            cb_z_[k] * ((hy[k] - hy_im[k]) - (hx[k] - hx_jm[k]));
                }
                double* pex = &psi_exz_[(i * ny + j) * (npml_ + 1)];
                double* pey = &psi_eyz_[(i * ny + j) * (npml_ + 1)];
                for (std::size_t q = 1; q < npml_; ++q) {
                    const std::size_t k = s_.kp + q;
                    pex[q] = pe_b_[q] * pex[q] + pe_a_[q] * (hy[k] - hy[k - 1]);
                    pey[q] = pe_b_[q] * pey[q] + pe_a_[q] * (hx[k] - hx[k - 1]);
                    ex[k] -= cb_t_[k] * pex[q];
                    ey[k] += cb_t_[k] * pey[q];
                }
                // TF/SF: E at kb is total-field; add the incident H above it.
                ex[s_.kb] -= cb_t_[s_.kb] * hy_inc;
                ey[s_.kb] += cb_t_[s_.kb] * hx_inc;
                if (s_.pec_ex[i * ny + j]) ex[s_.ks] = 0.0;
                if (s_.pec_ey[i * ny + j]) ey[s_.ks] = 0.0;
            }
        }
    }

    std::pair<double, double> monitor() const {
        double sx = 0.0, sy = 0.0;
        for (std::size_t i = 0; i < s_.nx; ++i) {
            for (std::size_t j = 0; j < s_.ny; ++j) {
                sx += ex_[idx(i, j) + s_.km];
                sy += ey_[idx(i, j) + s_.km];
            }
        }
        const double n = static_cast<double>(s_.nx * s_.ny);
        return {sx / n, sy / n};
    }

    // Electromagnetic energy outside the absorber, up to the constant dx^3/2.
    double energy() const {
        double w = 0.0;
        const double mu_over_eps = kMu0 / kEps0;
        for (std::size_t i = 0; i < s_.nx; ++i) {
            for (std::size_t j = 0; j < s_.ny; ++j) {
                const std::size_t b = idx(i, j);
                for (std::size_t k = 0; k < s_.kp; ++k) {
                    w += eps_t_[k] * (ex_[b + k] * ex_[b + k] + ey_[b + k] * ey_[b + k]) +
                         eps_z_[k] * ez_[b + k] * ez_[b + k] +
                         mu_over_eps * (hx_[b + k] * hx_[b + k] + hy_[b + k] * hy_[b + k] +
                                        hz_[b + k] * hz_[b + k]);
                }
            }
        }
        return w;
    }

private:
    std::size_t idx(std::size_t i, std::size_t j) const { return (i * s_.ny + j) * nzp_; }

    std::pair<double, double> coefficients(double eps, double sigma) const {
        const double loss = sigma * s_.dt / (2.0 * kEps0 * eps);
        const double ca = (1.0 - loss) / (1.0 + loss);
        const double cb = s_.dt / (kEps0 * eps * s_.dx) / (1.0 + loss);
        return {ca, cb};
    }

    GridSpec s_;
    std::size_t nzp_;
    std::size_t npml_ = 0;
    double ch_ = 0.0;
    std::vector<double> ex_, ey_, ez_, hx_, hy_, hz_;
    std::vector<double> ca_t_, cb_t_, ca_z_, cb_z_, eps_t_, eps_z_;
    std::vector<double> pe_b_, pe_a_, ph_b_, ph_a_;
    std::vector<double> psi_exz_, psi_eyz_, psi_hxz_, psi_hyz_;
};

bool face_metal(const geometry::PatchMask& mask, std::ptrdiff_t i, std::ptrdiff_t j) {
    const auto nx = static_cast<std::ptrdiff_t>(mask.nx());
    const auto ny = static_cast<std::ptrdiff_t>(mask.ny());
    return mask.at(static_cast<std::size_t>((i % nx + nx) % nx),
                   static_cast<std::size_t>((j % ny + ny) % ny));
}

}  // namespace

double Pulse::value(double t) const {
    const double x = (t - t0) / tau;
    return std::exp(-x * x) * std::sin(2.0 * kPi * fc * (t - t0));
}

Pulse make_pulse(const SolverConfig& config) {
    Pulse p;
    p.fc = 0.5 * (config.f_min.hertz + config.f_max.hertz);
    const double half_band = 0.5 * (config.f_max.hertz - config.f_min.hertz);
    // Spectrum exp(-(pi df tau)^2) falls to e^-1 at the band edges.
    p.tau = 1.0 / (kPi * half_band);
    p.t0 = 4.5 * p.tau;
    return p;
}

GridSpec make_grid_spec(const geometry::PatchMask& mask, const geometry::StackUp& stack,
                        const SolverConfig& config) {
    const double dx = config.resolution.metres;
    if (std::abs(mask.resolution().metres - dx) > 1e-9 * dx) {
        throw Error(ErrorCode::ResolutionError, "mask resolution differs from solver resolution");
    }
    GridSpec s;
    if (config.collapse_uniform && mask.uniform()) {
        s.nx = 1;
        s.ny = 1;
        s.pec_ex.assign(1, mask.at(0, 0) ? 1 : 0);
        s.pec_ey.assign(1, mask.at(0, 0) ? 1 : 0);
    } else {
        s.nx = mask.nx();
        s.ny = mask.ny();
        s.pec_ex.assign(s.nx * s.ny, 0);
        s.pec_ey.assign(s.nx * s.ny, 0);
        for (std::size_t i = 0; i < s.nx; ++i) {
            for (std::size_t j = 0; j < s.ny; ++j) {
                const auto ii = static_cast<std::ptrdiff_t>(i);
                const auto jj = static_cast<std::ptrdiff_t>(j);
                // An edge is metal when either face sharing it is metal.
                s.pec_ex[i * s.ny + j] = face_metal(mask, ii, jj) || face_metal(mask, ii, jj - 1);
                s.pec_ey[i * s.ny + j] = face_metal(mask, ii, jj) || face_metal(mask, ii - 1, jj);
            }
        }
    }
    const double h = stack.thickness.metres;
    const double ks = std::round(h / dx);
    if (std::abs(ks * dx - h) > 1e-3 * h) {
        throw Error(ErrorCode::ResolutionError, "resolution does not divide the substrate thickness");
    }
    s.ks = static_cast<std::size_t>(ks);
    const auto gap = static_cast<std::size_t>(std::max(4.0, std::round(config.air_gap.metres / dx)));
    s.kb = s.ks + gap;
    s.km = s.kb + 2;
    s.kp = s.km + 2;
    s.nz = s.kp + config.absorber_cells;
    s.dx = dx;
    s.dt = time_step(config);
    s.eps_r = stack.substrate.eps_r;
    const double f_loss = 0.5 * (config.f_min.hertz + config.f_max.hertz);
    s.sigma = 2.0 * kPi * f_loss * kEps0 * stack.substrate.eps_r * stack.substrate.tan_delta;
    s.alpha_max = 2.0 * kPi * (0.1 * config.f_min.hertz) * kEps0;
    return s;
}

FieldRecord run_grid(const GridSpec& spec, const Pulse& pulse, jones::Polarization pol,
                     const SolverConfig& config) {
    YeeGrid grid(spec);
    IncidentLine line(spec.dx, spec.dt, spec.alpha_max, pulse);
    const bool x_pol = pol == jones::Polarization::X;

    FieldRecord rec;
    rec.polarization = pol;
    rec.dt = spec.dt;
    const std::size_t reserve = std::min<std::size_t>(config.max_steps, 40000);
    rec.ex.reserve(reserve);
    rec.ey.reserve(reserve);
    rec.incident.reserve(reserve);

    constexpr std::size_t kCheckEvery = 50;
    double peak = 0.0;
    double residual = 1.0;
    std::size_t step = 0;
    bool converged = false;
    for (; step < config.max_steps; ++step) {
        const double e_inc = line.e_boundary();
        grid.update_h(x_pol ? e_inc : 0.0, x_pol ? 0.0 : e_inc);
        line.update_h();
        // A -z travelling wave with E along y carries H along +x = -(the x-pol H_y).
        const double h_inc = line.h_boundary();
        grid.update_e(x_pol ? h_inc : 0.0, x_pol ? 0.0 : -h_inc);
        line.update_e(step);

        const auto [mx, my] = grid.monitor();
        rec.ex.push_back(mx);
        rec.ey.push_back(my);
        rec.incident.push_back(line.e_boundary());

        if ((step + 1) % kCheckEvery == 0) {
            const double w = grid.energy();
            if (!std::isfinite(w)) {
                throw Error(ErrorCode::StabilityError,
                            "non-finite field at step " + std::to_string(step + 1));
            }
            peak = std::max(peak, w);
            residual = peak > 0.0 ? w / peak : 1.0;
            const double t = static_cast<double>(step + 1) * spec.dt;
            if (t > pulse.end_time() && peak > 0.0 && residual < config.decay_threshold) {
                ++step;
                converged = true;
                break;
            }
        }
    }
    rec.steps = step;
    rec.residual = residual;
    if (!converged) {
        throw Error(ErrorCode::NonConverged,
                    "residual energy " + std::to_string(residual) + " above threshold after " +
                        std::to_string(step) + " steps");
    }
    return rec;
}

}  // namespace pcm::solver::detail
