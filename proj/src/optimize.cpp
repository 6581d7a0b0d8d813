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

#include "pcm/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>

#include "pcm/error.hpp"

namespace pcm::optimize {

std::vector<Frequency> band_frequencies(const Band& band) {
    if (band.n_freq < 2 || !(band.f_lo < band.f_hi)) {
        throw Error(ErrorCode::InvalidArgument, "band needs f_lo < f_hi and at least two samples");
    }
    solver::SolverConfig c;
    c.f_min = band.f_lo;
    c.f_max = band.f_hi;
    c.n_freq = band.n_freq;
    return solver::band_frequencies(c);
}

double fractional_bandwidth(const std::vector<Frequency>& freqs, const std::vector<double>& pcr,
                            double threshold) {
    if (freqs.size() != pcr.size()) {
        throw Error(ErrorCode::InvalidArgument, "frequency and PCR arrays differ in length");
    }
    const std::size_t n = freqs.size();
    const auto crossing = [&](std::size_t out, std::size_t in) {
        // Linear interpolation between an outside sample and an inside sample.
        const double t = (threshold - pcr[out]) / (pcr[in] - pcr[out]);
        return freqs[out].hertz + t * (freqs[in].hertz - freqs[out].hertz);
    };
    double best = 0.0;
    std::size_t i = 0;
    while (i < n) {
        if (!(pcr[i] >= threshold)) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j + 1 < n && pcr[j + 1] >= threshold) ++j;
        const double lo = i == 0 ? freqs[0].hertz : crossing(i - 1, i);
        const double hi = j + 1 == n ? freqs[n - 1].hertz : crossing(j + 1, j);
        if (hi > lo) best = std::max(best, (hi - lo) / (0.5 * (hi + lo)));
        i = j + 1;
    }
    return best;
}

// Strip-grid surrogate. The rotated square lattice puts cells P*sqrt(2) apart
// along each ellipse axis, in rows P/sqrt(2) apart. Along one axis the ellipse
// acts as a strip of length l and mean width (pi/4) * w:
//   L = mu0 p_t / (2 pi) ln csc(pi w_eff / (2 p_t)) * (l / p_e)
//   C = eps0 eps_eff (2 p_t / pi) ln csc(pi g / (2 p_e)),  g = p_e - l
// with eps_eff = (eps_r + 1) / 2, giving the series sheet j(wL - 1/(wC)).
SheetImpedances tl_sheet_impedances(const geometry::UnitCellGeometry& cell, Frequency f) {
    const double p = cell.period().metres;
    const double p_e = p * std::sqrt(2.0);
    const double p_t = p / std::sqrt(2.0);
    const double eps_eff = 0.5 * (cell.stack().substrate.eps_r + 1.0);
    const auto strip = [&](double length, double width) {
        const double w_eff = std::min(0.25 * kPi * width, 0.95 * p_t);
        const double gap = std::max(p_e - length, 1e-3 * p_e);
        const double inductance =
            kMu0 * p_t / (2.0 * kPi) * std::log(1.0 / std::sin(kPi * w_eff / (2.0 * p_t))) *
            (length / p_e);
        const double capacitance = kEps0 * eps_eff * (2.0 * p_t / kPi) *
                                   std::log(1.0 / std::sin(kPi * gap / (2.0 * p_e)));
        return jones::series_lc_impedance(inductance, capacitance, f);
    };
    const double major = cell.major_axis().metres;
    const double minor = cell.minor_axis().metres;
    return {strip(major, minor), strip(minor, major)};
}

std::vector<double> tl_pcr_curve(const geometry::UnitCellGeometry& cell, const Band& band) {
    std::vector<double> out;
    for (const auto& f : band_frequencies(band)) {
        const auto z = tl_sheet_impedances(cell, f);
        const auto uv = jones::tl_converter_model(cell.stack(), z.z_u, z.z_v, f);
        const auto xy = jones::rotate_basis(uv, cell.orientation_deg());
        out.push_back(jones::pcr(xy, jones::Polarization::Y));
    }
    return out;
}

geometry::UnitCellGeometry design_cell(const DesignVector& d, const geometry::Material& substrate,
                                       Length metal_thickness) {
    const geometry::StackUp stack{substrate, Length::mm(d.thickness), metal_thickness, true};
    return geometry::build_unit_cell(Length::mm(d.period), Length::mm(d.major_axis),
                                     Length::mm(d.minor_axis), stack, geometry::Handedness::Unit);
}

bool feasible(const DesignVector& d) {
    if (!(d.major_axis > 0.0 && d.minor_axis > 0.0 && d.period > 0.0 && d.thickness > 0.0)) {
        return false;
    }
    if (d.minor_axis > d.major_axis) return false;
    return geometry::bounding_half_extent(Length::mm(d.major_axis), Length::mm(d.minor_axis)) <=
           Length::mm(d.period) / 2.0;
}

double evaluate_design(const DesignVector& d, const EvaluationContext& ctx) {
    const auto cell = design_cell(d, ctx.substrate);
    const auto freqs = band_frequencies(ctx.band);
    std::vector<double> pcr;
    if (ctx.engine == Engine::TlModel) {
        pcr = tl_pcr_curve(cell, ctx.band);
    } else {
        solver::SolverConfig cfg = ctx.solver;
        cfg.f_min = ctx.band.f_lo;
        cfg.f_max = ctx.band.f_hi;
        cfg.n_freq = ctx.band.n_freq;
        const auto run = solver::run_unit_cell(cell, cfg);
        for (const auto& s : run.spectrum.samples()) {
            pcr.push_back(jones::pcr(s.j, jones::Polarization::Y));
        }
    }
    return fractional_bandwidth(freqs, pcr, ctx.threshold);
}

namespace {

// Portable uniform draw on [0, 1): the top 53 bits of a 64-bit Mersenne twister.
double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace

SearchResult pattern_search(const Objective& objective, const std::vector<Bounds>& bounds,
                            const std::vector<double>& start, const SearchOptions& options,
                            const Feasibility& is_feasible) {
    if (options.budget < 1) throw Error(ErrorCode::InvalidArgument, "budget must be >= 1");
    const std::size_t dim = bounds.size();
    if (dim == 0) throw Error(ErrorCode::InvalidArgument, "no design variables");
    for (const auto& b : bounds) {
        if (!std::isfinite(b.lo) || !std::isfinite(b.hi) || b.hi < b.lo) {
            throw Error(ErrorCode::InvalidArgument, "bounds must be finite with lo <= hi");
        }
    }
    const auto ok = [&](const std::vector<double>& x) { return !is_feasible || is_feasible(x); };
    const auto clamp = [&](std::vector<double> x) {
        for (std::size_t d = 0; d < dim; ++d) x[d] = std::clamp(x[d], bounds[d].lo, bounds[d].hi);
        return x;
    };

    std::mt19937_64 rng(options.seed);
    SearchResult result;
    bool have_best = false;
    std::size_t restart = 0;

    const auto evaluate = [&](const std::vector<double>& x) {
        const double v = objective(x);
        ++result.evaluations;
        if (!have_best || v > result.best_value) {
            result.best_value = v;
            result.best_x = x;
            have_best = true;
        }
        result.trace.push_back({result.evaluations, restart, x, v, result.best_value});
        return v;
    };

    const auto random_feasible = [&]() -> std::optional<std::vector<double>> {
        for (std::size_t draw = 0; draw < options.max_draws; ++draw) {
            std::vector<double> x(dim);
            for (std::size_t d = 0; d < dim; ++d) {
                x[d] = bounds[d].lo + uniform01(rng) * (bounds[d].hi - bounds[d].lo);
            }
            if (ok(x)) return x;
        }
        return std::nullopt;
    };

    std::optional<std::vector<double>> x0;
    if (!start.empty()) {
        if (start.size() != dim) throw Error(ErrorCode::InvalidArgument, "start has wrong size");
        auto s = clamp(start);
        if (ok(s)) x0 = s;
    }
    if (!x0) x0 = random_feasible();
    if (!x0) throw Error(ErrorCode::NoFeasible, "no feasible point inside the bounds");

    while (result.evaluations < options.budget) {
        std::vector<double> x = *x0;
        double fx = evaluate(x);
        double step = options.initial_step;
        while (result.evaluations < options.budget && step >= options.min_step) {
            bool improved = false;
            for (std::size_t d = 0; d < dim && !improved; ++d) {
                const double range = bounds[d].hi - bounds[d].lo;
                if (range == 0.0) continue;
                for (const double sign : {+1.0, -1.0}) {
                    if (result.evaluations >= options.budget) break;
                    std::vector<double> trial = x;
                    trial[d] += sign * step * range;
                    trial = clamp(std::move(trial));
                    if (trial == x || !ok(trial)) continue;
                    const double ft = evaluate(trial);
                    if (ft > fx) {
                        x = std::move(trial);
                        fx = ft;
                        improved = true;
                        break;
                    }
                }
            }
            if (!improved) step *= 0.5;
        }
        if (result.evaluations >= options.budget) break;
        ++restart;
        x0 = random_feasible();
        if (!x0) break;
    }
    return result;
}

DesignResult optimize_design(const DesignBounds& bounds, const DesignVector& start,
                             const EvaluationContext& ctx, const SearchOptions& options) {
    const auto objective = [&](std::span<const double> x) {
        return evaluate_design(DesignVector::from_vector(x), ctx);
    };
    const auto is_feasible = [](std::span<const double> x) {
        return feasible(DesignVector::from_vector(x));
    };
    auto search = pattern_search(objective, bounds.to_vector(), start.to_vector(), options,
                                 is_feasible);
    DesignResult out;
    out.best = DesignVector::from_vector(search.best_x);
    out.bandwidth = search.best_value;
    out.search = std::move(search);
    return out;
}

}  // namespace pcm::optimize
