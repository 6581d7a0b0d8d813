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

#include "pcm/solver.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <sstream>

#include "pcm/error.hpp"
#include "yee_grid.hpp"

namespace pcm::solver {

void validate(const SolverConfig& config, const geometry::StackUp& stack) {
    geometry::validate(stack);
    if (!(config.courant > 0.0) || !(config.courant < 1.0)) {
        throw Error(ErrorCode::StabilityError,
                    "courant factor " + std::to_string(config.courant) + " outside (0, 1)");
    }
    if (!(config.f_min.hertz > 0.0) || !(config.f_min < config.f_max)) {
        throw Error(ErrorCode::InvalidArgument, "band must satisfy 0 < f_min < f_max");
    }
    if (config.n_freq < 2) throw Error(ErrorCode::InvalidArgument, "n_freq must be >= 2");
    if (config.absorber_cells < 1) {
        throw Error(ErrorCode::InvalidArgument, "absorber needs at least one cell");
    }
    if (!(config.decay_threshold > 0.0) || !(config.decay_threshold < 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "decay threshold must lie in (0, 1)");
    }
    if (config.max_steps < 1) throw Error(ErrorCode::InvalidArgument, "max_steps must be >= 1");
    const double dx = config.resolution.metres;
    if (!(dx > 0.0)) throw Error(ErrorCode::ResolutionError, "resolution must be positive");
    const double lambda_min =
        config.f_max.wavelength().metres / std::sqrt(stack.substrate.eps_r);
    if (dx > lambda_min / 20.0) {
        throw Error(ErrorCode::ResolutionError,
                    "resolution " + std::to_string(config.resolution.in_mm()) +
                        " mm coarser than lambda/20 in the substrate");
    }
    if (stack.thickness.metres / dx < 10.0 - 1e-9) {
        throw Error(ErrorCode::ResolutionError,
                    "fewer than 10 samples across the substrate thickness");
    }
}

std::vector<Frequency> band_frequencies(const SolverConfig& config) {
    std::vector<Frequency> out(config.n_freq);
    const double lo = config.f_min.hertz;
    const double hi = config.f_max.hertz;
    for (std::size_t i = 0; i < config.n_freq; ++i) {
        const double t = static_cast<double>(i) / static_cast<double>(config.n_freq - 1);
        out[i] = Frequency::hz(i + 1 == config.n_freq ? hi : lo + t * (hi - lo));
    }
    return out;
}

double time_step(const SolverConfig& config) {
    return config.courant * config.resolution.metres / (kSpeedOfLight * std::sqrt(3.0));
}

Frequency grating_onset(Length period) { return Frequency::hz(kSpeedOfLight / period.metres); }

std::vector<jones::cplx> direct_dft(const std::vector<double>& series, double dt,
                                    const std::vector<Frequency>& frequencies) {
    std::vector<jones::cplx> out;
    out.reserve(frequencies.size());
    for (const auto& f : frequencies) {
        const double w = f.angular() * dt;
        double re = 0.0, im = 0.0;
        for (std::size_t n = 0; n < series.size(); ++n) {
            const double ph = w * static_cast<double>(n + 1);
            re += series[n] * std::cos(ph);
            im -= series[n] * std::sin(ph);
        }
        out.emplace_back(re, im);
    }
    return out;
}

std::vector<jones::cplx> calibrate(const std::vector<jones::cplx>& reflected,
                                   const ReferenceRun& reference) {
    if (reflected.size() != reference.reflected_spectrum.size()) {
        throw Error(ErrorCode::InvalidArgument, "spectrum length differs from the reference");
    }
    std::vector<jones::cplx> out(reflected.size());
    for (std::size_t i = 0; i < reflected.size(); ++i) {
        out[i] = -reflected[i] / reference.reflected_spectrum[i];
    }
    return out;
}

ReferenceRun run_reference(const geometry::StackUp& stack, const SolverConfig& config) {
    validate(config, stack);
    geometry::PatchMask plane(config.resolution, 1, 1);
    plane.set(0, 0, true);
    const auto spec = detail::make_grid_spec(plane, stack, config);
    const auto pulse = detail::make_pulse(config);

    ReferenceRun ref;
    ref.record = detail::run_grid(spec, pulse, jones::Polarization::X, config);
    ref.frequencies = band_frequencies(config);
    ref.incident_spectrum = direct_dft(ref.record.incident, ref.record.dt, ref.frequencies);
    ref.reflected_spectrum = direct_dft(ref.record.ex, ref.record.dt, ref.frequencies);

    double peak = 0.0;
    for (const auto& v : ref.incident_spectrum) peak = std::max(peak, std::abs(v));
    for (std::size_t i = 0; i < ref.frequencies.size(); ++i) {
        if (std::abs(ref.incident_spectrum[i]) < 0.01 * peak) {
            throw Error(ErrorCode::InvalidArgument,
                        "incident spectrum below 1% of peak at " +
                            std::to_string(ref.frequencies[i].in_ghz()) + " GHz");
        }
    }
    return ref;
}

CellRun run_mask(const geometry::PatchMask& mask, const geometry::StackUp& stack,
                 const SolverConfig& config) {
    validate(config, stack);
    const auto spec = detail::make_grid_spec(mask, stack, config);
    const auto pulse = detail::make_pulse(config);
    ReferenceRun reference = run_reference(stack, config);

    FieldRecord xr, yr;
    if (config.threads > 1) {
        auto fut = std::async(std::launch::async, [&] {
            return detail::run_grid(spec, pulse, jones::Polarization::Y, config);
        });
        xr = detail::run_grid(spec, pulse, jones::Polarization::X, config);
        yr = fut.get();
    } else {
        xr = detail::run_grid(spec, pulse, jones::Polarization::X, config);
        yr = detail::run_grid(spec, pulse, jones::Polarization::Y, config);
    }

    const auto& freqs = reference.frequencies;
    const auto r_xx = calibrate(direct_dft(xr.ex, xr.dt, freqs), reference);
    const auto r_yx = calibrate(direct_dft(xr.ey, xr.dt, freqs), reference);
    const auto r_xy = calibrate(direct_dft(yr.ex, yr.dt, freqs), reference);
    const auto r_yy = calibrate(direct_dft(yr.ey, yr.dt, freqs), reference);

    std::vector<jones::SpectrumSample> samples;
    samples.reserve(freqs.size());
    for (std::size_t i = 0; i < freqs.size(); ++i) {
        samples.push_back(
            {freqs[i], jones::Jones2::make(r_xx[i], r_xy[i], r_yx[i], r_yy[i], jones::Basis::XY)});
    }
    jones::ReflectionSpectrum spectrum(std::move(samples), jones::Basis::XY, "patch surface");
    auto warnings =
        spectrum_warnings(spectrum, mask.resolution() * static_cast<double>(mask.nx()));

    return CellRun{std::move(spectrum), std::move(warnings), std::move(xr), std::move(yr),
                   std::move(reference)};
}

std::vector<std::string> spectrum_warnings(const jones::ReflectionSpectrum& spectrum, Length period) {
    std::vector<std::string> warnings;
    double worst_reciprocity = 0.0;
    Frequency worst_f{};
    for (const auto& s : spectrum.samples()) {
        const double d = std::abs(s.j.xy() - s.j.yx());
        if (d > worst_reciprocity) {
            worst_reciprocity = d;
            worst_f = s.f;
        }
    }
    if (worst_reciprocity > 1e-3) {
        std::ostringstream msg;
        msg << "RECIPROCITY_WARNING: |r_xy - r_yx| = " << worst_reciprocity << " at "
            << worst_f.in_ghz() << " GHz";
        warnings.push_back(msg.str());
    }
    const Frequency onset = grating_onset(period);
    if (spectrum.f_max() >= onset) {
        std::ostringstream msg;
        msg << "GRATING_WARNING: period " << period.in_mm()
            << " mm exceeds the free-space wavelength above " << onset.in_ghz() << " GHz";
        warnings.push_back(msg.str());
    }
    return warnings;
}

CellRun run_unit_cell(const geometry::UnitCellGeometry& cell, const SolverConfig& config) {
    const auto mask = geometry::rasterize(cell, config.resolution);
    return run_mask(mask, cell.stack(), config);
}

}  // namespace pcm::solver
