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

#ifndef PCM_SOLVER_HPP
#define PCM_SOLVER_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "pcm/geometry.hpp"
#include "pcm/jones.hpp"
#include "pcm/units.hpp"

namespace pcm::solver {

/// Periodic unit-cell FDTD settings. The grid is cubic with edge `resolution`.
struct SolverConfig {
    Length resolution = Length::mm(0.05);
    double courant = 0.99;          // fraction of the 3-D stability limit
    Frequency f_min = Frequency::ghz(20.0);
    Frequency f_max = Frequency::ghz(60.0);
    std::size_t n_freq = 161;       // evenly spaced output samples, inclusive of both ends
    std::size_t absorber_cells = 10;
    double decay_threshold = 1e-6;  // stop once field energy < threshold * peak energy
    std::size_t max_steps = 200000;
    Length air_gap = Length::mm(3.0);  // patch plane to source plane
    std::size_t threads = 1;           // >1 runs the two polarizations concurrently
    bool collapse_uniform = true;      // laterally uniform masks run on a 1x1 column
};

void validate(const SolverConfig& config, const geometry::StackUp& stack);

std::vector<Frequency> band_frequencies(const SolverConfig& config);

/// Time step the grid runs at: courant * dx / (c sqrt 3).
double time_step(const SolverConfig& config);

/// Monitor-plane record of one run. `ex`/`ey` are the laterally averaged
/// scattered tangential fields, one value per time step.
struct FieldRecord {
    jones::Polarization polarization = jones::Polarization::X;
    double dt = 0.0;
    std::vector<double> ex;
    std::vector<double> ey;
    std::vector<double> incident;  // incident field at the source plane
    std::size_t steps = 0;
    double residual = 0.0;         // final energy / peak energy
};

/// Bare PEC plane located at the patch surface: the phase and amplitude
/// reference every cell run is divided by.
struct ReferenceRun {
    FieldRecord record;
    std::vector<Frequency> frequencies;
    std::vector<jones::cplx> incident_spectrum;
    std::vector<jones::cplx> reflected_spectrum;
};

ReferenceRun run_reference(const geometry::StackUp& stack, const SolverConfig& config);

struct CellRun {
    jones::ReflectionSpectrum spectrum;
    std::vector<std::string> warnings;
    FieldRecord x_run;
    FieldRecord y_run;
    ReferenceRun reference;
};

/// Solves an arbitrary rasterized metal pattern over the stack.
CellRun run_mask(const geometry::PatchMask& mask, const geometry::StackUp& stack,
                 const SolverConfig& config);

CellRun run_unit_cell(const geometry::UnitCellGeometry& cell, const SolverConfig& config);

/// Reflection divided by the reference: r(f) = -R(f) / R_ref(f).
std::vector<jones::cplx> calibrate(const std::vector<jones::cplx>& reflected,
                                   const ReferenceRun& reference);

/// Direct DFT of a sampled series at the given frequencies, sample n taken at (n + 1) dt.
std::vector<jones::cplx> direct_dft(const std::vector<double>& series, double dt,
                                    const std::vector<Frequency>& frequencies);

/// RECIPROCITY_WARNING when |r_xy - r_yx| > 1e-3 anywhere; GRATING_WARNING
/// when the band reaches the first non-specular order of `period`.
std::vector<std::string> spectrum_warnings(const jones::ReflectionSpectrum& spectrum, Length period);

/// Lowest frequency at which a non-specular order propagates in air.
Frequency grating_onset(Length period);

}  // namespace pcm::solver

#endif  // PCM_SOLVER_HPP
