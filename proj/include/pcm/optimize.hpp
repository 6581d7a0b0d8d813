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

#ifndef PCM_OPTIMIZE_HPP
#define PCM_OPTIMIZE_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "pcm/geometry.hpp"
#include "pcm/jones.hpp"
#include "pcm/solver.hpp"
#include "pcm/units.hpp"

namespace pcm::optimize {

struct Bounds {
    double lo = 0.0;
    double hi = 0.0;
};

/// Geometry parameters in millimetres.
struct DesignVector {
    double major_axis = 0.0;
    double minor_axis = 0.0;
    double period = 0.0;
    double thickness = 0.0;

    std::vector<double> to_vector() const { return {major_axis, minor_axis, period, thickness}; }
    static DesignVector from_vector(std::span<const double> x) { return {x[0], x[1], x[2], x[3]}; }
    bool operator==(const DesignVector&) const = default;
};

struct DesignBounds {
    Bounds major_axis;
    Bounds minor_axis;
    Bounds period;
    Bounds thickness;

    std::vector<Bounds> to_vector() const { return {major_axis, minor_axis, period, thickness}; }
};

enum class Engine { TlModel, Solver };

struct Band {
    Frequency f_lo = Frequency::ghz(20.0);
    Frequency f_hi = Frequency::ghz(60.0);
    std::size_t n_freq = 161;
};

std::vector<Frequency> band_frequencies(const Band& band);

/// Fractional bandwidth (f_hi - f_lo) / f_centre of the contiguous run where
/// pcr >= threshold with the largest fractional bandwidth. Run edges are
/// linearly interpolated threshold crossings. 0 when no sample qualifies.
double fractional_bandwidth(const std::vector<Frequency>& freqs, const std::vector<double>& pcr,
                            double threshold);

/// Quasi-static sheet impedances of the ellipse along its long (u) and short
/// (v) axes; see the definition for the strip-grid model used.
struct SheetImpedances {
    jones::cplx z_u;
    jones::cplx z_v;
};
SheetImpedances tl_sheet_impedances(const geometry::UnitCellGeometry& cell, Frequency f);

/// PCR for y incidence across the band from the transmission-line surrogate.
std::vector<double> tl_pcr_curve(const geometry::UnitCellGeometry& cell, const Band& band);

geometry::UnitCellGeometry design_cell(const DesignVector& d, const geometry::Material& substrate,
                                       Length metal_thickness = Length::mm(0.035));

bool feasible(const DesignVector& d);

struct EvaluationContext {
    geometry::Material substrate{"RT5880", 2.2, 0.0009};
    Band band;
    double threshold = 0.9;
    Engine engine = Engine::TlModel;
    solver::SolverConfig solver;  // band fields are overridden by `band`
};

/// FIT_ERROR propagates from geometry construction for infeasible designs.
double evaluate_design(const DesignVector& d, const EvaluationContext& ctx);

// Generic bounded maximiser.

using Objective = std::function<double(std::span<const double>)>;
using Feasibility = std::function<bool(std::span<const double>)>;

struct TraceEntry {
    std::size_t evaluation = 0;
    std::size_t restart = 0;
    std::vector<double> x;
    double value = 0.0;
    double best = 0.0;
};

struct SearchOptions {
    std::size_t budget = 200;       // objective evaluations
    std::uint64_t seed = 1;
    double initial_step = 0.25;     // fraction of each bound range
    double min_step = 1e-9;         // fraction of each bound range
    std::size_t max_draws = 10000;  // random draws per restart when hunting a feasible point
};

struct SearchResult {
    std::vector<double> best_x;
    double best_value = 0.0;
    std::size_t evaluations = 0;
    std::vector<TraceEntry> trace;
};

/// Compass (coordinate pattern) search maximising `objective` inside `bounds`,
/// with seeded random restarts once the step collapses. Only feasible points
/// are evaluated. NO_FEASIBLE if none is found.
SearchResult pattern_search(const Objective& objective, const std::vector<Bounds>& bounds,
                            const std::vector<double>& start, const SearchOptions& options,
                            const Feasibility& is_feasible = nullptr);

struct DesignResult {
    DesignVector best;
    double bandwidth = 0.0;
    SearchResult search;
};

DesignResult optimize_design(const DesignBounds& bounds, const DesignVector& start,
                             const EvaluationContext& ctx, const SearchOptions& options);

}  // namespace pcm::optimize

#endif  // PCM_OPTIMIZE_HPP
