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

#ifndef PCM_CLI_CONFIG_HPP
#define PCM_CLI_CONFIG_HPP

#include <cstdint>
#include <optional>
#include <set>
#include <string>

#include <json.hpp>

#include "pcm/geometry.hpp"
#include "pcm/optimize.hpp"
#include "pcm/solver.hpp"

namespace pcm::cli {

using nlohmann::json;

inline constexpr const char* kToolName = "pcmscat";
inline constexpr const char* kToolVersion = "1.0.0";

/// Where a layout takes its unit/mirror reflection from.
enum class SpectrumSource { Solver, Ideal };

struct GeometryBlock {
    double period = 4.0;       // mm
    double major_axis = 3.8;   // mm, full length
    double minor_axis = 1.3;   // mm, full length
};

struct StackBlock {
    std::string substrate = "RT5880";
    double eps_r = 2.2;
    double tan_delta = 0.0009;
    double thickness = 1.0;          // mm
    double metal_thickness = 0.035;  // mm
};

struct AntennaBlock {
    double x0 = 0.0;  // mm from the aperture corner
    double y0 = 0.0;
    double width = 0.0;
    double height = 0.0;
};

struct LayoutBlock {
    std::size_t tiles_x = 3;
    std::size_t tiles_y = 5;
    std::size_t cells_per_tile = 2;
    SpectrumSource spectra = SpectrumSource::Solver;
    std::optional<AntennaBlock> antenna;
};

struct SweepBlock {
    double f_min = 30.0;      // GHz
    double f_max = 40.0;      // GHz
    std::size_t n_freq = 41;
    double freq = 37.75;      // GHz, single-frequency commands
    double theta_step = 0.5;  // deg
    double phi_step = 0.5;    // deg
    double prominence_db = 10.0;
    jones::Polarization polarization = jones::Polarization::Y;
};

struct OptimizeBlock {
    optimize::DesignBounds bounds{{2.5, 4.5}, {0.5, 2.5}, {3.0, 5.0}, {0.5, 2.0}};
    std::optional<optimize::DesignVector> start;  // defaults to the geometry block
    std::size_t budget = 200;
    double threshold = 0.9;
    optimize::Engine engine = optimize::Engine::TlModel;
    double f_min = 20.0;  // GHz
    double f_max = 60.0;  // GHz
    std::size_t n_freq = 161;
    std::uint64_t seed = 1;
};

struct RunConfig {
    GeometryBlock geometry;
    StackBlock stack;
    solver::SolverConfig solver;
    LayoutBlock layout;
    SweepBlock sweep;
    OptimizeBlock optimize;
    std::string output;
    std::set<std::string> present;  // top-level blocks given explicitly
    json source = json::object();  // canonical form of what was parsed, defaults filled in
};

/// Parses one JSON document. Unknown keys, wrong types and out-of-range
/// values raise CONFIG_ERROR. Missing blocks take their defaults.
RunConfig parse_config(const json& doc);
RunConfig load_config(const std::string& path);

/// Canonical JSON of every field, used for hashing and manifests.
json to_json(const RunConfig& config);

geometry::StackUp make_stack(const StackBlock& block);
geometry::UnitCellGeometry make_cell(const RunConfig& config);

/// "published_design" when the geometry and stack equal the reference design.
std::string reference_mode(const RunConfig& config);

}  // namespace pcm::cli

#endif  // PCM_CLI_CONFIG_HPP
