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

#include "pcm/cli/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "pcm/error.hpp"

namespace pcm::cli {

namespace {

[[noreturn]] void config_error(const std::string& message) {
    throw Error(ErrorCode::ConfigError, message);
}

// Reads keys from one JSON object and rejects anything it was not asked for.
class Block {
public:
    Block(const json& doc, std::string path) : doc_(doc), path_(std::move(path)) {
        if (!doc_.is_object()) config_error(path_ + " must be an object");
    }

    bool has(const std::string& key) const { return doc_.contains(key); }

    double number(const std::string& key, double fallback) {
        seen_.insert(key);
        if (!doc_.contains(key)) return fallback;
        const auto& v = doc_.at(key);
        if (!v.is_number()) config_error(where(key) + " must be a number");
        const double x = v.get<double>();
        if (!std::isfinite(x)) config_error(where(key) + " must be finite");
        return x;
    }

    double positive(const std::string& key, double fallback) {
        const double x = number(key, fallback);
        if (!(x > 0.0)) config_error(where(key) + " must be positive");
        return x;
    }

    std::uint64_t count(const std::string& key, std::uint64_t fallback) {
        seen_.insert(key);
        if (!doc_.contains(key)) return fallback;
        const auto& v = doc_.at(key);
        if (!v.is_number_unsigned()) config_error(where(key) + " must be a non-negative integer");
        return v.get<std::uint64_t>();
    }

    bool flag(const std::string& key, bool fallback) {
        seen_.insert(key);
        if (!doc_.contains(key)) return fallback;
        const auto& v = doc_.at(key);
        if (!v.is_boolean()) config_error(where(key) + " must be true or false");
        return v.get<bool>();
    }

    std::string text(const std::string& key, const std::string& fallback) {
        seen_.insert(key);
        if (!doc_.contains(key)) return fallback;
        const auto& v = doc_.at(key);
        if (!v.is_string()) config_error(where(key) + " must be a string");
        return v.get<std::string>();
    }

    const json* child(const std::string& key) {
        seen_.insert(key);
        return doc_.contains(key) ? &doc_.at(key) : nullptr;
    }

    std::string where(const std::string& key) const {
        return path_.empty() ? key : path_ + "." + key;
    }

    void finish() const {
        for (const auto& [key, value] : doc_.items()) {
            if (!seen_.count(key)) config_error("unknown key '" + where(key) + "'");
        }
    }

private:
    const json& doc_;
    std::string path_;
    std::set<std::string> seen_;
};

optimize::Bounds parse_bounds(const json& v, const std::string& where) {
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
        config_error(where + " must be [min, max]");
    }
    const optimize::Bounds b{v[0].get<double>(), v[1].get<double>()};
    if (!std::isfinite(b.lo) || !std::isfinite(b.hi) || b.hi < b.lo) {
        config_error(where + " must be finite with min <= max");
    }
    return b;
}

jones::Polarization parse_polarization(const std::string& s, const std::string& where) {
    if (s == "x") return jones::Polarization::X;
    if (s == "y") return jones::Polarization::Y;
    config_error(where + " must be \"x\" or \"y\"");
}

void parse_geometry(Block b, GeometryBlock& g) {
    g.period = b.positive("period", g.period);
    g.major_axis = b.positive("major_axis", g.major_axis);
    g.minor_axis = b.positive("minor_axis", g.minor_axis);
    b.finish();
}

void parse_stack(Block b, StackBlock& s) {
    s.substrate = b.text("substrate", s.substrate);
    s.eps_r = b.number("eps_r", s.eps_r);
    s.tan_delta = b.number("tan_delta", s.tan_delta);
    s.thickness = b.number("thickness", s.thickness);
    s.metal_thickness = b.number("metal_thickness", s.metal_thickness);
    if (s.eps_r < 1.0) config_error("stack.eps_r must be >= 1");
    if (s.tan_delta < 0.0) config_error("stack.tan_delta must be >= 0");
    if (s.thickness < 0.0) config_error("stack.thickness must be >= 0");
    if (s.metal_thickness < 0.0) config_error("stack.metal_thickness must be >= 0");
    b.finish();
}

void parse_solver(Block b, solver::SolverConfig& c) {
    c.resolution = Length::mm(b.positive("resolution", c.resolution.in_mm()));
    c.courant = b.number("courant", c.courant);
    c.f_min = Frequency::ghz(b.positive("f_min", c.f_min.in_ghz()));
    c.f_max = Frequency::ghz(b.positive("f_max", c.f_max.in_ghz()));
    c.n_freq = b.count("n_freq", c.n_freq);
    c.absorber_cells = b.count("absorber_cells", c.absorber_cells);
    c.decay_threshold = b.positive("decay_threshold", c.decay_threshold);
    c.max_steps = b.count("max_steps", c.max_steps);
    c.air_gap = Length::mm(b.positive("air_gap", c.air_gap.in_mm()));
    c.threads = b.count("threads", c.threads);
    c.collapse_uniform = b.flag("collapse_uniform", c.collapse_uniform);
    b.finish();
}

void parse_layout(Block b, LayoutBlock& l) {
    l.tiles_x = b.count("tiles_x", l.tiles_x);
    l.tiles_y = b.count("tiles_y", l.tiles_y);
    l.cells_per_tile = b.count("cells_per_tile", l.cells_per_tile);
    if (l.tiles_x == 0 || l.tiles_y == 0 || l.cells_per_tile == 0) {
        config_error("layout tile counts must be >= 1");
    }
    const auto source = b.text("spectra", l.spectra == SpectrumSource::Solver ? "solver" : "ideal");
    if (source == "solver") {
        l.spectra = SpectrumSource::Solver;
    } else if (source == "ideal") {
        l.spectra = SpectrumSource::Ideal;
    } else {
        config_error("layout.spectra must be \"solver\" or \"ideal\"");
    }
    if (const json* a = b.child("antenna")) {
        Block ab(*a, "layout.antenna");
        AntennaBlock r;
        r.x0 = ab.number("x0", 0.0);
        r.y0 = ab.number("y0", 0.0);
        r.width = ab.positive("width", 1.0);
        r.height = ab.positive("height", 1.0);
        ab.finish();
        l.antenna = r;
    }
    b.finish();
}

void parse_sweep(Block b, SweepBlock& s) {
    s.f_min = b.positive("f_min", s.f_min);
    s.f_max = b.positive("f_max", s.f_max);
    s.n_freq = b.count("n_freq", s.n_freq);
    s.freq = b.positive("freq", s.freq);
    s.theta_step = b.positive("theta_step", s.theta_step);
    s.phi_step = b.positive("phi_step", s.phi_step);
    s.prominence_db = b.positive("prominence_db", s.prominence_db);
    s.polarization = parse_polarization(
        b.text("polarization", s.polarization == jones::Polarization::X ? "x" : "y"),
        "sweep.polarization");
    if (!(s.f_min < s.f_max) || s.n_freq < 2) {
        config_error("sweep needs f_min < f_max and n_freq >= 2");
    }
    b.finish();
}

void parse_optimize(Block b, OptimizeBlock& o) {
    if (const json* bounds = b.child("bounds")) {
        Block bb(*bounds, "optimize.bounds");
        const auto get = [&](const char* key, optimize::Bounds& out) {
            if (const json* v = bb.child(key)) out = parse_bounds(*v, bb.where(key));
        };
        get("major_axis", o.bounds.major_axis);
        get("minor_axis", o.bounds.minor_axis);
        get("period", o.bounds.period);
        get("thickness", o.bounds.thickness);
        bb.finish();
    }
    if (const json* start = b.child("start")) {
        Block sb(*start, "optimize.start");
        optimize::DesignVector d;
        d.major_axis = sb.positive("major_axis", 3.8);
        d.minor_axis = sb.positive("minor_axis", 1.3);
        d.period = sb.positive("period", 4.0);
        d.thickness = sb.positive("thickness", 1.0);
        sb.finish();
        o.start = d;
    }
    o.budget = b.count("budget", o.budget);
    if (o.budget == 0) config_error("optimize.budget must be >= 1");
    o.threshold = b.number("threshold", o.threshold);
    const auto engine = b.text("engine", o.engine == optimize::Engine::TlModel ? "tl_model" : "solver");
    if (engine == "tl_model") {
        o.engine = optimize::Engine::TlModel;
    } else if (engine == "solver") {
        o.engine = optimize::Engine::Solver;
    } else {
        config_error("optimize.engine must be \"tl_model\" or \"solver\"");
    }
    o.f_min = b.positive("f_min", o.f_min);
    o.f_max = b.positive("f_max", o.f_max);
    o.n_freq = b.count("n_freq", o.n_freq);
    o.seed = b.count("seed", o.seed);
    if (!(o.f_min < o.f_max) || o.n_freq < 2) {
        config_error("optimize needs f_min < f_max and n_freq >= 2");
    }
    b.finish();
}

}  // namespace

RunConfig parse_config(const json& doc) {
    RunConfig c;
    Block root(doc, "");
    if (const json* v = root.child("geometry")) parse_geometry(Block(*v, "geometry"), c.geometry);
    if (const json* v = root.child("stack")) parse_stack(Block(*v, "stack"), c.stack);
    if (const json* v = root.child("solver")) parse_solver(Block(*v, "solver"), c.solver);
    if (const json* v = root.child("layout")) parse_layout(Block(*v, "layout"), c.layout);
    if (const json* v = root.child("sweep")) parse_sweep(Block(*v, "sweep"), c.sweep);
    if (const json* v = root.child("optimize")) parse_optimize(Block(*v, "optimize"), c.optimize);
    c.output = root.text("output", "");
    root.finish();
    for (const auto& [key, value] : doc.items()) c.present.insert(key);
    c.source = to_json(c);
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) config_error("cannot open config file '" + path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    json doc;
    try {
        doc = json::parse(buffer.str());
    } catch (const json::exception& e) {
        config_error("config file '" + path + "' is not valid JSON: " + e.what());
    }
    return parse_config(doc);
}

json to_json(const RunConfig& c) {
    json j;
    j["geometry"] = {{"period", c.geometry.period},
                     {"major_axis", c.geometry.major_axis},
                     {"minor_axis", c.geometry.minor_axis}};
    j["stack"] = {{"substrate", c.stack.substrate},
                  {"eps_r", c.stack.eps_r},
                  {"tan_delta", c.stack.tan_delta},
                  {"thickness", c.stack.thickness},
                  {"metal_thickness", c.stack.metal_thickness}};
    const auto& s = c.solver;
    j["solver"] = {{"resolution", s.resolution.in_mm()},
                   {"courant", s.courant},
                   {"f_min", s.f_min.in_ghz()},
                   {"f_max", s.f_max.in_ghz()},
                   {"n_freq", s.n_freq},
                   {"absorber_cells", s.absorber_cells},
                   {"decay_threshold", s.decay_threshold},
                   {"max_steps", s.max_steps},
                   {"air_gap", s.air_gap.in_mm()},
                   {"threads", s.threads},
                   {"collapse_uniform", s.collapse_uniform}};
    j["layout"] = {{"tiles_x", c.layout.tiles_x},
                   {"tiles_y", c.layout.tiles_y},
                   {"cells_per_tile", c.layout.cells_per_tile},
                   {"spectra", c.layout.spectra == SpectrumSource::Solver ? "solver" : "ideal"}};
    if (c.layout.antenna) {
        const auto& a = *c.layout.antenna;
        j["layout"]["antenna"] = {{"x0", a.x0}, {"y0", a.y0}, {"width", a.width}, {"height", a.height}};
    }
    j["sweep"] = {{"f_min", c.sweep.f_min},
                  {"f_max", c.sweep.f_max},
                  {"n_freq", c.sweep.n_freq},
                  {"freq", c.sweep.freq},
                  {"theta_step", c.sweep.theta_step},
                  {"phi_step", c.sweep.phi_step},
                  {"prominence_db", c.sweep.prominence_db},
                  {"polarization", c.sweep.polarization == jones::Polarization::X ? "x" : "y"}};
    const auto& o = c.optimize;
    const auto pair = [](const optimize::Bounds& b) { return json::array({b.lo, b.hi}); };
    j["optimize"] = {{"bounds",
                      {{"major_axis", pair(o.bounds.major_axis)},
                       {"minor_axis", pair(o.bounds.minor_axis)},
                       {"period", pair(o.bounds.period)},
                       {"thickness", pair(o.bounds.thickness)}}},
                     {"budget", o.budget},
                     {"threshold", o.threshold},
                     {"engine", o.engine == optimize::Engine::TlModel ? "tl_model" : "solver"},
                     {"f_min", o.f_min},
                     {"f_max", o.f_max},
                     {"n_freq", o.n_freq},
                     {"seed", o.seed}};
    if (o.start) {
        j["optimize"]["start"] = {{"major_axis", o.start->major_axis},
                                  {"minor_axis", o.start->minor_axis},
                                  {"period", o.start->period},
                                  {"thickness", o.start->thickness}};
    }
    j["output"] = c.output;
    return j;
}

geometry::StackUp make_stack(const StackBlock& b) {
    return {{b.substrate, b.eps_r, b.tan_delta},
            Length::mm(b.thickness),
            Length::mm(b.metal_thickness),
            true};
}

geometry::UnitCellGeometry make_cell(const RunConfig& c) {
    return geometry::build_unit_cell(Length::mm(c.geometry.period), Length::mm(c.geometry.major_axis),
                                     Length::mm(c.geometry.minor_axis), make_stack(c.stack),
                                     geometry::Handedness::Unit);
}

std::string reference_mode(const RunConfig& c) {
    const GeometryBlock g;
    const StackBlock s;
    const bool same = c.geometry.period == g.period && c.geometry.major_axis == g.major_axis &&
                      c.geometry.minor_axis == g.minor_axis && c.stack.eps_r == s.eps_r &&
                      c.stack.tan_delta == s.tan_delta && c.stack.thickness == s.thickness &&
                      c.stack.metal_thickness == s.metal_thickness;
    return same ? "published_design" : "custom";
}

}  // namespace pcm::cli
