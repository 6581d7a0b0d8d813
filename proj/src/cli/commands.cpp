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

#include "pcm/cli/commands.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <functional>
#include <map>
#include <iostream>
#include <optional>
#include <sstream>

#include "pcm/cli/cache.hpp"
#include "pcm/cli/config.hpp"
#include "pcm/cli/output.hpp"
#include "pcm/error.hpp"
#include "pcm/optimize.hpp"
#include "pcm/scatter.hpp"
#include "pcm/solver.hpp"

namespace pcm::cli {

namespace fs = std::filesystem;

namespace {

struct Options {
    std::string config_path;
    std::string out_dir;
    std::string cache_dir;
    std::optional<double> freq_ghz;
    std::optional<std::size_t> threads;
    std::optional<std::uint64_t> seed;
    bool plot = false;
};

// Everything a command hands back for the manifest.
struct Report {
    std::vector<std::string> outputs;
    std::vector<std::string> warnings;
    json extra = json::object();
};

struct Context {
    std::string command;
    Options options;
    RunConfig config;
    fs::path out_dir;
    std::ostream& out;
    std::ostream& err;
};

[[noreturn]] void usage_error(const std::string& message) {
    throw Error(ErrorCode::ConfigError, message);
}

RunConfig resolve_config(const Options& o, const std::vector<std::string>& required) {
    RunConfig c;
    if (o.config_path.empty()) {
        if (!required.empty()) usage_error("--config is required for this command");
        c = parse_config(json::object());
    } else {
        c = load_config(o.config_path);
    }
    for (const auto& block : required) {
        if (!c.present.count(block)) usage_error("config is missing the '" + block + "' block");
    }
    if (o.freq_ghz) {
        if (!(*o.freq_ghz > 0.0)) usage_error("--freq must be positive");
        c.sweep.freq = *o.freq_ghz;
    }
    if (o.threads) {
        if (*o.threads == 0) usage_error("--threads must be >= 1");
        c.solver.threads = *o.threads;
    }
    if (o.seed) c.optimize.seed = *o.seed;
    if (!o.out_dir.empty()) c.output = o.out_dir;
    c.source = to_json(c);
    return c;
}

std::string config_hash(const RunConfig& c) {
    json j = to_json(c);
    j.erase("output");
    j["solver"].erase("threads");
    return sha256_hex(j.dump());
}

struct SolvedCell {
    jones::ReflectionSpectrum spectrum;
    bool cache_hit = false;
    std::vector<std::string> warnings;
    json run_info = json::object();
};

SolvedCell solve_cell(const Context& ctx) {
    const auto cell = make_cell(ctx.config);
    json key_doc = {{"kind", "cell_spectrum"},
                    {"version", kToolVersion},
                    {"geometry", ctx.config.source["geometry"]},
                    {"stack", ctx.config.source["stack"]},
                    {"solver", ctx.config.source["solver"]}};
    key_doc["solver"].erase("threads");
    const std::string key = sha256_hex(key_doc.dump());
    json info = {{"geometry_hash", sha256_hex(json{{"geometry", key_doc["geometry"]},
                                                   {"stack", key_doc["stack"]}}
                                                  .dump())}};

    std::optional<SpectrumCache> cache;
    if (!ctx.options.cache_dir.empty()) cache.emplace(ctx.options.cache_dir);
    if (cache) {
        if (auto hit = cache->lookup(key)) {
            auto warnings = solver::spectrum_warnings(*hit, cell.period());
            return {std::move(*hit), true, std::move(warnings), std::move(info)};
        }
    }
    auto run = solver::run_unit_cell(cell, ctx.config.solver);
    if (cache) cache->store(key, run.spectrum);
    info["steps"] = {{"x", run.x_run.steps}, {"y", run.y_run.steps}};
    info["residual_energy"] = {{"x", run.x_run.residual}, {"y", run.y_run.residual}};
    return {std::move(run.spectrum), false, std::move(run.warnings), std::move(info)};
}

jones::Jones2 ideal_converter() {
    return jones::rotate_basis(jones::Jones2::diag(-1.0, 1.0, jones::Basis::UV), 45.0);
}

struct LayoutSpectra {
    jones::ReflectionSpectrum unit;
    jones::ReflectionSpectrum mirror;
    bool cache_hit = false;
    std::vector<std::string> warnings;
};

LayoutSpectra layout_spectra(const Context& ctx) {
    if (ctx.config.layout.spectra == SpectrumSource::Ideal) {
        auto unit = scatter::constant_spectrum(ideal_converter(), Frequency::ghz(1.0),
                                               Frequency::ghz(1000.0));
        auto mirror = unit.mirrored();
        return {std::move(unit), std::move(mirror), false, {}};
    }
    auto solved = solve_cell(ctx);
    auto mirror = solved.spectrum.mirrored();
    return {std::move(solved.spectrum), std::move(mirror), solved.cache_hit,
            std::move(solved.warnings)};
}

geometry::ApertureLayout make_layout(const RunConfig& c) {
    std::optional<geometry::Rect> antenna;
    if (c.layout.antenna) {
        const auto& a = *c.layout.antenna;
        antenna = geometry::Rect{Length::mm(a.x0), Length::mm(a.y0), Length::mm(a.width),
                                 Length::mm(a.height)};
    }
    return geometry::build_checkerboard(c.layout.tiles_x, c.layout.tiles_y, c.layout.cells_per_tile,
                                        make_cell(c), antenna);
}

scatter::FarFieldPattern pattern_at(const Context& ctx, const LayoutSpectra& spectra,
                                    const geometry::ApertureLayout& layout) {
    const auto f = Frequency::ghz(ctx.config.sweep.freq);
    const auto aperture =
        scatter::paint_aperture(layout, spectra.unit, spectra.mirror, f, ctx.config.sweep.polarization);
    return scatter::far_field(aperture, scatter::uniform_grid(0.0, 89.0, ctx.config.sweep.theta_step),
                              scatter::uniform_grid(0.0, 360.0 - ctx.config.sweep.phi_step,
                                                    ctx.config.sweep.phi_step));
}

void maybe_plot(const Context& ctx, Report& report, const std::string& name,
                const std::function<std::string()>& render) {
    if (!ctx.options.plot) return;
    write_text(ctx.out_dir / name, render());
    report.outputs.push_back(name);
}

Report cmd_unitcell(const Context& ctx) {
    auto solved = solve_cell(ctx);
    const auto& s = solved.spectrum;
    write_spectrum_csv(ctx.out_dir / "spectrum.csv", s);
    write_pcr_csv(ctx.out_dir / "pcr.csv", s);
    Report report{{"spectrum.csv", "pcr.csv"}, solved.warnings, {{"cache_hit", solved.cache_hit}}};

    std::vector<Frequency> freqs;
    std::vector<double> pcr;
    std::vector<double> ghz;
    std::vector<double> abs_xy;
    std::vector<double> abs_yy;
    for (const auto& sample : s.samples()) {
        freqs.push_back(sample.f);
        ghz.push_back(sample.f.in_ghz());
        pcr.push_back(jones::pcr(sample.j, jones::Polarization::Y));
        abs_xy.push_back(std::abs(sample.j.xy()));
        abs_yy.push_back(std::abs(sample.j.yy()));
    }
    const double bw = optimize::fractional_bandwidth(freqs, pcr, 0.9);
    report.extra["fractional_bandwidth_pcr_0.9"] = bw;
    report.extra.update(solved.run_info);
    ctx.out << "unit cell solved over " << s.f_min().in_ghz() << "-" << s.f_max().in_ghz()
            << " GHz (" << s.size() << " samples" << (solved.cache_hit ? ", cached" : "")
            << "); PCR>=0.9 fractional bandwidth " << fmt(bw) << "\n";
    maybe_plot(ctx, report, "spectrum.svg", [&] {
        return svg_line_plot("Reflection spectrum, y incidence", "frequency (GHz)", ghz,
                             {{"|r_xy|", abs_xy}, {"|r_yy|", abs_yy}, {"PCR", pcr}});
    });
    return report;
}

Report cmd_array(const Context& ctx) {
    const auto layout = make_layout(ctx.config);
    const auto spectra = layout_spectra(ctx);
    const auto pattern = pattern_at(ctx, spectra, layout);
    write_pattern_csv(ctx.out_dir / "pattern.csv", pattern);
    Report report{{"pattern.csv"}, spectra.warnings, {{"cache_hit", spectra.cache_hit}}};

    double peak = -1e300;
    for (std::size_t t = 0; t < pattern.theta_deg.size(); ++t) {
        for (std::size_t k = 0; k < pattern.phi_deg.size(); ++k) {
            peak = std::max(peak, pattern.sigma_dbsm(t, k));
        }
    }
    report.extra["peak_sigma_dbsm"] = peak;
    ctx.out << "bistatic pattern at " << fmt(ctx.config.sweep.freq) << " GHz: "
            << pattern.theta_deg.size() * pattern.phi_deg.size() << " directions, peak "
            << fmt(peak) << " dBsm\n";
    maybe_plot(ctx, report, "pattern_cut.svg", [&] {
        std::vector<Series> cuts;
        for (const double phi : {0.0, 45.0, 90.0}) {
            const auto it = std::find_if(pattern.phi_deg.begin(), pattern.phi_deg.end(),
                                         [&](double p) { return std::abs(p - phi) < 1e-9; });
            if (it == pattern.phi_deg.end()) continue;
            const auto k = static_cast<std::size_t>(it - pattern.phi_deg.begin());
            Series s{"phi = " + fmt(phi), {}};
            for (std::size_t t = 0; t < pattern.theta_deg.size(); ++t) {
                s.y.push_back(pattern.sigma_dbsm(t, k));
            }
            cuts.push_back(std::move(s));
        }
        return svg_line_plot("Bistatic RCS (dBsm)", "theta (deg)", pattern.theta_deg, cuts);
    });
    return report;
}

Report cmd_reduce(const Context& ctx) {
    const auto layout = make_layout(ctx.config);
    const auto spectra = layout_spectra(ctx);
    const auto& sw = ctx.config.sweep;
    const auto points = scatter::monostatic_reduction(layout, spectra.unit, spectra.mirror,
                                                      Frequency::ghz(sw.f_min),
                                                      Frequency::ghz(sw.f_max), sw.n_freq,
                                                      sw.polarization);
    write_reduction_csv(ctx.out_dir / "reduction.csv", points);
    Report report{{"reduction.csv"}, spectra.warnings, {{"cache_hit", spectra.cache_hit}}};

    const auto worst = std::max_element(points.begin(), points.end(), [](const auto& a, const auto& b) {
        return a.delta_db < b.delta_db;
    });
    const auto best = std::min_element(points.begin(), points.end(), [](const auto& a, const auto& b) {
        return a.delta_db < b.delta_db;
    });
    report.extra["weakest_reduction_db"] = worst->delta_db;
    report.extra["strongest_reduction_db"] = best->delta_db;
    ctx.out << "broadside reduction over " << fmt(sw.f_min) << "-" << fmt(sw.f_max)
            << " GHz: between " << fmt(worst->delta_db) << " dB (" << fmt(worst->f.in_ghz())
            << " GHz) and " << fmt(best->delta_db) << " dB (" << fmt(best->f.in_ghz())
            << " GHz)\n";
    maybe_plot(ctx, report, "reduction.svg", [&] {
        std::vector<double> ghz;
        Series layout_s{"layout (dBsm)", {}};
        Series pec_s{"PEC plate (dBsm)", {}};
        Series delta_s{"reduction (dB)", {}};
        for (const auto& p : points) {
            ghz.push_back(p.f.in_ghz());
            layout_s.y.push_back(p.sigma_layout_dbsm);
            pec_s.y.push_back(p.sigma_pec_dbsm);
            delta_s.y.push_back(p.delta_db);
        }
        return svg_line_plot("Monostatic broadside RCS", "frequency (GHz)", ghz,
                             {layout_s, pec_s, delta_s});
    });
    return report;
}

Report cmd_lobes(const Context& ctx) {
    const auto layout = make_layout(ctx.config);
    const auto spectra = layout_spectra(ctx);
    const auto pattern = pattern_at(ctx, spectra, layout);
    const auto f = Frequency::ghz(ctx.config.sweep.freq);
    const auto predicted = scatter::predict_lobes(layout.tile_pitch(), f);
    const auto found = scatter::find_peaks(pattern, ctx.config.sweep.prominence_db);

    const auto nearest = [](const scatter::Direction& d, const auto& others) {
        double best = 180.0;
        for (const auto& o : others) {
            best = std::min(best, scatter::angular_separation_deg(
                                      d, scatter::Direction{o.theta_deg, o.phi_deg}));
        }
        return best;
    };
    std::string text = "kind,theta_deg,phi_deg,sigma_dbsm,nearest_deg\n";
    ctx.out << "kind       theta_deg  phi_deg  sigma_dbsm  nearest_deg\n";
    const auto row = [&](const char* kind, double theta, double phi, double sigma, double near) {
        text += std::string(kind) + "," + fmt(theta) + "," + fmt(phi) + "," + fmt(sigma) + "," +
                fmt(near) + "\n";
        char line[128];
        std::snprintf(line, sizeof(line), "%-9s  %9.3f  %7.3f  %10.3f  %11.3f\n", kind, theta, phi,
                      sigma, near);
        ctx.out << line;
    };
    for (const auto& d : predicted) {
        row("predicted", d.theta_deg, d.phi_deg, std::nan(""), nearest(d, found));
    }
    for (const auto& p : found) {
        row("found", p.theta_deg, p.phi_deg, p.sigma_dbsm,
            nearest(scatter::Direction{p.theta_deg, p.phi_deg}, predicted));
    }
    write_text(ctx.out_dir / "lobes.csv", text);
    return {{"lobes.csv"},
            spectra.warnings,
            {{"cache_hit", spectra.cache_hit},
             {"predicted", predicted.size()},
             {"found", found.size()}}};
}

Report cmd_optimize(const Context& ctx) {
    const auto& o = ctx.config.optimize;
    optimize::EvaluationContext ev;
    ev.substrate = make_stack(ctx.config.stack).substrate;
    ev.band = {Frequency::ghz(o.f_min), Frequency::ghz(o.f_max), o.n_freq};
    ev.threshold = o.threshold;
    ev.engine = o.engine;
    ev.solver = ctx.config.solver;
    const auto start = o.start.value_or(optimize::DesignVector{
        ctx.config.geometry.major_axis, ctx.config.geometry.minor_axis, ctx.config.geometry.period,
        ctx.config.stack.thickness});
    optimize::SearchOptions options;
    options.budget = o.budget;
    options.seed = o.seed;
    const auto result = optimize::optimize_design(o.bounds, start, ev, options);

    write_trace_csv(ctx.out_dir / "trace.csv", result.search);
    const json best = {{"major_axis", result.best.major_axis},
                       {"minor_axis", result.best.minor_axis},
                       {"period", result.best.period},
                       {"thickness", result.best.thickness},
                       {"bandwidth", result.bandwidth},
                       {"evaluations", result.search.evaluations}};
    write_text(ctx.out_dir / "best_design.json", best.dump(2) + "\n");
    ctx.out << "best fractional bandwidth " << fmt(result.bandwidth) << " after "
            << result.search.evaluations << " evaluations: major " << fmt(result.best.major_axis)
            << " mm, minor " << fmt(result.best.minor_axis) << " mm, period "
            << fmt(result.best.period) << " mm, thickness " << fmt(result.best.thickness)
            << " mm\n";
    Report report{{"trace.csv", "best_design.json"}, {}, {{"best", best}}};
    maybe_plot(ctx, report, "trace.svg", [&] {
        std::vector<double> it;
        Series value{"bandwidth", {}};
        Series best_s{"best so far", {}};
        for (const auto& e : result.search.trace) {
            it.push_back(static_cast<double>(e.evaluation));
            value.y.push_back(e.value);
            best_s.y.push_back(e.best);
        }
        return svg_line_plot("Optimization trace", "evaluation", it, {value, best_s});
    });
    return report;
}

struct Check {
    std::string name;
    double value;
    double expected;
    double tolerance;
    bool pass() const { return std::abs(value - expected) <= tolerance; }
};

std::vector<Check> builtin_checks() {
    using jones::Basis;
    using jones::Jones2;
    using jones::Polarization;
    std::vector<Check> checks;

    checks.push_back({"pcr_ideal_converter", jones::pcr(ideal_converter(), Polarization::Y), 1.0, 0.0});
    checks.push_back({"pcr_0.9487_0.3162",
                      jones::pcr(Jones2::make(0.0, 0.9487, 0.0, 0.3162, Basis::XY), Polarization::Y),
                      0.9487 * 0.9487 / (0.9487 * 0.9487 + 0.3162 * 0.3162), 1e-12});
    checks.push_back({"plate_28.7x41.6mm_30GHz_dbsm",
                      scatter::pec_plate_rcs(Length::mm(28.7), Length::mm(41.6), Frequency::ghz(30.0)),
                      10.0 * std::log10(4.0 * kPi * std::pow(28.7e-3 * 41.6e-3, 2) /
                                        std::pow(kSpeedOfLight / 30e9, 2)),
                      1e-9});

    const auto stack = geometry::StackUp{{"RT5880", 2.2, 0.0009}, Length::mm(1.0),
                                         Length::mm(0.035), true};
    const auto cell = geometry::build_unit_cell(Length::mm(4.0), Length::mm(3.8), Length::mm(1.3),
                                                stack, geometry::Handedness::Unit);
    const auto unit = scatter::constant_spectrum(ideal_converter(), Frequency::ghz(1.0),
                                                 Frequency::ghz(100.0));
    const auto layout = geometry::build_checkerboard(3, 5, 2, cell);
    const auto red = scatter::monostatic_reduction(layout, unit, unit.mirrored(), Frequency::ghz(37.75),
                                                   Frequency::ghz(37.75), 1);
    checks.push_back({"checkerboard_3x5_broadside_db", red.front().delta_db,
                      20.0 * std::log10(1.0 / 15.0), 0.01});

    const auto f = Frequency::ghz(37.75);
    scatter::ApertureField ap(Length::mm(1.0), 12, 20, 1, f, Polarization::Y);
    for (std::size_t i = 0; i < 12; ++i) {
        for (std::size_t j = 0; j < 20; ++j) {
            ap.co(i, j) = std::polar(1.0 + 0.1 * static_cast<double>((i * 7 + j * 3) % 5),
                                     0.3 * static_cast<double>(i) - 0.2 * static_cast<double>(j));
            ap.cross(i, j) = std::polar(0.5, 0.1 * static_cast<double>(i * j));
        }
    }
    const auto grid_t = scatter::uniform_grid(0.0, 89.0, 7.0);
    const auto grid_p = scatter::uniform_grid(0.0, 350.0, 10.0);
    const auto fast = scatter::far_field(ap, grid_t, grid_p, scatter::FarFieldMethod::Fast);
    const auto direct = scatter::far_field(ap, grid_t, grid_p, scatter::FarFieldMethod::Direct);
    double worst = 0.0;
    for (std::size_t i = 0; i < fast.co.size(); ++i) {
        const double scale = std::max(std::abs(direct.co[i]), 1e-30);
        worst = std::max(worst, std::abs(fast.co[i] - direct.co[i]) / scale);
    }
    checks.push_back({"far_field_fast_vs_direct_rel", worst, 0.0, 1e-9});

    solver::SolverConfig sc;
    sc.resolution = Length::mm(0.1);
    sc.n_freq = 9;
    const auto slab = solver::run_mask(geometry::uniform_mask(Length::mm(4.0), sc.resolution, false),
                                       stack, sc);
    double mag_err = 0.0;
    double phase_err = 0.0;
    for (const auto& s : slab.spectrum.samples()) {
        const auto ref = jones::grounded_slab_reflection(stack, s.f).r;
        mag_err = std::max(mag_err, std::abs(std::abs(s.j.xx()) - std::abs(ref)) / std::abs(ref));
        phase_err = std::max(phase_err, std::abs(jones::phase_deg(s.j.xx() / ref)));
    }
    checks.push_back({"empty_slab_magnitude_rel", mag_err, 0.0, 0.02});
    checks.push_back({"empty_slab_phase_deg", phase_err, 0.0, 5.0});

    const auto quad = optimize::pattern_search(
        [](std::span<const double> x) { return -(x[0] - 0.3) * (x[0] - 0.3); }, {{-1.0, 1.0}}, {0.9},
        {500, 1, 0.25, 1e-9, 10000});
    checks.push_back({"pattern_search_quadratic_argmax", quad.best_x[0], 0.3, 1e-6});

    const auto round_trip = decode_spectrum(encode_spectrum(slab.spectrum));
    checks.push_back({"cache_round_trip_exact", round_trip && *round_trip == slab.spectrum ? 1.0 : 0.0,
                      1.0, 0.0});
    return checks;
}

Report cmd_validate(const Context& ctx, bool& all_passed) {
    const auto checks = builtin_checks();
    std::string text = "check,value,expected,tolerance,pass\n";
    all_passed = true;
    for (const auto& c : checks) {
        all_passed = all_passed && c.pass();
        ctx.out << (c.pass() ? "PASS " : "FAIL ") << c.name << " value=" << fmt(c.value)
                << " expected=" << fmt(c.expected) << " tol=" << fmt(c.tolerance) << "\n";
        text += c.name + "," + fmt(c.value) + "," + fmt(c.expected) + "," + fmt(c.tolerance) + "," +
                (c.pass() ? "1" : "0") + "\n";
    }
    Report report;
    if (!ctx.out_dir.empty()) {
        write_text(ctx.out_dir / "validate.csv", text);
        report.outputs.push_back("validate.csv");
    }
    report.extra["all_passed"] = all_passed;
    return report;
}

void write_manifest(const Context& ctx, const Report& report) {
    json m = {{"tool", kToolName},
              {"version", kToolVersion},
              {"command", ctx.command},
              {"config_hash", config_hash(ctx.config)},
              {"reference_mode", reference_mode(ctx.config)},
              {"outputs", report.outputs},
              {"warnings", report.warnings},
              {"results", report.extra},
              {"config", ctx.config.source}};
    write_text(ctx.out_dir / "manifest.json", m.dump(2) + "\n");
}

const std::vector<std::string>& required_blocks(const std::string& command) {
    static const std::map<std::string, std::vector<std::string>> table = {
        {"unitcell", {"geometry", "stack"}},
        {"array", {"geometry", "stack", "layout"}},
        {"reduce", {"geometry", "stack", "layout"}},
        {"lobes", {"geometry", "stack", "layout"}},
        {"optimize", {"stack", "optimize"}},
        {"validate", {}},
    };
    return table.at(command);
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Polarization-conversion metasurface scattering toolkit", kToolName};
    app.set_version_flag("--version", std::string(kToolName) + " " + kToolVersion);
    app.require_subcommand(1);

    Options options;
    const std::vector<std::pair<std::string, std::string>> commands = {
        {"unitcell", "solve the unit cell and write its reflection spectrum"},
        {"array", "bistatic far-field pattern of the checkerboard at one frequency"},
        {"reduce", "broadside RCS reduction against a same-size PEC plate over the sweep band"},
        {"lobes", "predicted versus located scattering lobes"},
        {"optimize", "search the unit-cell geometry for the widest conversion band"},
        {"validate", "run the built-in oracle and property checks"},
    };
    for (const auto& [name, help] : commands) {
        auto* sub = app.add_subcommand(name, help);
        sub->add_option("--config", options.config_path, "JSON run configuration");
        sub->add_option("--out", options.out_dir, "output directory (overrides the config)");
        sub->add_option("--cache", options.cache_dir, "spectrum cache directory");
        sub->add_option_function<double>("--freq", [&](double v) { options.freq_ghz = v; },
                                         "frequency in GHz for single-frequency commands");
        sub->add_option_function<std::size_t>("--threads", [&](std::size_t v) { options.threads = v; },
                                              "worker threads");
        sub->add_option_function<std::uint64_t>("--seed", [&](std::uint64_t v) { options.seed = v; },
                                                "optimizer seed");
        sub->add_flag("--plot", options.plot, "also write SVG plots");
    }

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForVersion&) {
        out << kToolName << " " << kToolVersion << "\n";
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n";
        return kExitUsage;
    }

    const std::string command = app.get_subcommands().front()->get_name();
    try {
        RunConfig config = resolve_config(options, required_blocks(command));
        fs::path out_dir = config.output;
        if (out_dir.empty() && command != "validate") {
            usage_error("no output directory: pass --out or set \"output\" in the config");
        }
        if (!out_dir.empty()) {
            std::error_code ec;
            fs::create_directories(out_dir, ec);
            if (ec) throw Error(ErrorCode::IoError, "cannot create output directory " + out_dir.string());
        }
        Context ctx{command, options, std::move(config), out_dir, out, err};

        bool passed = true;
        Report report;
        if (command == "unitcell") {
            report = cmd_unitcell(ctx);
        } else if (command == "array") {
            report = cmd_array(ctx);
        } else if (command == "reduce") {
            report = cmd_reduce(ctx);
        } else if (command == "lobes") {
            report = cmd_lobes(ctx);
        } else if (command == "optimize") {
            report = cmd_optimize(ctx);
        } else {
            report = cmd_validate(ctx, passed);
        }
        for (const auto& w : report.warnings) err << w << "\n";
        if (!ctx.out_dir.empty()) write_manifest(ctx, report);
        return passed ? kExitOk : kExitComputation;
    } catch (const Error& e) {
        err << e.what() << "\n";
        return e.code() == ErrorCode::ConfigError ? kExitUsage : kExitComputation;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitComputation;
    }
}

}  // namespace pcm::cli
