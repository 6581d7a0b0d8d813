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

#include "pcm/cli/output.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "pcm/error.hpp"

namespace pcm::cli {

std::string fmt(double value) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.9g", value);
    return buf;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << text;
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
}

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
    std::string text;
    for (std::size_t c = 0; c < header.size(); ++c) {
        if (c) text += ',';
        text += header[c];
    }
    text += '\n';
    for (const auto& row : rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) text += ',';
            text += fmt(row[c]);
        }
        text += '\n';
    }
    write_text(path, text);
}

void write_spectrum_csv(const std::filesystem::path& path, const jones::ReflectionSpectrum& s) {
    std::vector<std::vector<double>> rows;
    for (const auto& sample : s.samples()) {
        const auto& j = sample.j;
        rows.push_back({sample.f.in_ghz(), j.xx().real(), j.xx().imag(), j.xy().real(),
                        j.xy().imag(), j.yx().real(), j.yx().imag(), j.yy().real(), j.yy().imag(),
                        jones::pcr(j, jones::Polarization::Y)});
    }
    write_csv(path,
              {"freq_GHz", "re_rxx", "im_rxx", "re_rxy", "im_rxy", "re_ryx", "im_ryx", "re_ryy",
               "im_ryy", "pcr_y"},
              rows);
}

void write_pcr_csv(const std::filesystem::path& path, const jones::ReflectionSpectrum& s) {
    std::vector<std::vector<double>> rows;
    for (const auto& sample : s.samples()) {
        const auto& j = sample.j;
        rows.push_back({sample.f.in_ghz(), jones::pcr(j, jones::Polarization::X),
                        jones::pcr(j, jones::Polarization::Y), std::abs(j.xy()), std::abs(j.yy()),
                        jones::phase_deg(j.xy())});
    }
    write_csv(path, {"freq_GHz", "pcr_x", "pcr_y", "abs_rxy", "abs_ryy", "phase_rxy_deg"}, rows);
}

void write_pattern_csv(const std::filesystem::path& path, const scatter::FarFieldPattern& p) {
    std::vector<std::vector<double>> rows;
    rows.reserve(p.theta_deg.size() * p.phi_deg.size());
    for (std::size_t t = 0; t < p.theta_deg.size(); ++t) {
        for (std::size_t k = 0; k < p.phi_deg.size(); ++k) {
            const auto i = p.index(t, k);
            rows.push_back({p.theta_deg[t], p.phi_deg[k], p.sigma_dbsm(t, k), p.co[i].real(),
                            p.co[i].imag(), p.cross[i].real(), p.cross[i].imag()});
        }
    }
    write_csv(path, {"theta_deg", "phi_deg", "sigma_dbsm", "re_co", "im_co", "re_cross", "im_cross"},
              rows);
}

void write_reduction_csv(const std::filesystem::path& path,
                         const std::vector<scatter::ReductionPoint>& points) {
    std::vector<std::vector<double>> rows;
    for (const auto& p : points) {
        rows.push_back({p.f.in_ghz(), p.sigma_layout_dbsm, p.sigma_pec_dbsm, p.delta_db});
    }
    write_csv(path, {"freq_GHz", "sigma_layout_dbsm", "sigma_pec_dbsm", "delta_db"}, rows);
}

void write_trace_csv(const std::filesystem::path& path, const optimize::SearchResult& result) {
    std::vector<std::vector<double>> rows;
    for (const auto& e : result.trace) {
        std::vector<double> row{static_cast<double>(e.evaluation), static_cast<double>(e.restart)};
        row.insert(row.end(), e.x.begin(), e.x.end());
        row.push_back(e.value);
        row.push_back(e.best);
        rows.push_back(std::move(row));
    }
    write_csv(path,
              {"iteration", "restart", "major_axis_mm", "minor_axis_mm", "period_mm", "thickness_mm",
               "bandwidth", "best_bandwidth"},
              rows);
}

std::string svg_line_plot(const std::string& title, const std::string& x_label,
                          const std::vector<double>& x, const std::vector<Series>& series) {
    constexpr double kW = 720.0;
    constexpr double kH = 420.0;
    constexpr double kLeft = 70.0;
    constexpr double kRight = 160.0;
    constexpr double kTop = 40.0;
    constexpr double kBottom = 50.0;
    static const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};

    double y_lo = std::numeric_limits<double>::infinity();
    double y_hi = -y_lo;
    for (const auto& s : series) {
        for (const double v : s.y) {
            if (!std::isfinite(v)) continue;
            y_lo = std::min(y_lo, v);
            y_hi = std::max(y_hi, v);
        }
    }
    if (!(y_lo < y_hi)) {
        y_lo = std::isfinite(y_lo) ? y_lo - 1.0 : 0.0;
        y_hi = y_lo + 2.0;
    }
    const double x_lo = x.empty() ? 0.0 : x.front();
    const double x_hi = x.size() < 2 ? x_lo + 1.0 : x.back();
    const auto px = [&](double v) { return kLeft + (v - x_lo) / (x_hi - x_lo) * (kW - kLeft - kRight); };
    const auto py = [&](double v) { return kH - kBottom - (v - y_lo) / (y_hi - y_lo) * (kH - kTop - kBottom); };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH
        << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg << "<text x=\"" << kW / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" << title
        << "</text>\n";
    svg << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << kW - kLeft - kRight
        << "\" height=\"" << kH - kTop - kBottom << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int t = 0; t <= 4; ++t) {
        const double xv = x_lo + (x_hi - x_lo) * t / 4.0;
        const double yv = y_lo + (y_hi - y_lo) * t / 4.0;
        svg << "<text x=\"" << px(xv) << "\" y=\"" << kH - kBottom + 16
            << "\" text-anchor=\"middle\">" << fmt(xv) << "</text>\n";
        svg << "<text x=\"" << kLeft - 6 << "\" y=\"" << py(yv) + 4 << "\" text-anchor=\"end\">"
            << fmt(yv) << "</text>\n";
    }
    svg << "<text x=\"" << (kW - kRight + kLeft) / 2 << "\" y=\"" << kH - 12
        << "\" text-anchor=\"middle\">" << x_label << "</text>\n";
    for (std::size_t s = 0; s < series.size(); ++s) {
        const char* color = kColors[s % std::size(kColors)];
        svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < x.size() && i < series[s].y.size(); ++i) {
            if (!std::isfinite(series[s].y[i])) continue;
            svg << px(x[i]) << ',' << py(series[s].y[i]) << ' ';
        }
        svg << "\"/>\n";
        const double ly = kTop + 16.0 + 18.0 * static_cast<double>(s);
        svg << "<line x1=\"" << kW - kRight + 12 << "\" y1=\"" << ly - 4 << "\" x2=\""
            << kW - kRight + 32 << "\" y2=\"" << ly - 4 << "\" stroke=\"" << color
            << "\" stroke-width=\"2\"/>\n";
        svg << "<text x=\"" << kW - kRight + 38 << "\" y=\"" << ly << "\">" << series[s].label
            << "</text>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

}  // namespace pcm::cli
