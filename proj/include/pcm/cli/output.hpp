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

#ifndef PCM_CLI_OUTPUT_HPP
#define PCM_CLI_OUTPUT_HPP

#include <filesystem>
#include <string>
#include <vector>

#include "pcm/jones.hpp"
#include "pcm/optimize.hpp"
#include "pcm/scatter.hpp"

namespace pcm::cli {

/// Formats a number with 9 significant digits ("%.9g").
std::string fmt(double value);

/// Writes rows as comma-separated text with LF endings.
void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

void write_text(const std::filesystem::path& path, const std::string& text);

void write_spectrum_csv(const std::filesystem::path& path, const jones::ReflectionSpectrum& s);
void write_pcr_csv(const std::filesystem::path& path, const jones::ReflectionSpectrum& s);
void write_pattern_csv(const std::filesystem::path& path, const scatter::FarFieldPattern& p);
void write_reduction_csv(const std::filesystem::path& path,
                         const std::vector<scatter::ReductionPoint>& points);
void write_trace_csv(const std::filesystem::path& path, const optimize::SearchResult& result);

struct Series {
    std::string label;
    std::vector<double> y;
};

/// Minimal line chart: shared x axis, one polyline per series.
std::string svg_line_plot(const std::string& title, const std::string& x_label,
                          const std::vector<double>& x, const std::vector<Series>& series);

}  // namespace pcm::cli

#endif  // PCM_CLI_OUTPUT_HPP
