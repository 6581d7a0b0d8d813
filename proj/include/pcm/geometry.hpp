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

#ifndef PCM_GEOMETRY_HPP
#define PCM_GEOMETRY_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pcm/units.hpp"

namespace pcm::geometry {

struct Material {
    std::string name;
    double eps_r = 1.0;
    double tan_delta = 0.0;
};

/// Grounded single-layer substrate. The metal thickness is kept as metadata
/// only; every model treats the patch as a zero-thickness PEC sheet.
struct StackUp {
    Material substrate;
    Length thickness;
    Length metal_thickness;
    bool ground = true;
};

void validate(const Material& material);
void validate(const StackUp& stack);

enum class Handedness { Unit, Mirror };

/// One elliptical patch centred in a square cell. Axis lengths are full
/// lengths, not semi-axes. The major axis sits at +45 deg for Unit cells and
/// -45 deg for Mirror cells.
class UnitCellGeometry {
public:
    Length period() const { return period_; }
    Length major_axis() const { return major_; }
    Length minor_axis() const { return minor_; }
    double orientation_deg() const { return orientation_deg_; }
    const StackUp& stack() const { return stack_; }
    Handedness handedness() const { return handedness_; }

    bool operator==(const UnitCellGeometry&) const;

private:
    friend UnitCellGeometry build_unit_cell(Length, Length, Length, const StackUp&, Handedness);
    friend UnitCellGeometry mirror_unit(const UnitCellGeometry&);

    Length period_;
    Length major_;
    Length minor_;
    double orientation_deg_ = 45.0;
    StackUp stack_;
    Handedness handedness_ = Handedness::Unit;
};

UnitCellGeometry build_unit_cell(Length period, Length major_axis, Length minor_axis,
                                 const StackUp& stack, Handedness handedness);

UnitCellGeometry mirror_unit(const UnitCellGeometry& cell);

/// Half-extent of the rotated ellipse's bounding box along x (or y).
Length bounding_half_extent(Length major_axis, Length minor_axis);

/// Metal pattern sampled on a square grid; sample (i, j) is centred at
/// ((i + 1/2) * resolution, (j + 1/2) * resolution) measured from the cell corner.
class PatchMask {
public:
    PatchMask(Length resolution, std::size_t nx, std::size_t ny);

    Length resolution() const { return resolution_; }
    std::size_t nx() const { return nx_; }
    std::size_t ny() const { return ny_; }

    bool at(std::size_t i, std::size_t j) const { return cells_[i * ny_ + j] != 0; }
    void set(std::size_t i, std::size_t j, bool metal) { cells_[i * ny_ + j] = metal ? 1 : 0; }

    std::size_t metal_count() const;
    double metal_area_mm2() const;
    bool uniform() const;

    /// Reflection about the cell's horizontal centre line (y -> -y).
    PatchMask flipped_y() const;

    bool operator==(const PatchMask&) const = default;

private:
    Length resolution_;
    std::size_t nx_ = 0;
    std::size_t ny_ = 0;
    std::vector<std::uint8_t> cells_;
};

PatchMask rasterize(const UnitCellGeometry& cell, Length resolution);

/// Mask with every sample set to `metal` (empty slab or fully metallised plane).
PatchMask uniform_mask(Length period, Length resolution, bool metal);

enum class TileKind { Unit, Mirror, Pec, Absent };

std::string to_string(TileKind kind);

struct Rect {
    Length x0;
    Length y0;
    Length width;
    Length height;
};

class ApertureLayout {
public:
    ApertureLayout(std::size_t tiles_x, std::size_t tiles_y, std::size_t cells_per_tile,
                   Length cell_period, std::vector<TileKind> tiles);

    std::size_t tiles_x() const { return tiles_x_; }
    std::size_t tiles_y() const { return tiles_y_; }
    std::size_t cells_per_tile() const { return cells_per_tile_; }
    Length cell_period() const { return cell_period_; }
    Length tile_pitch() const { return cell_period_ * static_cast<double>(cells_per_tile_); }
    Length width() const { return tile_pitch() * static_cast<double>(tiles_x_); }
    Length height() const { return tile_pitch() * static_cast<double>(tiles_y_); }

    TileKind at(std::size_t i, std::size_t j) const { return tiles_[i * tiles_y_ + j]; }
    std::size_t count(TileKind kind) const;

    /// Every tile swapped Unit <-> Mirror.
    ApertureLayout swapped_handedness() const;

private:
    std::size_t tiles_x_;
    std::size_t tiles_y_;
    std::size_t cells_per_tile_;
    Length cell_period_;
    std::vector<TileKind> tiles_;
};

ApertureLayout uniform_layout(std::size_t tiles_x, std::size_t tiles_y, std::size_t cells_per_tile,
                              Length cell_period, TileKind kind);

ApertureLayout build_checkerboard(std::size_t tiles_x, std::size_t tiles_y,
                                  std::size_t cells_per_tile, const UnitCellGeometry& cell,
                                  const std::optional<Rect>& antenna_region = std::nullopt);

}  // namespace pcm::geometry

#endif  // PCM_GEOMETRY_HPP
