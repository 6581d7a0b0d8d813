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

#include "pcm/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "pcm/error.hpp"

namespace pcm::geometry {

void validate(const Material& material) {
    if (!(material.eps_r >= 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "relative permittivity must be >= 1");
    }
    if (!(material.tan_delta >= 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "loss tangent must be >= 0");
    }
}

void validate(const StackUp& stack) {
    validate(stack.substrate);
    if (!(stack.thickness.metres > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "substrate thickness must be positive");
    }
    if (!(stack.metal_thickness.metres >= 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "metal thickness must be >= 0");
    }
}

Length bounding_half_extent(Length major_axis, Length minor_axis) {
    const double a = major_axis.metres / 2.0;
    const double b = minor_axis.metres / 2.0;
    return Length::m(std::sqrt((a * a + b * b) / 2.0));
}

bool UnitCellGeometry::operator==(const UnitCellGeometry& o) const {
    return period_ == o.period_ && major_ == o.major_ && minor_ == o.minor_ &&
           orientation_deg_ == o.orientation_deg_ && handedness_ == o.handedness_ &&
           stack_.substrate.name == o.stack_.substrate.name &&
           stack_.substrate.eps_r == o.stack_.substrate.eps_r &&
           stack_.substrate.tan_delta == o.stack_.substrate.tan_delta &&
           stack_.thickness == o.stack_.thickness &&
           stack_.metal_thickness == o.stack_.metal_thickness && stack_.ground == o.stack_.ground;
}

UnitCellGeometry build_unit_cell(Length period, Length major_axis, Length minor_axis,
                                 const StackUp& stack, Handedness handedness) {
    if (!(period.metres > 0.0) || !(major_axis.metres > 0.0) || !(minor_axis.metres > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "cell lengths must be positive");
    }
    validate(stack);
    if (minor_axis > major_axis) {
        throw Error(ErrorCode::AxisError, "minor axis " + std::to_string(minor_axis.in_mm()) +
                                              " mm exceeds major axis " +
                                              std::to_string(major_axis.in_mm()) + " mm");
    }
    const Length half = bounding_half_extent(major_axis, minor_axis);
    if (half > period / 2.0) {
        throw Error(ErrorCode::FitError,
                    "rotated ellipse half-extent " + std::to_string(half.in_mm()) +
                        " mm exceeds half period " + std::to_string(period.in_mm() / 2.0) + " mm");
    }
    UnitCellGeometry cell;
    cell.period_ = period;
    cell.major_ = major_axis;
    cell.minor_ = minor_axis;
    cell.stack_ = stack;
    cell.handedness_ = handedness;
    cell.orientation_deg_ = handedness == Handedness::Unit ? 45.0 : -45.0;
    return cell;
}

UnitCellGeometry mirror_unit(const UnitCellGeometry& cell) {
    UnitCellGeometry out = cell;
    out.handedness_ =
        cell.handedness_ == Handedness::Unit ? Handedness::Mirror : Handedness::Unit;
    out.orientation_deg_ = -cell.orientation_deg_;
    return out;
}

PatchMask::PatchMask(Length resolution, std::size_t nx, std::size_t ny)
    : resolution_(resolution), nx_(nx), ny_(ny), cells_(nx * ny, 0) {
    if (nx == 0 || ny == 0) throw Error(ErrorCode::ResolutionError, "empty mask");
}

std::size_t PatchMask::metal_count() const {
    return static_cast<std::size_t>(std::count(cells_.begin(), cells_.end(), std::uint8_t{1}));
}

double PatchMask::metal_area_mm2() const {
    const double r = resolution_.in_mm();
    return static_cast<double>(metal_count()) * r * r;
}

bool PatchMask::uniform() const {
    return std::all_of(cells_.begin(), cells_.end(), [&](auto c) { return c == cells_.front(); });
}

PatchMask PatchMask::flipped_y() const {
    PatchMask out(resolution_, nx_, ny_);
    for (std::size_t i = 0; i < nx_; ++i) {
        for (std::size_t j = 0; j < ny_; ++j) out.set(i, ny_ - 1 - j, at(i, j));
    }
    return out;
}

namespace {

std::size_t samples_per_period(Length period, Length resolution) {
    if (!(resolution.metres > 0.0)) {
        throw Error(ErrorCode::ResolutionError, "resolution must be positive");
    }
    const double ratio = period / resolution;
    const double n = std::round(ratio);
    if (n < 1.0 || std::abs(n * resolution.metres - period.metres) > 1e-3 * period.metres) {
        throw Error(ErrorCode::ResolutionError,
                    "resolution " + std::to_string(resolution.in_mm()) +
                        " mm does not divide period " + std::to_string(period.in_mm()) + " mm");
    }
    return static_cast<std::size_t>(n);
}

}  // namespace

PatchMask rasterize(const UnitCellGeometry& cell, Length resolution) {
    const std::size_t n = samples_per_period(cell.period(), resolution);
    PatchMask mask(resolution, n, n);
    const auto [c, s] = cos_sin_deg(cell.orientation_deg());
    const double a = cell.major_axis().metres / 2.0;
    const double b = cell.minor_axis().metres / 2.0;
    const double res = resolution.metres;
    const auto centre = [&](std::size_t i) {
        // (2i + 1 - n) is an integer, so mirrored samples land on exactly negated coordinates.
        return (static_cast<double>(2 * i + 1) - static_cast<double>(n)) * 0.5 * res;
    };
    for (std::size_t i = 0; i < n; ++i) {
        const double x = centre(i);
        for (std::size_t j = 0; j < n; ++j) {
            const double y = centre(j);
            const double u = c * x + s * y;
            const double v = -s * x + c * y;
            const double q = (u * u) / (a * a) + (v * v) / (b * b);
            mask.set(i, j, q <= 1.0);
        }
    }
    return mask;
}

PatchMask uniform_mask(Length period, Length resolution, bool metal) {
    const std::size_t n = samples_per_period(period, resolution);
    PatchMask mask(resolution, n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) mask.set(i, j, metal);
    }
    return mask;
}

std::string to_string(TileKind kind) {
    switch (kind) {
        case TileKind::Unit: return "UNIT";
        case TileKind::Mirror: return "MIRROR";
        case TileKind::Pec: return "PEC";
        case TileKind::Absent: return "ABSENT";
    }
    return "?";
}

ApertureLayout::ApertureLayout(std::size_t tiles_x, std::size_t tiles_y,
                               std::size_t cells_per_tile, Length cell_period,
                               std::vector<TileKind> tiles)
    : tiles_x_(tiles_x),
      tiles_y_(tiles_y),
      cells_per_tile_(cells_per_tile),
      cell_period_(cell_period),
      tiles_(std::move(tiles)) {
    if (tiles_x == 0 || tiles_y == 0 || cells_per_tile == 0) {
        throw Error(ErrorCode::InvalidArgument, "layout needs at least one tile and one cell");
    }
    if (!(cell_period.metres > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "cell period must be positive");
    }
    if (tiles_.size() != tiles_x * tiles_y) {
        throw Error(ErrorCode::InvalidArgument, "tile grid size mismatch");
    }
}

std::size_t ApertureLayout::count(TileKind kind) const {
    return static_cast<std::size_t>(std::count(tiles_.begin(), tiles_.end(), kind));
}

ApertureLayout ApertureLayout::swapped_handedness() const {
    std::vector<TileKind> tiles = tiles_;
    for (auto& t : tiles) {
        if (t == TileKind::Unit) {
            t = TileKind::Mirror;
        } else if (t == TileKind::Mirror) {
            t = TileKind::Unit;
        }
    }
    return ApertureLayout(tiles_x_, tiles_y_, cells_per_tile_, cell_period_, std::move(tiles));
}

ApertureLayout uniform_layout(std::size_t tiles_x, std::size_t tiles_y, std::size_t cells_per_tile,
                              Length cell_period, TileKind kind) {
    return ApertureLayout(tiles_x, tiles_y, cells_per_tile, cell_period,
                          std::vector<TileKind>(tiles_x * tiles_y, kind));
}

ApertureLayout build_checkerboard(std::size_t tiles_x, std::size_t tiles_y,
                                  std::size_t cells_per_tile, const UnitCellGeometry& cell,
                                  const std::optional<Rect>& antenna_region) {
    if (tiles_x == 0 || tiles_y == 0 || cells_per_tile == 0) {
        throw Error(ErrorCode::InvalidArgument, "tiles_x, tiles_y and cells_per_tile must be >= 1");
    }
    const Length pitch = cell.period() * static_cast<double>(cells_per_tile);
    const double width = pitch.metres * static_cast<double>(tiles_x);
    const double height = pitch.metres * static_cast<double>(tiles_y);

    std::vector<TileKind> tiles(tiles_x * tiles_y);
    for (std::size_t i = 0; i < tiles_x; ++i) {
        for (std::size_t j = 0; j < tiles_y; ++j) {
            tiles[i * tiles_y + j] = (i + j) % 2 == 0 ? TileKind::Unit : TileKind::Mirror;
        }
    }

    if (antenna_region) {
        const Rect& r = *antenna_region;
        const double tol = 1e-12;
        const double x1 = r.x0.metres + r.width.metres;
        const double y1 = r.y0.metres + r.height.metres;
        if (!(r.width.metres > 0.0) || !(r.height.metres > 0.0) || r.x0.metres < -tol ||
            r.y0.metres < -tol || x1 > width + tol || y1 > height + tol) {
            throw Error(ErrorCode::RegionError, "antenna region exceeds the aperture extent");
        }
        // A tile becomes PEC when it overlaps the region with positive area.
        for (std::size_t i = 0; i < tiles_x; ++i) {
            const double tx0 = pitch.metres * static_cast<double>(i);
            const double tx1 = tx0 + pitch.metres;
            for (std::size_t j = 0; j < tiles_y; ++j) {
                const double ty0 = pitch.metres * static_cast<double>(j);
                const double ty1 = ty0 + pitch.metres;
                const double ox = std::min(tx1, x1) - std::max(tx0, r.x0.metres);
                const double oy = std::min(ty1, y1) - std::max(ty0, r.y0.metres);
                if (ox > tol && oy > tol) tiles[i * tiles_y + j] = TileKind::Pec;
            }
        }
    }
    return ApertureLayout(tiles_x, tiles_y, cells_per_tile, cell.period(), std::move(tiles));
}

}  // namespace pcm::geometry
