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

// Internal: the 3-D Yee grid behind the unit-cell solver.
//
// Layout along z (cell index k, spacing dz = dx):
//   k = 0            PEC ground
//   0 < k < ks       substrate
//   k = ks           patch plane (metal edges forced to zero)
//   k = kb           total-field / scattered-field boundary
//   k = km           monitor plane (scattered field only)
//   kp <= k < nz     CPML absorber
//   k = nz           PEC backing
// x and y are periodic with no phase shift (normal incidence).

#ifndef PCM_SOLVER_YEE_GRID_HPP
#define PCM_SOLVER_YEE_GRID_HPP

#include <cstddef>
#include <vector>

#include "pcm/jones.hpp"
#include "pcm/solver.hpp"

namespace pcm::solver::detail {

struct GridSpec {
    std::size_t nx = 1;
    std::size_t ny = 1;
    std::size_t ks = 0;
    std::size_t kb = 0;
    std::size_t km = 0;
    std::size_t kp = 0;
    std::size_t nz = 0;
    double dx = 0.0;
    double dt = 0.0;
    double eps_r = 1.0;
    double sigma = 0.0;  // substrate conductivity, S/m
    double alpha_max = 0.0;
    // Tangential E edges on the patch plane that sit on metal.
    std::vector<unsigned char> pec_ex;
    std::vector<unsigned char> pec_ey;
};

struct Pulse {
    double t0 = 0.0;
    double tau = 0.0;
    double fc = 0.0;
    double value(double t) const;
    double end_time() const { return 2.0 * t0; }
};

Pulse make_pulse(const SolverConfig& config);

GridSpec make_grid_spec(const geometry::PatchMask& mask, const geometry::StackUp& stack,
                        const SolverConfig& config);

FieldRecord run_grid(const GridSpec& spec, const Pulse& pulse, jones::Polarization pol,
                     const SolverConfig& config);

}  // namespace pcm::solver::detail

#endif  // PCM_SOLVER_YEE_GRID_HPP
