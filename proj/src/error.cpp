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

#include "pcm/error.hpp"

namespace pcm {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::FitError: return "FIT_ERROR";
        case ErrorCode::AxisError: return "AXIS_ERROR";
        case ErrorCode::ResolutionError: return "RESOLUTION_ERROR";
        case ErrorCode::RegionError: return "REGION_ERROR";
        case ErrorCode::InvalidArgument: return "INVALID_ARGUMENT";
        case ErrorCode::Degenerate: return "DEGENERATE";
        case ErrorCode::BasisError: return "BASIS_ERROR";
        case ErrorCode::StabilityError: return "STABILITY_ERROR";
        case ErrorCode::NonConverged: return "NONCONVERGED";
        case ErrorCode::BandError: return "BAND_ERROR";
        case ErrorCode::SamplingError: return "SAMPLING_ERROR";
        case ErrorCode::NoFeasible: return "NO_FEASIBLE";
        case ErrorCode::ConfigError: return "CONFIG_ERROR";
        case ErrorCode::IoError: return "IO_ERROR";
    }
    return "UNKNOWN_ERROR";
}

}  // namespace pcm
