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

#ifndef PCM_CLI_COMMANDS_HPP
#define PCM_CLI_COMMANDS_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace pcm::cli {

enum ExitCode : int { kExitOk = 0, kExitComputation = 1, kExitUsage = 2 };

/// Entry point shared by the executable and the tests. `args` excludes the
/// program name.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pcm::cli

#endif  // PCM_CLI_COMMANDS_HPP
