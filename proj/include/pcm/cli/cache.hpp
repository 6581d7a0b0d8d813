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

#ifndef PCM_CLI_CACHE_HPP
#define PCM_CLI_CACHE_HPP

#include <filesystem>
#include <optional>
#include <string>

#include "pcm/jones.hpp"

namespace pcm::cli {

/// Lower-case hex SHA-256 of a byte string.
std::string sha256_hex(const std::string& bytes);

/// On-disk store of solved spectra keyed by content hash. Each entry is a
/// single file written to a temporary name and renamed into place.
class SpectrumCache {
public:
    explicit SpectrumCache(std::filesystem::path dir);

    const std::filesystem::path& dir() const { return dir_; }
    std::filesystem::path entry_path(const std::string& key) const;

    /// Returns the stored spectrum, or nullopt on a miss. Entries that fail
    /// to decode are deleted and reported as a miss.
    std::optional<jones::ReflectionSpectrum> lookup(const std::string& key) const;

    void store(const std::string& key, const jones::ReflectionSpectrum& spectrum) const;

private:
    std::filesystem::path dir_;
};

std::string encode_spectrum(const jones::ReflectionSpectrum& spectrum);
std::optional<jones::ReflectionSpectrum> decode_spectrum(const std::string& bytes);

}  // namespace pcm::cli

#endif  // PCM_CLI_CACHE_HPP
