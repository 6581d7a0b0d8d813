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

#include "pcm/cli/cache.hpp"

#include <openssl/evp.h>
#include <unistd.h>

#include <atomic>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

#include "pcm/error.hpp"

namespace pcm::cli {

namespace {

constexpr char kMagic[8] = {'P', 'C', 'M', 'S', 'P', 'E', 'C', '1'};
constexpr std::size_t kDigestBytes = 32;

std::string sha256_raw(const std::string& bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int length = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest, &length, EVP_sha256(), nullptr) != 1 ||
        length != kDigestBytes) {
        throw Error(ErrorCode::IoError, "SHA-256 computation failed");
    }
    return std::string(reinterpret_cast<const char*>(digest), length);
}

template <typename T>
void put(std::string& out, T value) {
    char buf[sizeof(T)];
    std::memcpy(buf, &value, sizeof(T));
    out.append(buf, sizeof(T));
}

class Reader {
public:
    explicit Reader(std::string_view data) : data_(data) {}

    template <typename T>
    bool get(T& value) {
        if (data_.size() - pos_ < sizeof(T)) return false;
        std::memcpy(&value, data_.data() + pos_, sizeof(T));
        pos_ += sizeof(T);
        return true;
    }

    bool get_bytes(std::size_t n, std::string& out) {
        if (data_.size() - pos_ < n) return false;
        out.assign(data_.data() + pos_, n);
        pos_ += n;
        return true;
    }

    bool done() const { return pos_ == data_.size(); }

private:
    std::string_view data_;
    std::size_t pos_ = 0;
};

}  // namespace

std::string sha256_hex(const std::string& bytes) {
    static constexpr char kHex[] = "0123456789abcdef";
    std::string out;
    for (const unsigned char c : sha256_raw(bytes)) {
        out.push_back(kHex[c >> 4]);
        out.push_back(kHex[c & 0xF]);
    }
    return out;
}

std::string encode_spectrum(const jones::ReflectionSpectrum& s) {
    std::string payload(kMagic, sizeof(kMagic));
    put<std::uint32_t>(payload, s.basis() == jones::Basis::XY ? 0u : 1u);
    put<std::uint64_t>(payload, s.reference_plane().size());
    payload += s.reference_plane();
    put<std::uint64_t>(payload, s.size());
    for (const auto& sample : s.samples()) {
        put(payload, sample.f.hertz);
        for (const auto& z : sample.j.r) {
            put(payload, z.real());
            put(payload, z.imag());
        }
    }
    return payload + sha256_raw(payload);
}

std::optional<jones::ReflectionSpectrum> decode_spectrum(const std::string& bytes) {
    if (bytes.size() < sizeof(kMagic) + kDigestBytes) return std::nullopt;
    const std::string payload = bytes.substr(0, bytes.size() - kDigestBytes);
    if (sha256_raw(payload) != bytes.substr(bytes.size() - kDigestBytes)) return std::nullopt;
    if (std::memcmp(payload.data(), kMagic, sizeof(kMagic)) != 0) return std::nullopt;

    Reader r(std::string_view(payload).substr(sizeof(kMagic)));
    std::uint32_t basis = 0;
    std::uint64_t plane_len = 0;
    std::string plane;
    std::uint64_t n = 0;
    if (!r.get(basis) || basis > 1 || !r.get(plane_len) || !r.get_bytes(plane_len, plane) ||
        !r.get(n)) {
        return std::nullopt;
    }
    std::vector<jones::SpectrumSample> samples;
    const auto b = basis == 0 ? jones::Basis::XY : jones::Basis::UV;
    for (std::uint64_t i = 0; i < n; ++i) {
        double f = 0.0;
        if (!r.get(f)) return std::nullopt;
        jones::Jones2 j;
        j.basis = b;
        for (auto& z : j.r) {
            double re = 0.0;
            double im = 0.0;
            if (!r.get(re) || !r.get(im)) return std::nullopt;
            z = {re, im};
        }
        samples.push_back({Frequency::hz(f), j});
    }
    if (!r.done()) return std::nullopt;
    try {
        return jones::ReflectionSpectrum(std::move(samples), b, plane);
    } catch (const Error&) {
        return std::nullopt;
    }
}

SpectrumCache::SpectrumCache(std::filesystem::path dir) : dir_(std::move(dir)) {
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec) throw Error(ErrorCode::IoError, "cannot create cache directory " + dir_.string());
}

std::filesystem::path SpectrumCache::entry_path(const std::string& key) const {
    return dir_ / (key + ".spec");
}

std::optional<jones::ReflectionSpectrum> SpectrumCache::lookup(const std::string& key) const {
    const auto path = entry_path(key);
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    std::stringstream buffer;
    buffer << in.rdbuf();
    in.close();
    auto spectrum = decode_spectrum(buffer.str());
    if (!spectrum) {
        std::error_code ec;
        std::filesystem::remove(path, ec);
    }
    return spectrum;
}

void SpectrumCache::store(const std::string& key, const jones::ReflectionSpectrum& spectrum) const {
    static std::atomic<unsigned> counter{0};
    const auto final_path = entry_path(key);
    auto tmp = final_path;
    tmp += ".tmp." + std::to_string(::getpid()) + "." + std::to_string(counter++);
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        const std::string bytes = encode_spectrum(spectrum);
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        if (!out) throw Error(ErrorCode::IoError, "cannot write cache entry " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, final_path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw Error(ErrorCode::IoError, "cannot publish cache entry " + final_path.string());
    }
}

}  // namespace pcm::cli
