// Copyright 2026 The CamBench Authors
// SPDX-License-Identifier: Apache-2.0

#include "cambench/core/cbsm.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

namespace cambench {

namespace {

constexpr std::uint8_t kMagic[4] = {0x43, 0x42, 0x51, 0x52};
constexpr std::uint8_t kVersion = 1;
constexpr std::uint8_t kDtypeFloat32 = 1;

void put_u32(std::uint8_t* out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out[i] = static_cast<std::uint8_t>(v >> (8 * i));
}

std::uint32_t get_u32(std::span<const std::uint8_t> in, std::size_t offset) {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(in[offset + i]) << (8 * i);
    return v;
}

}  // namespace

Image CbsmMap::to_image() const {
    Image image(height, width, 0.0);
    for (std::size_t i = 0; i < values.size(); ++i) image[i] = static_cast<double>(values[i]);
    return image;
}

CbsmMap CbsmMap::from_image(const Image& image) {
    CbsmMap map{image.height(), image.width(), {}};
    map.values.reserve(image.size());
    for (double v : image.values()) map.values.push_back(static_cast<float>(v));
    return map;
}

std::vector<std::uint8_t> encode_cbsm(const CbsmMap& map) {
    if (map.height < 1 || map.width < 1 || map.height > kMaxGridSide || map.width > kMaxGridSide) {
        throw BenchError(ErrorCode::InvalidDimensions, "CBSM dims out of range");
    }
    const auto n = static_cast<std::size_t>(map.height) * static_cast<std::size_t>(map.width);
    if (map.values.size() != n) throw BenchError(ErrorCode::InvalidDimensions, "CBSM value count != H*W");

    std::vector<std::uint8_t> out(kCbsmHeaderSize + 4 * n, 0);
    std::memcpy(out.data(), kMagic, sizeof kMagic);
    out[4] = kVersion;
    out[5] = kDtypeFloat32;
    put_u32(out.data() + 8, static_cast<std::uint32_t>(map.height));
    put_u32(out.data() + 12, static_cast<std::uint32_t>(map.width));
    for (std::size_t i = 0; i < n; ++i) put_u32(out.data() + kCbsmHeaderSize + 4 * i, std::bit_cast<std::uint32_t>(map.values[i]));
    return out;
}

CbsmMap decode_cbsm(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < kCbsmHeaderSize) throw BenchError(ErrorCode::FormatError, "CBSM truncated header");
    if (std::memcmp(bytes.data(), kMagic, 4) != 0) throw BenchError(ErrorCode::FormatError, "CBSM bad magic");
    if (bytes[4] != kVersion) throw BenchError(ErrorCode::FormatError, "CBSM unsupported version");
    if (bytes[5] != kDtypeFloat32) throw BenchError(ErrorCode::FormatError, "CBSM unsupported dtype");
    if (bytes[6] != 0 || bytes[7] != 0) throw BenchError(ErrorCode::FormatError, "CBSM reserved field nonzero");

    const std::uint32_t h = get_u32(bytes, 8);
    const std::uint32_t w = get_u32(bytes, 12);
    if (h < 1 || w < 1 || h > kMaxGridSide || w > kMaxGridSide) {
        throw BenchError(ErrorCode::FormatError, "CBSM dims out of range");
    }
    const std::size_t n = static_cast<std::size_t>(h) * w;
    if (bytes.size() != kCbsmHeaderSize + 4 * n) throw BenchError(ErrorCode::FormatError, "CBSM payload size mismatch");

    CbsmMap map{static_cast<int>(h), static_cast<int>(w), std::vector<float>(n)};
    for (std::size_t i = 0; i < n; ++i) {
        map.values[i] = std::bit_cast<float>(get_u32(bytes, kCbsmHeaderSize + 4 * i));
    }
    return map;
}

CbsmMap read_cbsm(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw BenchError(ErrorCode::IoError, "cannot open " + path.string());
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return decode_cbsm(bytes);
}

void write_cbsm(const std::filesystem::path& path, const CbsmMap& map) {
    const auto bytes = encode_cbsm(map);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw BenchError(ErrorCode::IoError, "cannot write " + path.string());
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw BenchError(ErrorCode::IoError, "short write to " + path.string());
}

}  // namespace cambench
