// Copyright 2026 The CamBench Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "cambench/core/grid.hpp"

namespace cambench {

// CBSM v1 layout, all integers little-endian:
//   0  "CBQR" magic
//   4  u8  version (1)
//   5  u8  dtype (1 = float32)
//   6  u16 reserved (0)
//   8  u32 H
//  12  u32 W
//  16  H*W float32, row-major
inline constexpr std::size_t kCbsmHeaderSize = 16;

/// Saliency map as stored on disk (float32 exactly as written).
struct CbsmMap {
    int height = 0;
    int width = 0;
    std::vector<float> values;

    Image to_image() const;
    static CbsmMap from_image(const Image& image);
};

std::vector<std::uint8_t> encode_cbsm(const CbsmMap& map);
/// Throws FormatError on bad magic/version/dtype/reserved or size mismatch.
CbsmMap decode_cbsm(std::span<const std::uint8_t> bytes);

CbsmMap read_cbsm(const std::filesystem::path& path);
void write_cbsm(const std::filesystem::path& path, const CbsmMap& map);

}  // namespace cambench
