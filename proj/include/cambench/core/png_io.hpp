// Copyright 2026 The CamBench Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "cambench/core/grid.hpp"
#include "cambench/core/saliency.hpp"

namespace cambench {

using PngText = std::vector<std::pair<std::string, std::string>>;

/// 8-bit grayscale PNG. Intensities in [0,1] are stored as round(255 v).
void write_gray_png(const std::filesystem::path& path, const Grid2D<std::uint8_t>& pixels,
                    const PngText& text = {});
Grid2D<std::uint8_t> read_gray_png(const std::filesystem::path& path);

void write_image_png(const std::filesystem::path& path, const Image& image, const PngText& text = {});
Image read_image_png(const std::filesystem::path& path);

/// Masks are written as {0, 255} and binarized at 128 on read.
void write_mask_png(const std::filesystem::path& path, const BinaryMask& mask, const PngText& text = {});
BinaryMask read_mask_png(const std::filesystem::path& path, MaskRole role);

std::uint8_t to_byte(double intensity) noexcept;

}  // namespace cambench
