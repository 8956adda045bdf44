// Copyright 2026 The CamBench Authors
// SPDX-License-Identifier: Apache-2.0

#include "cambench/core/png_io.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <csetjmp>
#include <cstdio>
#include <memory>

namespace cambench {

namespace {

struct FileCloser {
    void operator()(std::FILE* f) const noexcept {
        if (f) std::fclose(f);
    }
};

}  // namespace

std::uint8_t to_byte(double intensity) noexcept {
    const double v = std::clamp(intensity, 0.0, 1.0);
    return static_cast<std::uint8_t>(std::lround(v * 255.0));
}

namespace {

// C-style so no object with a destructor lives across setjmp/longjmp.
bool write_png_stream(std::FILE* file, const std::uint8_t* pixels, png_uint_32 height, png_uint_32 width,
                      png_text* text, int text_count) {
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) return false;
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_write_struct(&png, nullptr);
        return false;
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        return false;
    }
    png_init_io(png, file);
    png_set_IHDR(png, info, width, height, 8, PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
                 PNG_FILTER_TYPE_DEFAULT);
    if (text_count > 0) png_set_text(png, info, text, text_count);
    png_write_info(png, info);
    for (png_uint_32 y = 0; y < height; ++y) png_write_row(png, pixels + static_cast<std::size_t>(y) * width);
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
    return true;
}

}  // namespace

void write_gray_png(const std::filesystem::path& path, const Grid2D<std::uint8_t>& pixels, const PngText& text) {
    std::unique_ptr<std::FILE, FileCloser> file(std::fopen(path.c_str(), "wb"));
    if (!file) throw BenchError(ErrorCode::IoError, "cannot write " + path.string());
    std::vector<png_text> chunks(text.size());
    for (std::size_t i = 0; i < text.size(); ++i) {
        chunks[i].compression = PNG_TEXT_COMPRESSION_NONE;
        chunks[i].key = const_cast<char*>(text[i].first.c_str());
        chunks[i].text = const_cast<char*>(text[i].second.c_str());
        chunks[i].text_length = text[i].second.size();
    }
    if (!write_png_stream(file.get(), pixels.data(), static_cast<png_uint_32>(pixels.height()),
                          static_cast<png_uint_32>(pixels.width()), chunks.data(), static_cast<int>(chunks.size()))) {
        throw BenchError(ErrorCode::IoError, "libpng error writing " + path.string());
    }
    if (std::fflush(file.get()) != 0) throw BenchError(ErrorCode::IoError, "flush failed for " + path.string());
}

Grid2D<std::uint8_t> read_gray_png(const std::filesystem::path& path) {
    png_image image{};
    image.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_file(&image, path.c_str())) {
        throw BenchError(ErrorCode::IoError, "cannot read PNG " + path.string() + ": " + image.message);
    }
    image.format = PNG_FORMAT_GRAY;
    const int h = static_cast<int>(image.height);
    const int w = static_cast<int>(image.width);
    if (h < 1 || w < 1 || h > kMaxGridSide || w > kMaxGridSide) {
        png_image_free(&image);
        throw BenchError(ErrorCode::InvalidDimensions, "PNG dims out of range: " + path.string());
    }
    Grid2D<std::uint8_t> pixels(h, w, 0);
    if (!png_image_finish_read(&image, nullptr, pixels.data(), 0, nullptr)) {
        png_image_free(&image);
        throw BenchError(ErrorCode::IoError, "PNG decode failed " + path.string() + ": " + image.message);
    }
    return pixels;
}

void write_image_png(const std::filesystem::path& path, const Image& image, const PngText& text) {
    Grid2D<std::uint8_t> pixels(image.height(), image.width(), 0);
    for (std::size_t i = 0; i < image.size(); ++i) pixels[i] = to_byte(image[i]);
    write_gray_png(path, pixels, text);
}

Image read_image_png(const std::filesystem::path& path) {
    const auto pixels = read_gray_png(path);
    Image image(pixels.height(), pixels.width(), 0.0);
    for (std::size_t i = 0; i < pixels.size(); ++i) image[i] = pixels[i] / 255.0;
    return image;
}

void write_mask_png(const std::filesystem::path& path, const BinaryMask& mask, const PngText& text) {
    Grid2D<std::uint8_t> pixels(mask.height(), mask.width(), 0);
    for (std::size_t i = 0; i < pixels.size(); ++i) pixels[i] = mask.grid[i] ? 255 : 0;
    write_gray_png(path, pixels, text);
}

BinaryMask read_mask_png(const std::filesystem::path& path, MaskRole role) {
    auto pixels = read_gray_png(path);
    for (auto& v : pixels.values()) v = v >= 128 ? 1 : 0;
    return BinaryMask{std::move(pixels), role};
}

}  // namespace cambench
