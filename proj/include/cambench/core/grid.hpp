// Copyright 2026 The CamBench Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "cambench/core/error.hpp"

namespace cambench {

inline constexpr int kMaxGridSide = 8192;

/// Row-major H x W scalar grid. Rows index y, columns index x.
template <typename T>
class Grid2D {
public:
    Grid2D() = default;

    Grid2D(int height, int width, T fill = T{}) : height_(height), width_(width) {
        check_dims(height, width);
        values_.assign(static_cast<std::size_t>(height) * static_cast<std::size_t>(width), fill);
    }

    Grid2D(int height, int width, std::vector<T> values)
        : height_(height), width_(width), values_(std::move(values)) {
        check_dims(height, width);
        if (values_.size() != static_cast<std::size_t>(height) * static_cast<std::size_t>(width)) {
            throw BenchError(ErrorCode::InvalidDimensions, "grid value count does not equal H*W");
        }
    }

    int height() const noexcept { return height_; }
    int width() const noexcept { return width_; }
    std::size_t size() const noexcept { return values_.size(); }
    bool empty() const noexcept { return values_.empty(); }

    T& operator()(int y, int x) { return values_[index(y, x)]; }
    const T& operator()(int y, int x) const { return values_[index(y, x)]; }

    T& operator[](std::size_t i) { return values_[i]; }
    const T& operator[](std::size_t i) const { return values_[i]; }

    std::span<T> values() noexcept { return values_; }
    std::span<const T> values() const noexcept { return values_; }
    T* data() noexcept { return values_.data(); }
    const T* data() const noexcept { return values_.data(); }

    bool same_shape(const Grid2D& other) const noexcept {
        return height_ == other.height_ && width_ == other.width_;
    }
    template <typename U>
    bool same_shape(const Grid2D<U>& other) const noexcept {
        return height_ == other.height() && width_ == other.width();
    }

    bool operator==(const Grid2D&) const = default;

private:
    std::size_t index(int y, int x) const noexcept {
        return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x);
    }

    static void check_dims(int height, int width) {
        if (height < 1 || width < 1 || height > kMaxGridSide || width > kMaxGridSide) {
            throw BenchError(ErrorCode::InvalidDimensions, "grid dimensions must lie in [1, 8192]");
        }
    }

    int height_ = 0;
    int width_ = 0;
    std::vector<T> values_;
};

using Image = Grid2D<double>;
using MaskGrid = Grid2D<std::uint8_t>;

template <typename A, typename B>
void require_same_shape(const Grid2D<A>& a, const Grid2D<B>& b, const char* what) {
    if (a.height() != b.height() || a.width() != b.width()) {
        throw BenchError(ErrorCode::ShapeError, what);
    }
}

}  // namespace cambench
