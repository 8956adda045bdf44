// Copyright 2026 The CamBench Authors
// SPDX-License-Identifier: Apache-2.0

#include "cambench/core/saliency.hpp"

#include <algorithm>
#include <cmath>

namespace cambench {

std::string_view to_string(MaskRole role) {
    switch (role) {
        case MaskRole::Finder: return "finder";
        case MaskRole::Timing: return "timing";
        case MaskRole::Box: return "box";
        case MaskRole::Background: return "background";
        case MaskRole::StructureUnion: return "structure_union";
    }
    return "unknown";
}

std::size_t BinaryMask::count() const noexcept {
    std::size_t n = 0;
    for (auto v : grid.values()) n += v;
    return n;
}

StructureMasks StructureMasks::zeros(int height, int width) {
    StructureMasks masks;
    masks.finder.grid = MaskGrid(height, width, 0);
    masks.timing.grid = MaskGrid(height, width, 0);
    masks.box.grid = MaskGrid(height, width, 0);
    return masks;
}

BinaryMask StructureMasks::background() const {
    BinaryMask out{box.grid, MaskRole::Background};
    for (auto& v : out.grid.values()) v = static_cast<std::uint8_t>(1 - v);
    return out;
}

BinaryMask StructureMasks::structure_union() const {
    require_same_shape(finder.grid, timing.grid, "finder/timing mask shape mismatch");
    BinaryMask out{finder.grid, MaskRole::StructureUnion};
    const auto t = timing.grid.values();
    auto o = out.grid.values();
    for (std::size_t i = 0; i < o.size(); ++i) o[i] = static_cast<std::uint8_t>(o[i] | t[i]);
    return out;
}

SaliencyField normalize(const Image& raw, double epsilon) {
    if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
        throw BenchError(ErrorCode::InvalidArgument, "epsilon must be positive and finite");
    }
    if (raw.empty()) throw BenchError(ErrorCode::InvalidDimensions, "empty saliency grid");

    double lo = raw[0];
    double hi = raw[0];
    for (double v : raw.values()) {
        if (!std::isfinite(v)) throw BenchError(ErrorCode::InvalidSaliency, "non-finite saliency value");
        if (v < 0.0) throw BenchError(ErrorCode::InvalidSaliency, "negative saliency value");
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }

    SaliencyField field;
    field.raw = raw;
    field.epsilon = epsilon;
    field.degenerate = (hi == lo);
    field.normalized = Image(raw.height(), raw.width(), 0.0);

    const double denom = (hi - lo) + epsilon;
    double sum = 0.0;
    const auto src = raw.values();
    auto dst = field.normalized.values();
    for (std::size_t i = 0; i < src.size(); ++i) {
        // Clamp guards the last ulp: (v - lo) / (range + eps) can never exceed 1
        // in exact arithmetic.
        const double n = std::min(1.0, (src[i] - lo) / denom);
        dst[i] = n;
        sum += n;
    }
    field.total_mass = sum + epsilon;
    return field;
}

BinaryMask align_mask(const BinaryMask& mask, int target_h, int target_w) {
    if (target_h < 1 || target_w < 1 || target_h > kMaxGridSide || target_w > kMaxGridSide) {
        throw BenchError(ErrorCode::InvalidDimensions, "align_mask target dims must be >= 1");
    }
    if (mask.grid.empty()) throw BenchError(ErrorCode::InvalidDimensions, "align_mask on empty mask");

    const std::int64_t sh = mask.height();
    const std::int64_t sw = mask.width();
    if (sh == target_h && sw == target_w) return mask;

    // floor((i + 0.5) * src / dst) == floor((2i + 1) * src / (2 dst)), exact in integers.
    std::vector<int> col_map(static_cast<std::size_t>(target_w));
    for (int x = 0; x < target_w; ++x) {
        col_map[static_cast<std::size_t>(x)] = static_cast<int>(((2 * x + 1) * sw) / (2 * std::int64_t{target_w}));
    }
    BinaryMask out{MaskGrid(target_h, target_w, 0), mask.role};
    for (int y = 0; y < target_h; ++y) {
        const int sy = static_cast<int>(((2 * y + 1) * sh) / (2 * std::int64_t{target_h}));
        for (int x = 0; x < target_w; ++x) {
            // Binarize at 0.5: any nonzero source byte maps to 1.
            out.grid(y, x) = mask.grid(sy, col_map[static_cast<std::size_t>(x)]) != 0 ? 1 : 0;
        }
    }
    return out;
}

StructureMasks align_masks(const StructureMasks& masks, int target_h, int target_w) {
    StructureMasks out;
    out.finder = align_mask(masks.finder, target_h, target_w);
    out.timing = align_mask(masks.timing, target_h, target_w);
    out.box = align_mask(masks.box, target_h, target_w);
    return out;
}

double inner_product(const Image& a, const Image& b) {
    require_same_shape(a, b, "inner_product shape mismatch");
    const auto av = a.values();
    const auto bv = b.values();
    double sum = 0.0;
    for (std::size_t i = 0; i < av.size(); ++i) sum += av[i] * bv[i];
    return sum;
}

double inner_product(const Image& a, const BinaryMask& b) {
    require_same_shape(a, b.grid, "inner_product shape mismatch");
    const auto av = a.values();
    const auto bv = b.grid.values();
    double sum = 0.0;
    for (std::size_t i = 0; i < av.size(); ++i) {
        if (bv[i]) sum += av[i];
    }
    return sum;
}

}  // namespace cambench
