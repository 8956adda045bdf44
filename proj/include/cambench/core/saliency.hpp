// Copyright 2026 The CamBench Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string_view>

#include "cambench/core/grid.hpp"

namespace cambench {

inline constexpr double kDefaultEpsilon = 1e-6;

/// Min-max normalized saliency plus its total mass S = sum(normalized) + eps.
struct SaliencyField {
    Image raw;
    Image normalized;
    double total_mass = 0.0;
    double epsilon = kDefaultEpsilon;
    /// Set when the raw field is constant; normalized is then all zeros.
    bool degenerate = false;
};

enum class MaskRole { Finder, Timing, Box, Background, StructureUnion };

std::string_view to_string(MaskRole role);

struct BinaryMask {
    MaskGrid grid;
    MaskRole role = MaskRole::Box;

    int height() const noexcept { return grid.height(); }
    int width() const noexcept { return grid.width(); }
    std::size_t count() const noexcept;
};

/// Finder, timing and box masks of one sample. All share (H, W); negatives
/// carry all-zero masks.
struct StructureMasks {
    BinaryMask finder{{}, MaskRole::Finder};
    BinaryMask timing{{}, MaskRole::Timing};
    BinaryMask box{{}, MaskRole::Box};

    int height() const noexcept { return box.height(); }
    int width() const noexcept { return box.width(); }

    static StructureMasks zeros(int height, int width);

    /// 1 - box.
    BinaryMask background() const;
    /// min(finder + timing, 1).
    BinaryMask structure_union() const;

    bool operator==(const StructureMasks& other) const {
        return finder.grid == other.finder.grid && timing.grid == other.timing.grid &&
               box.grid == other.box.grid;
    }
};

/// Throws InvalidSaliency on negative or non-finite input.
SaliencyField normalize(const Image& raw, double epsilon = kDefaultEpsilon);

/// Center-aligned nearest-neighbor resize: out(y, x) = src(floor((y + 0.5) * sh / th), ...).
BinaryMask align_mask(const BinaryMask& mask, int target_h, int target_w);

/// Aligns all three masks to (target_h, target_w); no-op copy if already there.
StructureMasks align_masks(const StructureMasks& masks, int target_h, int target_w);

/// Row-major sequential double accumulation of elementwise products.
double inner_product(const Image& a, const Image& b);
double inner_product(const Image& a, const BinaryMask& b);

}  // namespace cambench
