// Copyright 2026 The CamBench Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cambench/core/grid.hpp"
#include "cambench/core/saliency.hpp"
#include "cambench/qr/qr_matrix.hpp"

namespace cambench::qr {

inline constexpr int kQuietZoneModules = 4;
inline constexpr int kDefaultCanvas = 224;

enum class BackgroundKind { Flat, Gradient, BlockTexture };

std::string_view to_string(BackgroundKind kind);
BackgroundKind parse_background_kind(std::string_view text);

struct Background {
    BackgroundKind kind = BackgroundKind::Flat;
    /// Flat level, or the gradient start / texture mean.
    double level = 0.5;
    /// Gradient end level.
    double level_end = 0.5;
    /// Gradient direction in degrees (0 = left to right).
    double angle_deg = 0.0;
    /// Texture block side in pixels and +/- amplitude around `level`.
    int block_px = 8;
    double amplitude = 0.1;
};

struct SceneParams {
    int height = kDefaultCanvas;
    int width = kDefaultCanvas;
    int module_px = 4;
    /// Top-left pixel of the first symbol module (quiet zone lies outside it).
    int origin_y = 0;
    int origin_x = 0;
    Background background;
    double dark_level = 0.1;
    double light_level = 0.9;
    std::uint64_t seed = 0;
};

enum class NegativeKind { Checkerboard, BlockNoise, Grating };

std::string_view to_string(NegativeKind kind);
NegativeKind parse_negative_kind(std::string_view text);

struct NegativeSpec {
    NegativeKind kind = NegativeKind::Checkerboard;
    /// Checkerboard/block cell or grating period in pixels; drawn from the
    /// scene seed in [3, 16] when unset.
    std::optional<int> cell_px;
};

/// Provenance of one synthesized scene before distortion.
struct SceneProvenance {
    std::optional<QrSpec> qr;
    std::optional<NegativeSpec> negative;
    SceneParams scene;
    std::uint64_t seed = 0;
};

struct SampleRecord {
    std::string id;
    Image image;
    StructureMasks masks;
    int label = 0;
    /// Mean background intensity; used as out-of-frame fill by warps.
    double background_level = 0.5;
    SceneProvenance provenance;
};

/// Background field alone (no symbol), deterministic in params.
Image render_background(const SceneParams& params);

/// Renders the matrix into a scene with pixel-exact masks. Throws DoesNotFit
/// when symbol plus quiet zone does not fit the canvas.
SampleRecord compose_scene(const ModuleMatrix& matrix, const SceneParams& params);

SampleRecord make_negative(const NegativeSpec& spec, const SceneParams& params);

/// Knobs for randomized per-index synthesis.
struct SynthesisOptions {
    int height = kDefaultCanvas;
    int width = kDefaultCanvas;
    std::vector<int> versions = {1, 2, 3, 4};
    std::vector<EccLevel> ecc_levels = {EccLevel::L, EccLevel::M, EccLevel::Q, EccLevel::H};
    std::optional<int> mask_pattern;
    int min_module_px = 3;
    int max_module_px = 6;
    /// Fraction of positives; labels are interleaved so counts differ by <= 1.
    double positive_fraction = 0.5;
};

/// Sample `index` of a dataset seeded by `seed`; pure in (options, seed, index).
SampleRecord synthesize_sample(const SynthesisOptions& options, std::uint64_t seed, std::size_t index);

/// Label of sample `index` for the given positive fraction.
int label_for_index(std::size_t index, double positive_fraction);

}  // namespace cambench::qr
