// Copyright 2026 The CamBench Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cambench/core/grid.hpp"
#include "cambench/core/saliency.hpp"
#include "cambench/qr/scene.hpp"

namespace cambench::distort {

enum class Family { Rotation, Perspective, Blur, Jpeg, Lowlight, Occlusion };

inline constexpr int kMinSeverity = 1;
inline constexpr int kMaxSeverity = 5;
inline constexpr std::array<Family, 6> kAllFamilies = {Family::Rotation, Family::Perspective, Family::Blur,
                                                       Family::Jpeg,     Family::Lowlight,    Family::Occlusion};

// Frozen severity schedules, index = severity - 1.
inline constexpr std::array<double, 5> kRotationDegrees = {5, 10, 20, 30, 45};
inline constexpr std::array<double, 5> kPerspectiveJitter = {0.02, 0.04, 0.06, 0.08, 0.10};
inline constexpr std::array<double, 5> kBlurSigma = {0.5, 1, 2, 3, 4};
inline constexpr std::array<int, 5> kJpegQuality = {90, 70, 50, 30, 15};
inline constexpr std::array<double, 5> kLowlightGain = {0.8, 0.6, 0.45, 0.3, 0.2};
inline constexpr double kLowlightNoiseSigma = 0.02;
inline constexpr std::array<double, 5> kOcclusionFraction = {0.05, 0.10, 0.15, 0.20, 0.30};
inline constexpr double kOcclusionFill = 0.5;

std::string_view to_string(Family family);
Family parse_family(std::string_view text);
bool is_geometric(Family family);

using Parameters = std::vector<std::pair<std::string, double>>;

struct Distortion {
    Family family = Family::Blur;
    int severity = 1;
    std::uint64_t seed = 0;
    /// Resolved values in a fixed order; pure in (family, severity, seed).
    Parameters parameters;

    double parameter(std::string_view name) const;
    bool operator==(const Distortion&) const = default;
};

/// Resolves the schedule. Throws InvalidArgument for severity outside 1..5.
Distortion make_distortion(Family family, int severity, std::uint64_t seed);

/// Parses "family:severity[:seed]"; the seed defaults to `default_seed`.
Distortion parse_distortion(std::string_view text, std::uint64_t default_seed);
std::string format_distortion(const Distortion& d);

struct DistortedSample {
    std::string base_id;
    Image image;
    StructureMasks masks;
    std::vector<Distortion> applied;
    double background_level = 0.5;
    int label = 0;
};

DistortedSample from_sample(const qr::SampleRecord& sample);

DistortedSample apply(const DistortedSample& input, const Distortion& d);
DistortedSample apply_chain(const qr::SampleRecord& sample, std::span<const Distortion> chain);

/// Projective map in pixel-edge coordinates: (x, y) -> (u / w, v / w).
struct Homography {
    std::array<double, 9> m = {1, 0, 0, 0, 1, 0, 0, 0, 1};

    std::pair<double, double> apply(double x, double y) const noexcept;
};

/// Inverse map (output -> source) of a rotation by `degrees` about the canvas
/// center. Multiples of 90 degrees use exact trigonometry.
Homography rotation_inverse(double degrees, int height, int width);

/// Homography taking `from[i]` to `to[i]` for the four point pairs.
Homography homography_from_points(const std::array<std::pair<double, double>, 4>& from,
                                  const std::array<std::pair<double, double>, 4>& to);

/// Inverse map of the perspective warp whose output corners are the canvas
/// corners displaced by `offsets` (pixels; TL, TR, BR, BL order).
Homography perspective_inverse(const std::array<std::pair<double, double>, 4>& offsets, int height, int width);

struct WarpResult {
    Image image;
    StructureMasks masks;
};

/// Shared inverse-map warp: bilinear for the image with `fill` out of frame,
/// nearest (floor) sampling for every mask with 0 out of frame.
WarpResult warp(const Image& image, const StructureMasks& masks, const Homography& inverse, double fill);

/// Normalized Gaussian taps over [-ceil(3 sigma), ceil(3 sigma)].
std::vector<double> gaussian_kernel(double sigma);
Image gaussian_blur(const Image& image, double sigma);

using QuantTable = std::array<int, 64>;

/// Standard luminance table scaled to `quality` (1..100).
QuantTable jpeg_quant_table(int quality);

/// 8x8 block DCT, quantize, dequantize, inverse DCT on the 0..255 scale.
/// Partial edge blocks are padded by edge replication. Output is clamped to
/// [0, 1] but not rounded to 8 bits.
Image jpeg_roundtrip(const Image& image, const QuantTable& table);

Image lowlight(const Image& image, double gain, double noise_sigma, std::uint64_t seed);

/// Axis-aligned patch of exactly `area` pixels: `full_rows` rows of `width`
/// pixels plus one partial row of `remainder` pixels.
struct Patch {
    int y = 0;
    int x = 0;
    int width = 0;
    int full_rows = 0;
    int remainder = 0;

    int rows() const noexcept { return full_rows + (remainder > 0 ? 1 : 0); }
    long long area() const noexcept { return static_cast<long long>(width) * full_rows + remainder; }
    bool contains(int py, int px) const noexcept;
};

/// Patch covering round(fraction * H * W) pixels placed at unit position
/// (unit_y, unit_x) in [0, 1) of the free range.
Patch occlusion_patch(int height, int width, double fraction, double unit_y, double unit_x);
Image fill_patch(const Image& image, const Patch& patch, double value);

}  // namespace cambench::distort
