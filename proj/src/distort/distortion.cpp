// Copyright 2026 The CamBench Authors
// SPDX-License-Identifier: Apache-2.0

#include "cambench/distort/distortion.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>

#include "cambench/core/error.hpp"
#include "cambench/core/rng.hpp"

namespace cambench::distort {

namespace {

constexpr std::array<std::string_view, 6> kFamilyNames = {"rotation", "perspective", "blur",
                                                          "jpeg",     "lowlight",    "occlusion"};

constexpr QuantTable kLuminanceTable = {
    16, 11, 10, 16, 24,  40,  51,  61,  12, 12, 14, 19, 26,  58,  60,  55,  14, 13, 16, 24, 40, 57,
    69, 56, 14, 17, 22,  29,  51,  87,  80, 62, 18, 22, 37,  56,  68,  109, 103, 77, 24, 35, 55, 64,
    81, 104, 113, 92, 49, 64, 78, 87, 103, 121, 120, 101, 72, 92, 95, 98, 112, 100, 103, 99};

std::size_t family_index(Family f) { return static_cast<std::size_t>(f); }

std::uint64_t parse_u64(std::string_view text, std::string_view what) {
    std::uint64_t value = 0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc{} || ptr != end || text.empty()) {
        throw BenchError(ErrorCode::InvalidArgument, "bad " + std::string(what) + ": '" + std::string(text) + "'");
    }
    return value;
}

// cos/sin with exact values on multiples of 90 degrees.
std::pair<double, double> exact_cos_sin(double degrees) {
    const double reduced = std::fmod(degrees, 360.0);
    const double r = reduced < 0 ? reduced + 360.0 : reduced;
    if (r == 0.0) return {1.0, 0.0};
    if (r == 90.0) return {0.0, 1.0};
    if (r == 180.0) return {-1.0, 0.0};
    if (r == 270.0) return {0.0, -1.0};
    const double rad = degrees * std::numbers::pi / 180.0;
    return {std::cos(rad), std::sin(rad)};
}

// Row-major orthonormal 8-point DCT-II basis: basis[u * 8 + x].
std::array<double, 64> dct_basis() {
    std::array<double, 64> b{};
    for (int u = 0; u < 8; ++u) {
        const double alpha = u == 0 ? std::sqrt(1.0 / 8.0) : std::sqrt(2.0 / 8.0);
        for (int x = 0; x < 8; ++x) {
            b[static_cast<std::size_t>(u * 8 + x)] = alpha * std::cos((2 * x + 1) * u * std::numbers::pi / 16.0);
        }
    }
    return b;
}

MaskGrid warp_mask(const MaskGrid& src, const std::vector<std::pair<double, double>>& coords, int h, int w) {
    MaskGrid out(h, w, 0);
    for (std::size_t i = 0; i < coords.size(); ++i) {
        const auto [sx, sy] = coords[i];
        if (sx >= 0.0 && sx < w && sy >= 0.0 && sy < h) {
            out[i] = src(static_cast<int>(sy), static_cast<int>(sx)) ? 1 : 0;
        }
    }
    return out;
}

}  // namespace

std::string_view to_string(Family family) { return kFamilyNames.at(family_index(family)); }

Family parse_family(std::string_view text) {
    for (std::size_t i = 0; i < kFamilyNames.size(); ++i) {
        if (kFamilyNames[i] == text) return static_cast<Family>(i);
    }
    throw BenchError(ErrorCode::InvalidArgument, "unknown distortion family '" + std::string(text) + "'");
}

bool is_geometric(Family family) { return family == Family::Rotation || family == Family::Perspective; }

double Distortion::parameter(std::string_view name) const {
    for (const auto& [key, value] : parameters) {
        if (key == name) return value;
    }
    throw BenchError(ErrorCode::InvalidArgument, "distortion has no parameter '" + std::string(name) + "'");
}

Distortion make_distortion(Family family, int severity, std::uint64_t seed) {
    if (severity < kMinSeverity || severity > kMaxSeverity) {
        throw BenchError(ErrorCode::InvalidArgument, "severity must be in 1..5, got " + std::to_string(severity));
    }
    const auto s = static_cast<std::size_t>(severity - 1);
    Rng rng = Rng::stream(seed, family_index(family));
    Distortion d{family, severity, seed, {}};
    switch (family) {
        case Family::Rotation:
            d.parameters = {{"angle_deg", rng.coin() ? kRotationDegrees[s] : -kRotationDegrees[s]}};
            break;
        case Family::Perspective: {
            d.parameters = {{"jitter_fraction", kPerspectiveJitter[s]}};
            for (const char* corner : {"tl", "tr", "br", "bl"}) {
                for (const char* axis : {"dx", "dy"}) {
                    d.parameters.emplace_back(std::string(corner) + "_" + axis, rng.uniform(-1.0, 1.0));
                }
            }
            break;
        }
        case Family::Blur:
            d.parameters = {{"sigma", kBlurSigma[s]}};
            break;
        case Family::Jpeg:
            d.parameters = {{"quality", kJpegQuality[s]}};
            break;
        case Family::Lowlight:
            d.parameters = {{"gain", kLowlightGain[s]}, {"noise_sigma", kLowlightNoiseSigma}};
            break;
        case Family::Occlusion: {
            const double uy = rng.uniform();
            const double ux = rng.uniform();
            d.parameters = {{"fraction", kOcclusionFraction[s]}, {"fill", kOcclusionFill}, {"unit_y", uy}, {"unit_x", ux}};
            break;
        }
    }
    return d;
}

Distortion parse_distortion(std::string_view text, std::uint64_t default_seed) {
    const auto first = text.find(':');
    if (first == std::string_view::npos) {
        throw BenchError(ErrorCode::InvalidArgument, "expected family:severity[:seed], got '" + std::string(text) + "'");
    }
    const auto family = parse_family(text.substr(0, first));
    const auto rest = text.substr(first + 1);
    const auto second = rest.find(':');
    const auto severity = parse_u64(rest.substr(0, second), "severity");
    const std::uint64_t seed = second == std::string_view::npos ? default_seed : parse_u64(rest.substr(second + 1), "seed");
    if (severity > static_cast<std::uint64_t>(kMaxSeverity)) {
        throw BenchError(ErrorCode::InvalidArgument, "severity must be in 1..5");
    }
    return make_distortion(family, static_cast<int>(severity), seed);
}

std::string format_distortion(const Distortion& d) {
    return std::string(to_string(d.family)) + ":" + std::to_string(d.severity) + ":" + std::to_string(d.seed);
}

DistortedSample from_sample(const qr::SampleRecord& sample) {
    return DistortedSample{sample.id, sample.image, sample.masks, {}, sample.background_level, sample.label};
}

DistortedSample apply(const DistortedSample& input, const Distortion& d) {
    DistortedSample out = input;
    out.applied.push_back(d);
    const int h = input.image.height();
    const int w = input.image.width();
    switch (d.family) {
        case Family::Rotation: {
            auto warped = warp(input.image, input.masks, rotation_inverse(d.parameter("angle_deg"), h, w),
                               input.background_level);
            out.image = std::move(warped.image);
            out.masks = std::move(warped.masks);
            break;
        }
        case Family::Perspective: {
            const double scale = d.parameter("jitter_fraction") * std::min(h, w);
            std::array<std::pair<double, double>, 4> offsets{};
            // Parameters after the first come in (dx, dy) pairs per corner.
            for (std::size_t c = 0; c < 4; ++c) {
                offsets[c] = {scale * d.parameters[1 + 2 * c].second, scale * d.parameters[2 + 2 * c].second};
            }
            auto warped = warp(input.image, input.masks, perspective_inverse(offsets, h, w), input.background_level);
            out.image = std::move(warped.image);
            out.masks = std::move(warped.masks);
            break;
        }
        case Family::Blur:
            out.image = gaussian_blur(input.image, d.parameter("sigma"));
            break;
        case Family::Jpeg:
            out.image = jpeg_roundtrip(input.image, jpeg_quant_table(static_cast<int>(d.parameter("quality"))));
            break;
        case Family::Lowlight:
            out.image = lowlight(input.image, d.parameter("gain"), d.parameter("noise_sigma"), derive_seed(d.seed, 0x4c4c));
            break;
        case Family::Occlusion: {
            const auto patch = occlusion_patch(h, w, d.parameter("fraction"), d.parameter("unit_y"), d.parameter("unit_x"));
            out.image = fill_patch(input.image, patch, d.parameter("fill"));
            break;
        }
    }
    return out;
}

DistortedSample apply_chain(const qr::SampleRecord& sample, std::span<const Distortion> chain) {
    DistortedSample s = from_sample(sample);
    for (const auto& d : chain) s = apply(s, d);
    return s;
}

std::pair<double, double> Homography::apply(double x, double y) const noexcept {
    const double u = m[0] * x + m[1] * y + m[2];
    const double v = m[3] * x + m[4] * y + m[5];
    const double q = m[6] * x + m[7] * y + m[8];
    return {u / q, v / q};
}

Homography rotation_inverse(double degrees, int height, int width) {
    const auto [c, s] = exact_cos_sin(degrees);
    const double cx = width / 2.0;
    const double cy = height / 2.0;
    // source = center + R(-theta) (p - center)
    return Homography{{c, s, cx - c * cx - s * cy, -s, c, cy + s * cx - c * cy, 0.0, 0.0, 1.0}};
}

Homography homography_from_points(const std::array<std::pair<double, double>, 4>& from,
                                  const std::array<std::pair<double, double>, 4>& to) {
    Eigen::Matrix<double, 8, 8> a = Eigen::Matrix<double, 8, 8>::Zero();
    Eigen::Matrix<double, 8, 1> b;
    for (int i = 0; i < 4; ++i) {
        const auto [x, y] = from[static_cast<std::size_t>(i)];
        const auto [u, v] = to[static_cast<std::size_t>(i)];
        a.row(2 * i) << x, y, 1, 0, 0, 0, -u * x, -u * y;
        a.row(2 * i + 1) << 0, 0, 0, x, y, 1, -v * x, -v * y;
        b(2 * i) = u;
        b(2 * i + 1) = v;
    }
    const Eigen::Matrix<double, 8, 1> h = a.fullPivLu().solve(b);
    Homography out;
    for (int i = 0; i < 8; ++i) out.m[static_cast<std::size_t>(i)] = h(i);
    out.m[8] = 1.0;
    return out;
}

Homography perspective_inverse(const std::array<std::pair<double, double>, 4>& offsets, int height, int width) {
    const double w = width;
    const double h = height;
    const std::array<std::pair<double, double>, 4> corners = {{{0, 0}, {w, 0}, {w, h}, {0, h}}};
    std::array<std::pair<double, double>, 4> moved{};
    for (std::size_t i = 0; i < 4; ++i) {
        moved[i] = {corners[i].first + offsets[i].first, corners[i].second + offsets[i].second};
    }
    return homography_from_points(moved, corners);
}

WarpResult warp(const Image& image, const StructureMasks& masks, const Homography& inverse, double fill) {
    require_same_shape(image, masks.box.grid, "warp: image and masks differ in shape");
    const int h = image.height();
    const int w = image.width();
    std::vector<std::pair<double, double>> coords(image.size());
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) coords[static_cast<std::size_t>(y) * w + x] = inverse.apply(x + 0.5, y + 0.5);
    }

    Image out(h, w, fill);
    for (std::size_t i = 0; i < coords.size(); ++i) {
        const auto [sx, sy] = coords[i];
        if (!(sx >= 0.0 && sx < w && sy >= 0.0 && sy < h)) continue;
        const double fx = sx - 0.5;
        const double fy = sy - 0.5;
        const double x0f = std::floor(fx);
        const double y0f = std::floor(fy);
        const double tx = fx - x0f;
        const double ty = fy - y0f;
        const int x0 = std::clamp(static_cast<int>(x0f), 0, w - 1);
        const int y0 = std::clamp(static_cast<int>(y0f), 0, h - 1);
        const int x1 = std::clamp(static_cast<int>(x0f) + 1, 0, w - 1);
        const int y1 = std::clamp(static_cast<int>(y0f) + 1, 0, h - 1);
        const double top = (1.0 - tx) * image(y0, x0) + tx * image(y0, x1);
        const double bottom = (1.0 - tx) * image(y1, x0) + tx * image(y1, x1);
        out[i] = (1.0 - ty) * top + ty * bottom;
    }

    StructureMasks warped = StructureMasks::zeros(h, w);
    warped.finder.grid = warp_mask(masks.finder.grid, coords, h, w);
    warped.timing.grid = warp_mask(masks.timing.grid, coords, h, w);
    warped.box.grid = warp_mask(masks.box.grid, coords, h, w);
    return {std::move(out), std::move(warped)};
}

std::vector<double> gaussian_kernel(double sigma) {
    if (!(sigma > 0.0)) throw BenchError(ErrorCode::InvalidArgument, "blur sigma must be positive");
    const int radius = static_cast<int>(std::ceil(3.0 * sigma));
    std::vector<double> k(static_cast<std::size_t>(2 * radius + 1));
    double sum = 0.0;
    for (int i = -radius; i <= radius; ++i) {
        const double v = std::exp(-0.5 * (i * i) / (sigma * sigma));
        k[static_cast<std::size_t>(i + radius)] = v;
        sum += v;
    }
    for (auto& v : k) v /= sum;
    return k;
}

Image gaussian_blur(const Image& image, double sigma) {
    const auto k = gaussian_kernel(sigma);
    const int r = static_cast<int>(k.size() / 2);
    const int h = image.height();
    const int w = image.width();
    Image tmp(h, w, 0.0);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double acc = 0.0;
            for (int i = -r; i <= r; ++i) acc += k[static_cast<std::size_t>(i + r)] * image(y, std::clamp(x + i, 0, w - 1));
            tmp(y, x) = acc;
        }
    }
    Image out(h, w, 0.0);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double acc = 0.0;
            for (int i = -r; i <= r; ++i) acc += k[static_cast<std::size_t>(i + r)] * tmp(std::clamp(y + i, 0, h - 1), x);
            out(y, x) = acc;
        }
    }
    return out;
}

QuantTable jpeg_quant_table(int quality) {
    if (quality < 1 || quality > 100) throw BenchError(ErrorCode::InvalidArgument, "jpeg quality must be in 1..100");
    const int scale = quality < 50 ? 5000 / quality : 200 - 2 * quality;
    QuantTable t{};
    for (std::size_t i = 0; i < 64; ++i) t[i] = std::clamp((kLuminanceTable[i] * scale + 50) / 100, 1, 255);
    return t;
}

Image jpeg_roundtrip(const Image& image, const QuantTable& table) {
    static const auto basis = dct_basis();
    const int h = image.height();
    const int w = image.width();
    Image out(h, w, 0.0);
    std::array<double, 64> block{};
    std::array<double, 64> tmp{};
    std::array<double, 64> coef{};
    for (int by = 0; by < h; by += 8) {
        for (int bx = 0; bx < w; bx += 8) {
            for (int y = 0; y < 8; ++y) {
                for (int x = 0; x < 8; ++x) {
                    const int sy = std::min(by + y, h - 1);
                    const int sx = std::min(bx + x, w - 1);
                    block[static_cast<std::size_t>(y * 8 + x)] = image(sy, sx) * 255.0 - 128.0;
                }
            }
            // Rows then columns: coef = B * block * B^T.
            for (int y = 0; y < 8; ++y) {
                for (int u = 0; u < 8; ++u) {
                    double acc = 0.0;
                    for (int x = 0; x < 8; ++x) acc += basis[static_cast<std::size_t>(u * 8 + x)] * block[static_cast<std::size_t>(y * 8 + x)];
                    tmp[static_cast<std::size_t>(y * 8 + u)] = acc;
                }
            }
            for (int v = 0; v < 8; ++v) {
                for (int u = 0; u < 8; ++u) {
                    double acc = 0.0;
                    for (int y = 0; y < 8; ++y) acc += basis[static_cast<std::size_t>(v * 8 + y)] * tmp[static_cast<std::size_t>(y * 8 + u)];
                    const auto idx = static_cast<std::size_t>(v * 8 + u);
                    coef[idx] = std::round(acc / table[idx]) * table[idx];
                }
            }
            for (int v = 0; v < 8; ++v) {
                for (int x = 0; x < 8; ++x) {
                    double acc = 0.0;
                    for (int u = 0; u < 8; ++u) acc += basis[static_cast<std::size_t>(u * 8 + x)] * coef[static_cast<std::size_t>(v * 8 + u)];
                    tmp[static_cast<std::size_t>(v * 8 + x)] = acc;
                }
            }
            for (int y = 0; y < 8 && by + y < h; ++y) {
                for (int x = 0; x < 8 && bx + x < w; ++x) {
                    double acc = 0.0;
                    for (int v = 0; v < 8; ++v) acc += basis[static_cast<std::size_t>(v * 8 + y)] * tmp[static_cast<std::size_t>(v * 8 + x)];
                    out(by + y, bx + x) = std::clamp((acc + 128.0) / 255.0, 0.0, 1.0);
                }
            }
        }
    }
    return out;
}

Image lowlight(const Image& image, double gain, double noise_sigma, std::uint64_t seed) {
    Rng rng(seed);
    Image out = image;
    for (auto& v : out.values()) v = std::clamp(v * gain + noise_sigma * rng.normal(), 0.0, 1.0);
    return out;
}

bool Patch::contains(int py, int px) const noexcept {
    if (py < y || px < x || px >= x + width) return false;
    if (py < y + full_rows) return true;
    return py == y + full_rows && px < x + remainder;
}

Patch occlusion_patch(int height, int width, double fraction, double unit_y, double unit_x) {
    if (!(fraction > 0.0 && fraction <= 1.0)) throw BenchError(ErrorCode::InvalidArgument, "occlusion fraction must be in (0, 1]");
    const auto total = static_cast<long long>(height) * width;
    const long long area = std::llround(fraction * static_cast<double>(total));
    Patch p;
    if (area == 0) return p;
    // Near-square, but wide enough that the rows fit the canvas height.
    const auto side = static_cast<long long>(std::ceil(std::sqrt(static_cast<double>(area))));
    p.width = static_cast<int>(std::min<long long>(width, std::max(side, (area + height - 1) / height)));
    p.full_rows = static_cast<int>(area / p.width);
    p.remainder = static_cast<int>(area % p.width);
    const int free_y = height - p.rows() + 1;
    const int free_x = width - p.width + 1;
    p.y = std::min(free_y - 1, static_cast<int>(unit_y * free_y));
    p.x = std::min(free_x - 1, static_cast<int>(unit_x * free_x));
    return p;
}

Image fill_patch(const Image& image, const Patch& patch, double value) {
    Image out = image;
    for (int y = patch.y; y < patch.y + patch.rows(); ++y) {
        const int len = y < patch.y + patch.full_rows ? patch.width : patch.remainder;
        for (int x = patch.x; x < patch.x + len; ++x) out(y, x) = value;
    }
    return out;
}

}  // namespace cambench::distort
