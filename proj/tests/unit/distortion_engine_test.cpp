// Copyright 2026 The CamBench Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "cambench/core/error.hpp"
#include "cambench/core/rng.hpp"
#include "cambench/distort/distortion.hpp"
#include "cambench/qr/scene.hpp"

namespace cambench::distort {
namespace {

qr::SampleRecord positive(int side = 224, int module_px = 4, int origin = 60) {
    qr::SceneParams p;
    p.height = p.width = side;
    p.module_px = module_px;
    p.origin_y = p.origin_x = origin;
    p.background.level = 0.6;
    auto s = qr::compose_scene(qr::build_matrix(qr::QrSpec{1, qr::EccLevel::M, 2, {7, 7, 7}}), p);
    s.id = "pos";
    return s;
}

// 64x64 sample whose masks are the nearest-neighbor reduction of a full scene.
qr::SampleRecord small_positive() {
    auto s = positive();
    s.masks = align_masks(s.masks, 64, 64);
    Image img(64, 64, 0.0);
    for (std::size_t i = 0; i < img.size(); ++i) img[i] = s.masks.finder.grid[i] ? 0.1 : 0.9;
    s.image = std::move(img);
    return s;
}

Image random_image(Rng& rng, int h, int w) {
    Image img(h, w, 0.0);
    for (auto& v : img.values()) v = rng.uniform();
    return img;
}

bool near_integer(double v) { return std::abs(v - std::round(v)) < 1e-7; }

TEST(Schedule, StrictlyMonotoneInSeverity) {
    for (std::size_t i = 1; i < 5; ++i) {
        EXPECT_GT(kRotationDegrees[i], kRotationDegrees[i - 1]);
        EXPECT_GT(kPerspectiveJitter[i], kPerspectiveJitter[i - 1]);
        EXPECT_GT(kBlurSigma[i], kBlurSigma[i - 1]);
        EXPECT_LT(kJpegQuality[i], kJpegQuality[i - 1]);
        EXPECT_LT(kLowlightGain[i], kLowlightGain[i - 1]);
        EXPECT_GT(kOcclusionFraction[i], kOcclusionFraction[i - 1]);
    }
}

TEST(Schedule, ParametersArePureInFamilySeveritySeed) {
    for (Family f : kAllFamilies) {
        for (int s = 1; s <= 5; ++s) {
            EXPECT_EQ(make_distortion(f, s, 99), make_distortion(f, s, 99));
        }
    }
    const auto rot = make_distortion(Family::Rotation, 3, 5);
    EXPECT_EQ(std::abs(rot.parameter("angle_deg")), 20.0);
    bool saw_positive = false;
    bool saw_negative = false;
    for (std::uint64_t seed = 0; seed < 64; ++seed) {
        const double a = make_distortion(Family::Rotation, 1, seed).parameter("angle_deg");
        saw_positive |= a > 0;
        saw_negative |= a < 0;
    }
    EXPECT_TRUE(saw_positive && saw_negative);
}

TEST(Schedule, SeverityOutOfRange) {
    for (int s : {0, 6, -1}) {
        try {
            make_distortion(Family::Blur, s, 0);
            FAIL();
        } catch (const BenchError& e) {
            EXPECT_EQ(e.code(), ErrorCode::InvalidArgument);
        }
    }
}

TEST(Grammar, ParsesFamilySeverityAndOptionalSeed) {
    const auto a = parse_distortion("blur:3", 17);
    EXPECT_EQ(a.family, Family::Blur);
    EXPECT_EQ(a.severity, 3);
    EXPECT_EQ(a.seed, 17u);
    const auto b = parse_distortion("rotation:5:123", 17);
    EXPECT_EQ(b.seed, 123u);
    EXPECT_EQ(format_distortion(b), "rotation:5:123");
    EXPECT_EQ(parse_distortion(format_distortion(b), 0), b);
    for (const char* bad : {"blur", "blur:", "blur:x", "fog:2", "blur:2:", "blur:9", "blur:2:-1"}) {
        EXPECT_THROW(parse_distortion(bad, 0), BenchError) << bad;
    }
}

TEST(Rotation, ZeroAngleIsIdentity) {
    const auto s = positive();
    const auto w = warp(s.image, s.masks, rotation_inverse(0.0, 224, 224), s.background_level);
    EXPECT_EQ(w.image, s.image);
    EXPECT_EQ(w.masks, s.masks);
}

TEST(Rotation, QuarterTurnPermutesPixels) {
    const auto s = positive();
    for (double deg : {90.0, -90.0, 180.0, 270.0}) {
        const auto w = warp(s.image, s.masks, rotation_inverse(deg, 224, 224), s.background_level);
        EXPECT_EQ(w.masks.finder.count(), s.masks.finder.count());
        EXPECT_EQ(w.masks.timing.count(), s.masks.timing.count());
        EXPECT_EQ(w.masks.box.count(), s.masks.box.count());
        std::vector<double> a(s.image.values().begin(), s.image.values().end());
        std::vector<double> b(w.image.values().begin(), w.image.values().end());
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        EXPECT_EQ(a, b) << deg;
    }
}

TEST(Rotation, BoxMaskMatchesDirectInverseMapOracle) {
    const auto s = positive();
    const double theta = 20.0 * std::numbers::pi / 180.0;
    const auto w = warp(s.image, s.masks, rotation_inverse(20.0, 224, 224), s.background_level);
    int checked = 0;
    for (int y = 0; y < 224; ++y) {
        for (int x = 0; x < 224; ++x) {
            const double dx = x + 0.5 - 112.0;
            const double dy = y + 0.5 - 112.0;
            const double sx = 112.0 + std::cos(theta) * dx + std::sin(theta) * dy;
            const double sy = 112.0 - std::sin(theta) * dx + std::cos(theta) * dy;
            if (near_integer(sx) || near_integer(sy)) continue;
            const bool inside = sx >= 0 && sx < 224 && sy >= 0 && sy < 224;
            const int expected = inside ? s.masks.box.grid(static_cast<int>(sy), static_cast<int>(sx)) : 0;
            ASSERT_EQ(w.masks.box.grid(y, x), expected) << y << "," << x;
            ++checked;
        }
    }
    EXPECT_GT(checked, 224 * 224 - 100);
}

TEST(Rotation, OutOfFrameUsesBackgroundLevel) {
    const auto s = positive();
    const auto w = warp(s.image, s.masks, rotation_inverse(45.0, 224, 224), 0.37);
    EXPECT_EQ(w.image(0, 0), 0.37);
    EXPECT_EQ(w.masks.box.grid(0, 0), 0);
}

TEST(Perspective, HomographyMapsCorners) {
    const std::array<std::pair<double, double>, 4> offsets = {{{3, -2}, {-4, 5}, {1.5, -3}, {-2, -1}}};
    const auto inv = perspective_inverse(offsets, 100, 120);
    const std::array<std::pair<double, double>, 4> corners = {{{0, 0}, {120, 0}, {120, 100}, {0, 100}}};
    for (std::size_t i = 0; i < 4; ++i) {
        const auto [u, v] = inv.apply(corners[i].first + offsets[i].first, corners[i].second + offsets[i].second);
        EXPECT_NEAR(u, corners[i].first, 1e-9);
        EXPECT_NEAR(v, corners[i].second, 1e-9);
    }
}

TEST(Perspective, ZeroJitterIsIdentityMap) {
    const auto inv = perspective_inverse({}, 50, 70);
    for (double x : {0.5, 33.5, 69.5}) {
        const auto [u, v] = inv.apply(x, 17.5);
        EXPECT_NEAR(u, x, 1e-12);
        EXPECT_NEAR(v, 17.5, 1e-12);
    }
}

TEST(GeometricWarp, MasksFollowSharedInverseMapExhaustively) {
    const auto s = small_positive();
    for (Family f : {Family::Rotation, Family::Perspective}) {
        for (int sev = 1; sev <= 5; ++sev) {
            const auto d = make_distortion(f, sev, 1000 + static_cast<std::uint64_t>(sev));
            const auto out = apply(from_sample(s), d);
            Homography inv;
            if (f == Family::Rotation) {
                inv = rotation_inverse(d.parameter("angle_deg"), 64, 64);
            } else {
                const double scale = d.parameter("jitter_fraction") * 64;
                std::array<std::pair<double, double>, 4> off{};
                const char* names[4] = {"tl", "tr", "br", "bl"};
                for (std::size_t c = 0; c < 4; ++c) {
                    off[c] = {scale * d.parameter(std::string(names[c]) + "_dx"),
                              scale * d.parameter(std::string(names[c]) + "_dy")};
                }
                inv = perspective_inverse(off, 64, 64);
            }
            for (int y = 0; y < 64; ++y) {
                for (int x = 0; x < 64; ++x) {
                    const auto [sx, sy] = inv.apply(x + 0.5, y + 0.5);
                    const bool in = sx >= 0 && sx < 64 && sy >= 0 && sy < 64;
                    const auto src = [&](const BinaryMask& m) {
                        return in ? m.grid(static_cast<int>(sy), static_cast<int>(sx)) : std::uint8_t{0};
                    };
                    ASSERT_EQ(out.masks.finder.grid(y, x), src(s.masks.finder));
                    ASSERT_EQ(out.masks.timing.grid(y, x), src(s.masks.timing));
                    ASSERT_EQ(out.masks.box.grid(y, x), src(s.masks.box));
                }
            }
            for (std::uint8_t v : out.masks.box.grid.values()) ASSERT_LE(v, 1);
        }
    }
}

TEST(GeometricWarp, ImageStaysInRange) {
    const auto s = positive();
    const auto out = apply(from_sample(s), make_distortion(Family::Perspective, 5, 3));
    for (double v : out.image.values()) {
        ASSERT_GE(v, 0.0);
        ASSERT_LE(v, 1.0);
    }
}

TEST(Photometric, MasksBitIdentical) {
    const auto s = positive();
    for (Family f : {Family::Blur, Family::Jpeg, Family::Lowlight, Family::Occlusion}) {
        for (int sev = 1; sev <= 5; ++sev) {
            const auto out = apply(from_sample(s), make_distortion(f, sev, 4));
            EXPECT_EQ(out.masks, s.masks) << to_string(f) << sev;
        }
    }
}

TEST(Blur, KernelNormalizedAndSized) {
    for (double sigma : kBlurSigma) {
        const auto k = gaussian_kernel(sigma);
        double sum = 0.0;
        for (double v : k) sum += v;
        EXPECT_NEAR(sum, 1.0, 1e-9);
        EXPECT_EQ(k.size(), static_cast<std::size_t>(2 * std::ceil(3 * sigma) + 1));
        for (std::size_t i = 0; i < k.size(); ++i) EXPECT_EQ(k[i], k[k.size() - 1 - i]);
    }
    EXPECT_THROW(gaussian_kernel(0.0), BenchError);
}

TEST(Blur, MatchesDirectTwoDimensionalConvolution) {
    Rng rng(5);
    const Image img = random_image(rng, 19, 23);
    const double sigma = 1.3;
    const auto k = gaussian_kernel(sigma);
    const int r = static_cast<int>(k.size() / 2);
    const auto out = gaussian_blur(img, sigma);
    for (int y = 0; y < 19; ++y) {
        for (int x = 0; x < 23; ++x) {
            double acc = 0.0;
            for (int i = -r; i <= r; ++i) {
                for (int j = -r; j <= r; ++j) {
                    acc += k[static_cast<std::size_t>(i + r)] * k[static_cast<std::size_t>(j + r)] *
                           img(std::clamp(y + i, 0, 18), std::clamp(x + j, 0, 22));
                }
            }
            ASSERT_NEAR(out(y, x), acc, 1e-12);
        }
    }
}

TEST(Blur, ConstantImageUnchanged) {
    const Image flat(30, 30, 0.42);
    const Image blurred = gaussian_blur(flat, 4.0);
    for (double v : blurred.values()) ASSERT_NEAR(v, 0.42, 1e-12);
}

TEST(Jpeg, QuantTableScaling) {
    const auto q50 = jpeg_quant_table(50);
    EXPECT_EQ(q50[0], 16);
    EXPECT_EQ(q50[63], 99);
    const auto q100 = jpeg_quant_table(100);
    for (int v : q100) EXPECT_EQ(v, 1);
    const auto q10 = jpeg_quant_table(10);
    EXPECT_EQ(q10[0], 80);
    EXPECT_EQ(q10[63], 255);
    EXPECT_THROW(jpeg_quant_table(0), BenchError);
}

TEST(Jpeg, AllOnesTableIsLosslessOnBlockConstantImages) {
    QuantTable ones{};
    ones.fill(1);
    // DC of a constant block is 8 * (255 v - 128); integral for these levels.
    for (double level : {0.0, 0.5, 1.0, 128.0 / 255.0, 3.0 / 255.0}) {
        const Image flat(24, 40, level);
        const auto out = jpeg_roundtrip(flat, ones);
        for (double v : out.values()) ASSERT_NEAR(v, level, 1e-6);
    }
}

TEST(Jpeg, AllOnesTableErrorIsBoundedByHalfStep) {
    // Each coefficient moves by at most 0.5; an orthonormal basis column has
    // l1 norm at most sqrt(8), so a pixel moves by at most 0.5 * 8 / 255.
    Rng rng(6);
    QuantTable ones{};
    ones.fill(1);
    const Image img = random_image(rng, 37, 29);
    const auto out = jpeg_roundtrip(img, ones);
    double worst = 0.0;
    for (std::size_t i = 0; i < img.size(); ++i) worst = std::max(worst, std::abs(out[i] - img[i]));
    EXPECT_LE(worst, 4.0 / 255.0);
}

TEST(Jpeg, MatchesTextbookTransformOnOneBlock) {
    Rng rng(7);
    const Image img = random_image(rng, 8, 8);
    QuantTable table{};
    for (auto& q : table) q = static_cast<int>(rng.uniform_int(1, 40));
    const auto c = [](int k) { return k == 0 ? 1.0 / std::sqrt(2.0) : 1.0; };
    double coef[8][8];
    for (int v = 0; v < 8; ++v) {
        for (int u = 0; u < 8; ++u) {
            double acc = 0.0;
            for (int y = 0; y < 8; ++y) {
                for (int x = 0; x < 8; ++x) {
                    acc += (img(y, x) * 255.0 - 128.0) * std::cos((2 * x + 1) * u * std::numbers::pi / 16) *
                           std::cos((2 * y + 1) * v * std::numbers::pi / 16);
                }
            }
            const double f = 0.25 * c(u) * c(v) * acc;
            const int q = table[static_cast<std::size_t>(v * 8 + u)];
            coef[v][u] = std::round(f / q) * q;
        }
    }
    const auto out = jpeg_roundtrip(img, table);
    for (int y = 0; y < 8; ++y) {
        for (int x = 0; x < 8; ++x) {
            double acc = 0.0;
            for (int v = 0; v < 8; ++v) {
                for (int u = 0; u < 8; ++u) {
                    acc += c(u) * c(v) * coef[v][u] * std::cos((2 * x + 1) * u * std::numbers::pi / 16) *
                           std::cos((2 * y + 1) * v * std::numbers::pi / 16);
                }
            }
            const double expected = std::clamp((0.25 * acc + 128.0) / 255.0, 0.0, 1.0);
            ASSERT_NEAR(out(y, x), expected, 1e-9);
        }
    }
}

TEST(Jpeg, ErrorGrowsAsQualityDrops) {
    const auto s = positive();
    double previous = -1.0;
    for (int q : kJpegQuality) {
        const auto out = jpeg_roundtrip(s.image, jpeg_quant_table(q));
        double err = 0.0;
        for (std::size_t i = 0; i < out.size(); ++i) err += std::abs(out[i] - s.image[i]);
        EXPECT_GT(err, previous) << q;
        previous = err;
    }
}

TEST(Lowlight, GainAndNoiseStatistics) {
    const Image flat(128, 128, 0.5);
    const auto out = lowlight(flat, 0.6, 0.02, 11);
    double mean = 0.0;
    for (double v : out.values()) mean += v;
    mean /= static_cast<double>(out.size());
    double var = 0.0;
    for (double v : out.values()) var += (v - mean) * (v - mean);
    var /= static_cast<double>(out.size() - 1);
    EXPECT_NEAR(mean, 0.3, 1e-3);
    EXPECT_NEAR(std::sqrt(var), 0.02, 1e-3);
    EXPECT_EQ(out, lowlight(flat, 0.6, 0.02, 11));
    EXPECT_NE(out, lowlight(flat, 0.6, 0.02, 12));
}

TEST(Lowlight, ClampedToUnitRange) {
    const Image dark(16, 16, 0.001);
    const Image dimmed = lowlight(dark, 0.2, 0.02, 3);
    for (double v : dimmed.values()) {
        ASSERT_GE(v, 0.0);
        ASSERT_LE(v, 1.0);
    }
}

TEST(Occlusion, PatchAreaIsExact) {
    const auto s = positive();
    for (int sev = 1; sev <= 5; ++sev) {
        const auto d = make_distortion(Family::Occlusion, sev, 77);
        const auto out = apply(from_sample(s), d);
        const auto expected = std::llround(kOcclusionFraction[static_cast<std::size_t>(sev - 1)] * 224 * 224);
        const auto patch = occlusion_patch(224, 224, d.parameter("fraction"), d.parameter("unit_y"), d.parameter("unit_x"));
        EXPECT_EQ(patch.area(), expected);
        long long covered = 0;
        for (int y = 0; y < 224; ++y) {
            for (int x = 0; x < 224; ++x) {
                if (patch.contains(y, x)) {
                    ++covered;
                    ASSERT_EQ(out.image(y, x), 0.5);
                } else {
                    ASSERT_EQ(out.image(y, x), s.image(y, x));
                }
            }
        }
        EXPECT_EQ(covered, expected);
    }
    EXPECT_EQ(std::llround(0.05 * 224 * 224), 2509);
}

TEST(Occlusion, DeterministicPlacementWithinCanvas) {
    const auto s = positive();
    const auto d = make_distortion(Family::Occlusion, 3, 5);
    EXPECT_EQ(apply(from_sample(s), d).image, apply(from_sample(s), d).image);
    Rng rng(8);
    for (int trial = 0; trial < 200; ++trial) {
        const int h = static_cast<int>(rng.uniform_int(1, 80));
        const int w = static_cast<int>(rng.uniform_int(1, 80));
        const auto p = occlusion_patch(h, w, rng.uniform(0.01, 1.0), rng.uniform(), rng.uniform());
        ASSERT_GE(p.y, 0);
        ASSERT_GE(p.x, 0);
        ASSERT_LE(p.y + p.rows(), h);
        ASSERT_LE(p.x + p.width, w);
    }
}

TEST(Chain, RecordsEveryStepInOrder) {
    const auto s = positive();
    const std::vector<Distortion> chain = {make_distortion(Family::Rotation, 2, 1), make_distortion(Family::Blur, 1, 2),
                                           make_distortion(Family::Occlusion, 1, 3)};
    const auto out = apply_chain(s, chain);
    EXPECT_EQ(out.applied, chain);
    EXPECT_EQ(out.base_id, "pos");
    auto step = from_sample(s);
    for (const auto& d : chain) step = apply(step, d);
    EXPECT_EQ(step.image, out.image);
    EXPECT_EQ(step.masks, out.masks);
}

}  // namespace
}  // namespace cambench::distort
