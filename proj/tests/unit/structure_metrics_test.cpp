// Copyright 2026 The CamBench Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "cambench/core/rng.hpp"
#include "cambench/metrics/structure_metrics.hpp"
#include "cambench/qr/scene.hpp"
#include "support/oracles.hpp"

namespace cambench::metrics {
namespace {

// Field whose normalized form is given directly: S = sum + eps.
SaliencyField field_from_normalized(const Image& normalized, double eps = kDefaultEpsilon) {
    SaliencyField f;
    f.raw = normalized;
    f.normalized = normalized;
    f.epsilon = eps;
    double sum = 0.0;
    for (double v : normalized.values()) sum += v;
    f.total_mass = sum + eps;
    return f;
}

Image from_mask(const BinaryMask& m, double value = 1.0) {
    Image img(m.height(), m.width(), 0.0);
    for (std::size_t i = 0; i < img.size(); ++i) img[i] = m.grid[i] ? value : 0.0;
    return img;
}

StructureMasks random_masks(Rng& rng, int h, int w) {
    auto m = StructureMasks::zeros(h, w);
    // Box is a random rectangle; finder and timing are disjoint random subsets of it.
    const int y0 = static_cast<int>(rng.uniform_int(0, h / 2));
    const int x0 = static_cast<int>(rng.uniform_int(0, w / 2));
    const int y1 = static_cast<int>(rng.uniform_int(y0 + 1, h));
    const int x1 = static_cast<int>(rng.uniform_int(x0 + 1, w));
    for (int y = y0; y < y1; ++y) {
        for (int x = x0; x < x1; ++x) {
            m.box.grid(y, x) = 1;
            const double u = rng.uniform();
            if (u < 0.25) {
                m.finder.grid(y, x) = 1;
            } else if (u < 0.4) {
                m.timing.grid(y, x) = 1;
            }
        }
    }
    // Guarantee a nonempty structure union.
    m.finder.grid(y0, x0) = 1;
    m.timing.grid(y0, x0) = 0;
    return m;
}

Image random_field(Rng& rng, int h, int w) {
    Image img(h, w, 0.0);
    for (auto& v : img.values()) v = rng.uniform() < 0.3 ? 0.0 : rng.uniform();
    return img;
}

// Sort-and-count oracle for the coverage curve.
CoverageCurve oracle_curve(const SaliencyField& sal, const StructureMasks& masks, int k) {
    std::vector<double> sorted(sal.normalized.values().begin(), sal.normalized.values().end());
    std::sort(sorted.begin(), sorted.end());
    const std::size_t n = sorted.size();
    CoverageCurve c;
    for (int i = 1; i <= k; ++i) {
        const double h = static_cast<double>(i) / (k + 1) * static_cast<double>(n - 1);
        const auto lo = static_cast<std::size_t>(std::floor(h));
        const double frac = h - static_cast<double>(lo);
        const double tau = frac > 0.0 && lo + 1 < n ? sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]) : sorted[lo];
        double in = 0, f = 0, t = 0, bg = 0;
        for (std::size_t p = 0; p < n; ++p) {
            if (sal.normalized[p] >= tau) {
                ++in;
                f += masks.finder.grid[p];
                t += masks.timing.grid[p];
                bg += 1 - masks.box.grid[p];
            }
        }
        c.thresholds.push_back(tau);
        c.phi_finder.push_back(f / (in + sal.epsilon));
        c.phi_timing.push_back(t / (in + sal.epsilon));
        c.phi_background.push_back(bg / (in + sal.epsilon));
    }
    return c;
}

using oracle::brute_force_edt;

StructureMasks qr_masks() {
    qr::SceneParams p;
    p.module_px = 4;
    p.origin_y = 60;
    p.origin_x = 60;
    return qr::compose_scene(qr::build_matrix(qr::QrSpec{1, qr::EccLevel::L, 0, {1, 2, 3}}), p).masks;
}

TEST(MassRatios, FinderOnlyAndBackgroundOnlyLimits) {
    const auto masks = qr_masks();
    const auto on_finder = field_from_normalized(from_mask(masks.finder));
    const auto r = mass_ratios(on_finder, masks);
    const double slack = kDefaultEpsilon / on_finder.total_mass;
    EXPECT_NEAR(r.fmr, 1.0, slack + 1e-15);
    EXPECT_EQ(r.tmr, 0.0);
    EXPECT_EQ(r.bl, 0.0);

    const auto on_bg = field_from_normalized(from_mask(masks.background()));
    const auto b = mass_ratios(on_bg, masks);
    EXPECT_EQ(b.fmr, 0.0);
    EXPECT_EQ(b.tmr, 0.0);
    EXPECT_NEAR(b.bl, 1.0, kDefaultEpsilon / on_bg.total_mass + 1e-15);
}

TEST(MassRatios, UniformFieldIsProportional) {
    auto masks = StructureMasks::zeros(10, 10);
    for (int x = 0; x < 10; ++x) masks.finder.grid(0, x) = masks.box.grid(0, x) = 1;
    const auto f = field_from_normalized(Image(10, 10, 0.5));
    EXPECT_NEAR(mass_ratios(f, masks).fmr, 0.1, 1e-6);
}

TEST(MassRatios, ShapeMismatch) {
    const auto f = field_from_normalized(Image(4, 4, 0.5));
    try {
        mass_ratios(f, StructureMasks::zeros(4, 5));
        FAIL();
    } catch (const BenchError& e) {
        EXPECT_EQ(e.code(), ErrorCode::ShapeError);
    }
}

TEST(Quantiles, LinearInterpolationBetweenOrderStatistics) {
    const std::vector<double> v = {4, 1, 3, 2, 5};
    const std::vector<double> q = {0.0, 0.1, 0.5, 0.75, 1.0};
    const auto out = quantiles(v, q);
    EXPECT_DOUBLE_EQ(out[0], 1.0);
    EXPECT_DOUBLE_EQ(out[1], 1.4);
    EXPECT_DOUBLE_EQ(out[2], 3.0);
    EXPECT_DOUBLE_EQ(out[3], 4.0);
    EXPECT_DOUBLE_EQ(out[4], 5.0);
}

TEST(CoverageCurve, MatchesSortAndCountOracle) {
    Rng rng(16);
    for (int trial = 0; trial < 30; ++trial) {
        const auto masks = random_masks(rng, 16, 16);
        const auto sal = normalize(random_field(rng, 16, 16));
        const auto got = coverage_curve(sal, masks, 8);
        const auto want = oracle_curve(sal, masks, 8);
        ASSERT_EQ(got.thresholds.size(), 8u);
        for (std::size_t k = 0; k < 8; ++k) {
            EXPECT_DOUBLE_EQ(got.thresholds[k], want.thresholds[k]);
            EXPECT_DOUBLE_EQ(got.phi_finder[k], want.phi_finder[k]);
            EXPECT_DOUBLE_EQ(got.phi_timing[k], want.phi_timing[k]);
            EXPECT_DOUBLE_EQ(got.phi_background[k], want.phi_background[k]);
        }
    }
}

TEST(CoverageCurve, TiesKeepExactlyKPoints) {
    Image piecewise(8, 8, 0.0);
    for (int y = 0; y < 8; ++y) {
        for (int x = 0; x < 8; ++x) piecewise(y, x) = (x < 4) ? 0.2 : 0.9;
    }
    const auto c = coverage_curve(field_from_normalized(piecewise), StructureMasks::zeros(8, 8), 32);
    EXPECT_EQ(c.thresholds.size(), 32u);
    EXPECT_TRUE(std::is_sorted(c.thresholds.begin(), c.thresholds.end()));
}

TEST(CoverageCurve, SupportInsideFindersGivesUnitMisf) {
    // Finder covers all but one pixel, so every interior threshold is positive
    // and the superlevel sets never leave the finder.
    auto masks = StructureMasks::zeros(8, 8);
    Image c(8, 8, 0.0);
    for (int i = 1; i < 64; ++i) {
        masks.finder.grid[static_cast<std::size_t>(i)] = 1;
        c[static_cast<std::size_t>(i)] = static_cast<double>(i) / 63.0;
    }
    masks.box.grid = MaskGrid(8, 8, 1);
    const auto aucs = coverage_aucs(coverage_curve(field_from_normalized(c), masks, 32));
    EXPECT_NEAR(aucs.misf, 1.0, 1e-6);
    EXPECT_EQ(aucs.mist, 0.0);
    EXPECT_EQ(aucs.bg, 0.0);
}

TEST(CoverageCurve, UniformFieldCoversWholeCanvas) {
    const auto masks = qr_masks();
    const auto c = coverage_curve(field_from_normalized(Image(224, 224, 0.7)), masks, 16);
    const double frac = static_cast<double>(masks.finder.count()) / (224.0 * 224.0);
    for (double phi : c.phi_finder) EXPECT_NEAR(phi, frac, 1e-9);
}

TEST(CoverageCurve, InvalidK) {
    try {
        coverage_curve(field_from_normalized(Image(3, 3, 0.5)), StructureMasks::zeros(3, 3), 1);
        FAIL();
    } catch (const BenchError& e) {
        EXPECT_EQ(e.code(), ErrorCode::InvalidK);
    }
}

TEST(CoverageAucs, MeanOfCurve) {
    CoverageCurve c;
    const int k = 10;
    for (int i = 1; i <= k; ++i) {
        c.thresholds.push_back(0.0);
        c.phi_finder.push_back(1.0);
        c.phi_timing.push_back(static_cast<double>(i) / k);
        c.phi_background.push_back(0.0);
    }
    const auto a = coverage_aucs(c);
    EXPECT_EQ(a.misf, 1.0);
    EXPECT_DOUBLE_EQ(a.mist, (k + 1.0) / (2.0 * k));
    EXPECT_EQ(a.bg, 0.0);
}

TEST(CoverageAucs, InvariantUnderMonotoneRescaling) {
    Rng rng(21);
    for (int trial = 0; trial < 20; ++trial) {
        const auto masks = random_masks(rng, 24, 24);
        const auto base = normalize(random_field(rng, 24, 24));
        const auto ref = coverage_aucs(coverage_curve(base, masks, 32));
        for (int g = 0; g < 2; ++g) {
            Image t = base.normalized;
            for (auto& v : t.values()) v = g == 0 ? v * v : std::sqrt(v);
            const auto a = coverage_aucs(coverage_curve(field_from_normalized(t), masks, 32));
            EXPECT_NEAR(a.misf, ref.misf, 1e-6);
            EXPECT_NEAR(a.mist, ref.mist, 1e-6);
            EXPECT_NEAR(a.bg, ref.bg, 1e-6);
        }
    }
}

TEST(Edt, AllOnesAndSinglePixel) {
    const auto zero = euclidean_distance_transform(BinaryMask{MaskGrid(5, 6, 1), MaskRole::StructureUnion});
    for (double v : zero.grid.values()) EXPECT_EQ(v, 0.0);

    BinaryMask single{MaskGrid(10, 10, 0), MaskRole::StructureUnion};
    single.grid(0, 0) = 1;
    const auto d = euclidean_distance_transform(single);
    EXPECT_EQ(d.grid(3, 4), 5.0);
    EXPECT_EQ(d.grid(0, 0), 0.0);
}

TEST(Edt, MatchesBruteForceExactly) {
    Rng rng(33);
    for (int trial = 0; trial < 60; ++trial) {
        const int h = static_cast<int>(rng.uniform_int(1, 32));
        const int w = static_cast<int>(rng.uniform_int(1, 32));
        BinaryMask m{MaskGrid(h, w, 0), MaskRole::StructureUnion};
        const double p = rng.uniform(0.005, 0.3);
        for (auto& v : m.grid.values()) v = rng.uniform() < p ? 1 : 0;
        m.grid[static_cast<std::size_t>(rng.uniform_int(0, h * w - 1))] = 1;
        const auto got = euclidean_distance_transform(m);
        const auto want = brute_force_edt(m);
        for (std::size_t i = 0; i < want.size(); ++i) ASSERT_EQ(got.grid[i], want[i]) << trial << " " << i;
    }
}

TEST(Edt, LipschitzAcrossNeighbors) {
    Rng rng(34);
    BinaryMask m{MaskGrid(40, 40, 0), MaskRole::StructureUnion};
    for (auto& v : m.grid.values()) v = rng.uniform() < 0.02 ? 1 : 0;
    m.grid[0] = 1;
    const auto d = euclidean_distance_transform(m);
    for (int y = 0; y < 40; ++y) {
        for (int x = 0; x + 1 < 40; ++x) ASSERT_LE(std::abs(d.grid(y, x) - d.grid(y, x + 1)), 1.0 + 1e-12);
    }
}

TEST(Edt, EmptyMaskThrows) {
    try {
        euclidean_distance_transform(BinaryMask{MaskGrid(3, 3, 0), MaskRole::StructureUnion});
        FAIL();
    } catch (const BenchError& e) {
        EXPECT_EQ(e.code(), ErrorCode::EmptyStructure);
    }
}

TEST(Dts, OnStructureIsZero) {
    const auto masks = qr_masks();
    EXPECT_EQ(dts(field_from_normalized(from_mask(masks.structure_union())), masks), 0.0);
}

TEST(Dts, FarthestPixelMass) {
    const auto masks = qr_masks();
    const auto dist = euclidean_distance_transform(masks.structure_union());
    const auto far = std::max_element(dist.grid.values().begin(), dist.grid.values().end());
    Image c(224, 224, 0.0);
    c[static_cast<std::size_t>(far - dist.grid.values().begin())] = 1.0;
    const double value = dts(field_from_normalized(c), masks);
    const double expected = *far / std::hypot(224.0, 224.0);
    EXPECT_NEAR(value, expected, 1e-6);
    EXPECT_LT(value, 1.0);
}

TEST(Dts, MatchesComposedOracle) {
    Rng rng(35);
    for (int trial = 0; trial < 10; ++trial) {
        const auto masks = random_masks(rng, 20, 28);
        const auto sal = normalize(random_field(rng, 20, 28));
        const auto d = brute_force_edt(masks.structure_union());
        double acc = 0.0;
        for (std::size_t i = 0; i < d.size(); ++i) acc += sal.normalized[i] * d[i];
        const double want = acc / (sal.total_mass * std::hypot(20.0, 28.0));
        EXPECT_NEAR(dts(sal, masks), want, 1e-9);
    }
}

TEST(StructureScore, Arithmetic) {
    EXPECT_EQ(structure_score(1, 0, 0, 0), 1.0);
    EXPECT_DOUBLE_EQ(structure_score(0, 0, 1, 0.4), -3.4);
    EXPECT_NEAR(structure_score(0.5, 0.2, 0.1, 0.15), 0.25, 1e-15);
}

TEST(LeakPenalty, Examples) {
    const auto masks = qr_masks();
    const PenaltyParams quarter{1.0, 0.25};
    EXPECT_NEAR(leak_penalty(field_from_normalized(from_mask(masks.box)), masks.box, quarter), -0.25, 1e-9);
    EXPECT_NEAR(leak_penalty(field_from_normalized(from_mask(masks.background())), masks.box, {1.0, 0.7}), 1.0, 1e-9);

    // Half the mass inside the box, half outside.
    Image half(224, 224, 0.0);
    const std::size_t inside = masks.box.count();
    std::size_t placed = 0;
    for (std::size_t i = 0; i < half.size() && placed < inside; ++i) {
        if (!masks.box.grid[i]) {
            half[i] = 1.0;
            ++placed;
        }
    }
    for (std::size_t i = 0; i < half.size(); ++i) {
        if (masks.box.grid[i]) half[i] = 1.0;
    }
    EXPECT_NEAR(leak_penalty(field_from_normalized(half), masks.box, {1.0, 0.0}), 0.5, 1e-9);
}

TEST(Evaluate, AffineInvarianceOfAllMetrics) {
    Rng rng(41);
    for (int trial = 0; trial < 20; ++trial) {
        const auto masks = random_masks(rng, 32, 32);
        const Image raw = random_field(rng, 32, 32);
        const auto ref = evaluate(normalize(raw), masks);
        for (double a : {0.1, 3.0, 10.0}) {
            for (double b : {0.0, 0.5}) {
                Image t = raw;
                for (auto& v : t.values()) v = a * v + b;
                const auto r = evaluate(normalize(t), masks);
                EXPECT_NEAR(r.fmr, ref.fmr, 1e-6);
                EXPECT_NEAR(r.tmr, ref.tmr, 1e-6);
                EXPECT_NEAR(r.bl, ref.bl, 1e-6);
                EXPECT_NEAR(r.auc_misf, ref.auc_misf, 1e-6);
                EXPECT_NEAR(r.auc_mist, ref.auc_mist, 1e-6);
                EXPECT_NEAR(r.auc_bg, ref.auc_bg, 1e-6);
                EXPECT_NEAR(r.dts, ref.dts, 1e-6);
            }
        }
    }
}

TEST(Evaluate, RangesAndScoreIdentity) {
    Rng rng(42);
    for (int trial = 0; trial < 50; ++trial) {
        const auto masks = random_masks(rng, 24, 20);
        const auto r = evaluate(normalize(random_field(rng, 24, 20)), masks);
        EXPECT_LE(r.fmr + r.tmr, 1.0);
        EXPECT_LE(r.bl, 1.0);
        EXPECT_LE(r.fmr + r.tmr + r.bl, 1.0 + 1e-9);
        for (double v : {r.fmr, r.tmr, r.bl, r.auc_misf, r.auc_mist, r.auc_bg, r.dts}) {
            EXPECT_GE(v, 0.0);
            EXPECT_LE(v, 1.0);
        }
        EXPECT_EQ(r.structure_score, r.auc_misf + r.auc_mist - 3.0 * r.auc_bg - r.dts);
    }
}

TEST(Evaluate, AlignsMasksToSaliencyGrid) {
    const auto masks = qr_masks();
    const auto small = align_masks(masks, 56, 56);
    const auto sal = field_from_normalized(from_mask(small.finder));
    const auto r = evaluate(sal, masks);
    EXPECT_NEAR(r.fmr, 1.0, 1e-6);
}

TEST(Evaluate, ConstantSaliencyIsDegenerate) {
    const auto masks = qr_masks();
    const auto r = evaluate(normalize(Image(224, 224, 2.0)), masks);
    EXPECT_TRUE(r.degenerate);
    EXPECT_EQ(r.fmr, 0.0);
    EXPECT_EQ(r.tmr, 0.0);
    EXPECT_EQ(r.bl, 0.0);
    EXPECT_EQ(r.dts, 0.0);
}

}  // namespace
}  // namespace cambench::metrics
