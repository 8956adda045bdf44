// Copyright 2026 The CamBench Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "cambench/core/error.hpp"
#include "cambench/core/rng.hpp"
#include "cambench/robust/aggregator.hpp"

namespace cambench::robust {
namespace {

std::vector<std::vector<LevelSample>> linear_levels(Rng& rng, double a, double b, std::size_t per_level, double noise,
                                                    int levels = 6) {
    std::vector<std::vector<LevelSample>> out(static_cast<std::size_t>(levels));
    for (int j = 0; j < levels; ++j) {
        const double s = static_cast<double>(j) / (levels - 1);
        for (std::size_t i = 0; i < per_level; ++i) {
            out[static_cast<std::size_t>(j)].push_back({a + b * s + noise * rng.normal(), 0.5, 0.2});
        }
    }
    return out;
}

TEST(OlsSlope, Examples) {
    const std::vector<double> x = {0, 0.2, 0.4, 0.6, 0.8, 1.0};
    EXPECT_EQ(ols_slope(x, std::vector<double>(6, 0.3)), 0.0);
    std::vector<double> y;
    for (double v : x) y.push_back(0.1 + 0.2 * v);
    EXPECT_NEAR(ols_slope(x, y), 0.2, 1e-12);
}

TEST(OlsSlope, MatchesClosedFormSums) {
    Rng rng(1);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> x(6), y(6);
        for (std::size_t i = 0; i < 6; ++i) {
            x[i] = rng.uniform(-2, 2);
            y[i] = rng.uniform(-2, 2);
        }
        double sx = 0, sy = 0, sxy = 0, sxx = 0;
        for (std::size_t i = 0; i < 6; ++i) {
            sx += x[i];
            sy += y[i];
            sxy += x[i] * y[i];
            sxx += x[i] * x[i];
        }
        const double expected = (6 * sxy - sx * sy) / (6 * sxx - sx * sx);
        EXPECT_NEAR(ols_slope(x, y), expected, 1e-12);
    }
}

TEST(OlsSlope, Degenerate) {
    try {
        ols_slope(std::vector<double>{1, 1, 1}, std::vector<double>{1, 2, 3});
        FAIL();
    } catch (const BenchError& e) {
        EXPECT_EQ(e.code(), ErrorCode::Undefined);
    }
    EXPECT_THROW(ols_slope(std::vector<double>{1}, std::vector<double>{1}), BenchError);
}

TEST(Aurc, Examples) {
    const std::vector<double> s = {0, 0.25, 0.5, 0.75, 1.0};
    EXPECT_NEAR(aurc(s, std::vector<double>(5, 0.37)), 0.37, 1e-12);
    EXPECT_NEAR(aurc(std::vector<double>{0, 1}, std::vector<double>{1, 0}), 0.5, 1e-15);
    const std::vector<double> m = {0.9, 0.8, 0.5, 0.45, 0.1};
    const double hand = 0.25 * ((0.9 + 0.8) / 2 + (0.8 + 0.5) / 2 + (0.5 + 0.45) / 2 + (0.45 + 0.1) / 2);
    EXPECT_NEAR(aurc(s, m), hand, 1e-15);
    EXPECT_THROW(aurc(std::vector<double>{0}, std::vector<double>{1}), BenchError);
    EXPECT_THROW(aurc(std::vector<double>{0, 0.5, 0.5, 1}, std::vector<double>(4, 0.0)), BenchError);
    EXPECT_THROW(aurc(std::vector<double>{0, 0.5}, std::vector<double>(2, 0.0)), BenchError);
}

TEST(Aurc, InvariantUnderGridRefinementForPiecewiseLinear) {
    const std::vector<double> coarse = {0, 0.4, 1.0};
    const std::vector<double> values = {0.8, 0.3, 0.6};
    const auto interp = [&](double s) {
        return s <= 0.4 ? 0.8 + (0.3 - 0.8) * s / 0.4 : 0.3 + (0.6 - 0.3) * (s - 0.4) / 0.6;
    };
    std::vector<double> fine = {0.0};
    for (int i = 1; i <= 50; ++i) fine.push_back(i * 0.4 / 50);
    for (int i = 1; i <= 60; ++i) fine.push_back(0.4 + i * 0.6 / 60);
    fine.back() = 1.0;
    std::vector<double> fine_values;
    for (double s : fine) fine_values.push_back(interp(s));
    EXPECT_NEAR(aurc(fine, fine_values), aurc(coarse, values), 1e-12);
}

TEST(MeanCi, HalfWidthShrinksWithRootN) {
    Rng rng(2);
    std::vector<double> small(2000), big(8000);
    for (auto& v : small) v = rng.normal();
    for (auto& v : big) v = rng.normal();
    const auto a = mean_ci(small);
    const auto b = mean_ci(big);
    EXPECT_NEAR(b.ci95 / a.ci95, 0.5, 0.05);
    EXPECT_EQ(mean_ci(std::vector<double>{3.0}).ci95, 0.0);
    const auto c = mean_ci(std::vector<double>{1, 2, 3});
    EXPECT_DOUBLE_EQ(c.mean, 2.0);
    EXPECT_DOUBLE_EQ(c.ci95, 1.96 / std::sqrt(3.0));
}

TEST(Series, NormalizedSeverityGrid) {
    Rng rng(3);
    const auto s = build_series("blur", linear_levels(rng, 0.1, 0.15, 3, 0.0));
    EXPECT_EQ(s.severities, (std::vector<double>{0, 0.2, 0.4, 0.6, 0.8, 1.0}));
    EXPECT_EQ(s.bl[0].n, 3u);
    EXPECT_THROW(build_series("x", {{{0.1, 0, 0}}}), BenchError);
    EXPECT_THROW(build_series("x", {{{0.1, 0, 0}}, {}}), BenchError);
}

TEST(Summarize, SingleFamilyAndSymmetricPooling) {
    Rng rng(4);
    const auto a = build_series("rotation", linear_levels(rng, 0.1, 0.3, 4, 0.0));
    const auto b = build_series("blur", linear_levels(rng, 0.2, 0.1, 4, 0.0));
    const std::vector<SeveritySeries> one = {a};
    EXPECT_NEAR(summarize(one).bl_slope, 0.3, 1e-12);
    const std::vector<SeveritySeries> two = {a, b};
    EXPECT_NEAR(summarize(two, Aggregation::Pooled).bl_slope, 0.2, 1e-12);
    EXPECT_NEAR(summarize(two, Aggregation::PerFamily).bl_slope, 0.2, 1e-12);
    const auto sum = summarize(two);
    EXPECT_NEAR(sum.fmr_aurc, 0.5, 1e-12);
    EXPECT_NEAR(sum.tmr_aurc, 0.2, 1e-12);
    ASSERT_EQ(sum.families.size(), 2u);
    EXPECT_NEAR(sum.families[1].bl_slope, 0.1, 1e-12);
}

TEST(Summarize, RecoversInjectedSlope) {
    Rng rng(5);
    const auto s = build_series("occlusion", linear_levels(rng, 0.1, 0.15, 200, 0.05));
    const std::vector<SeveritySeries> v = {s};
    EXPECT_NEAR(summarize(v).bl_slope, 0.15, 0.01);
}

TEST(Summarize, PermutationInvariantOverSamples) {
    Rng rng(6);
    auto levels = linear_levels(rng, 0.1, 0.15, 50, 0.05);
    const auto a = summarize(std::vector<SeveritySeries>{build_series("f", levels)});
    for (auto& level : levels) std::reverse(level.begin(), level.end());
    const auto b = summarize(std::vector<SeveritySeries>{build_series("f", levels)});
    EXPECT_NEAR(a.bl_slope, b.bl_slope, 1e-15);
    EXPECT_NEAR(a.fmr_aurc, b.fmr_aurc, 1e-15);
}

}  // namespace
}  // namespace cambench::robust
