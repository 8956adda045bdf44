// Copyright 2026 The CamBench Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace cambench::robust {

/// OLS slope of y on x. Throws Undefined for n < 2 or constant x.
double ols_slope(std::span<const double> x, std::span<const double> y);

/// Trapezoidal area of `metric` over `severities`, which must be strictly
/// increasing from 0 to 1. Throws Undefined for fewer than 2 points.
double aurc(std::span<const double> severities, std::span<const double> metric);

struct MeanCi {
    double mean = 0.0;
    /// 1.96 * sample sd / sqrt(n); 0 when n < 2.
    double ci95 = 0.0;
    std::size_t n = 0;
};

MeanCi mean_ci(std::span<const double> values);

/// Per-sample metric triple observed at one severity level.
struct LevelSample {
    double bl = 0.0;
    double fmr = 0.0;
    double tmr = 0.0;
};

struct SeveritySeries {
    std::string family;
    /// s_j = j / J with s_0 = 0 the clean level.
    std::vector<double> severities;
    std::vector<MeanCi> bl;
    std::vector<MeanCi> fmr;
    std::vector<MeanCi> tmr;

    std::vector<double> bl_means() const;
    std::vector<double> fmr_means() const;
    std::vector<double> tmr_means() const;
};

/// `levels[j]` holds the samples at level j; level 0 is clean. Throws
/// InvalidArgument for fewer than 2 levels or an empty level.
SeveritySeries build_series(std::string family, const std::vector<std::vector<LevelSample>>& levels);

enum class Aggregation { PerFamily, Pooled };

struct FamilySummary {
    std::string family;
    double bl_slope = 0.0;
    double fmr_aurc = 0.0;
    double tmr_aurc = 0.0;
};

struct RobustnessSummary {
    double bl_slope = 0.0;
    double fmr_aurc = 0.0;
    double tmr_aurc = 0.0;
    /// Spread of each statistic across families, 1.96 sd / sqrt(families).
    double bl_slope_ci95 = 0.0;
    double fmr_aurc_ci95 = 0.0;
    double tmr_aurc_ci95 = 0.0;
    std::vector<FamilySummary> families;
};

/// Pooled: slope over all (s, mean BL) points of every family. PerFamily:
/// mean of per-family slopes. AURCs are always equal-weight family means.
RobustnessSummary summarize(std::span<const SeveritySeries> series, Aggregation aggregation = Aggregation::Pooled);

}  // namespace cambench::robust
