// Copyright 2026 The CamBench Authors
// SPDX-License-Identifier: Apache-2.0

#include "cambench/robust/aggregator.hpp"

#include <cmath>

#include "cambench/core/error.hpp"

namespace cambench::robust {

namespace {

std::vector<double> means(const std::vector<MeanCi>& v) {
    std::vector<double> out;
    out.reserve(v.size());
    for (const auto& m : v) out.push_back(m.mean);
    return out;
}

}  // namespace

double ols_slope(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw BenchError(ErrorCode::ShapeError, "ols_slope: length mismatch");
    if (x.size() < 2) throw BenchError(ErrorCode::Undefined, "ols_slope needs at least 2 points");
    const auto n = static_cast<double>(x.size());
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0;
    double sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    if (sxx == 0.0) throw BenchError(ErrorCode::Undefined, "ols_slope: x has zero variance");
    return sxy / sxx;
}

double aurc(std::span<const double> severities, std::span<const double> metric) {
    if (severities.size() != metric.size()) throw BenchError(ErrorCode::ShapeError, "aurc: length mismatch");
    if (severities.size() < 2) throw BenchError(ErrorCode::Undefined, "aurc needs at least 2 points");
    if (severities.front() != 0.0 || severities.back() != 1.0) {
        throw BenchError(ErrorCode::InvalidArgument, "aurc: severities must span [0, 1]");
    }
    double area = 0.0;
    for (std::size_t i = 1; i < severities.size(); ++i) {
        const double ds = severities[i] - severities[i - 1];
        if (!(ds > 0.0)) throw BenchError(ErrorCode::InvalidArgument, "aurc: severities must be strictly increasing");
        area += ds * (metric[i] + metric[i - 1]) / 2.0;
    }
    return area;
}

MeanCi mean_ci(std::span<const double> values) {
    MeanCi r;
    r.n = values.size();
    if (values.empty()) return r;
    for (double v : values) r.mean += v;
    r.mean /= static_cast<double>(r.n);
    if (r.n < 2) return r;
    double ss = 0.0;
    for (double v : values) ss += (v - r.mean) * (v - r.mean);
    const double sd = std::sqrt(ss / static_cast<double>(r.n - 1));
    r.ci95 = 1.96 * sd / std::sqrt(static_cast<double>(r.n));
    return r;
}

std::vector<double> SeveritySeries::bl_means() const { return means(bl); }
std::vector<double> SeveritySeries::fmr_means() const { return means(fmr); }
std::vector<double> SeveritySeries::tmr_means() const { return means(tmr); }

SeveritySeries build_series(std::string family, const std::vector<std::vector<LevelSample>>& levels) {
    if (levels.size() < 2) throw BenchError(ErrorCode::InvalidArgument, "a severity series needs the clean level and one more");
    SeveritySeries s;
    s.family = std::move(family);
    const auto last = static_cast<double>(levels.size() - 1);
    for (std::size_t j = 0; j < levels.size(); ++j) {
        if (levels[j].empty()) throw BenchError(ErrorCode::InvalidArgument, "severity level " + std::to_string(j) + " has no samples");
        std::vector<double> bl, fmr, tmr;
        for (const auto& x : levels[j]) {
            bl.push_back(x.bl);
            fmr.push_back(x.fmr);
            tmr.push_back(x.tmr);
        }
        s.severities.push_back(static_cast<double>(j) / last);
        s.bl.push_back(mean_ci(bl));
        s.fmr.push_back(mean_ci(fmr));
        s.tmr.push_back(mean_ci(tmr));
    }
    return s;
}

RobustnessSummary summarize(std::span<const SeveritySeries> series, Aggregation aggregation) {
    if (series.empty()) throw BenchError(ErrorCode::Undefined, "no severity series to summarize");
    RobustnessSummary out;
    std::vector<double> pooled_s, pooled_bl, slopes, fmr_aurcs, tmr_aurcs;
    for (const auto& s : series) {
        FamilySummary f;
        f.family = s.family;
        const auto bl = s.bl_means();
        f.bl_slope = ols_slope(s.severities, bl);
        f.fmr_aurc = aurc(s.severities, s.fmr_means());
        f.tmr_aurc = aurc(s.severities, s.tmr_means());
        pooled_s.insert(pooled_s.end(), s.severities.begin(), s.severities.end());
        pooled_bl.insert(pooled_bl.end(), bl.begin(), bl.end());
        slopes.push_back(f.bl_slope);
        fmr_aurcs.push_back(f.fmr_aurc);
        tmr_aurcs.push_back(f.tmr_aurc);
        out.families.push_back(std::move(f));
    }
    const auto slope_stats = mean_ci(slopes);
    const auto fmr_stats = mean_ci(fmr_aurcs);
    const auto tmr_stats = mean_ci(tmr_aurcs);
    out.bl_slope = aggregation == Aggregation::Pooled ? ols_slope(pooled_s, pooled_bl) : slope_stats.mean;
    out.fmr_aurc = fmr_stats.mean;
    out.tmr_aurc = tmr_stats.mean;
    out.bl_slope_ci95 = slope_stats.ci95;
    out.fmr_aurc_ci95 = fmr_stats.ci95;
    out.tmr_aurc_ci95 = tmr_stats.ci95;
    return out;
}

}  // namespace cambench::robust
