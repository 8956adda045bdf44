// Copyright 2026 The CamBench Authors
// SPDX-License-Identifier: Apache-2.0

#include "cambench/metrics/structure_metrics.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>

namespace cambench::metrics {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Values in [0, 1] map monotonically onto this many buckets.
constexpr std::size_t kBuckets = 4096;

std::size_t bucket_of(double v) {
    return std::min(kBuckets - 1, static_cast<std::size_t>(std::max(0.0, v) * static_cast<double>(kBuckets)));
}

// Order statistics at the sorted, unique ranks in `ranks`. Inputs inside
// [0, 1] are bucketed so only buckets holding a requested rank get sorted;
// anything else falls back to a full sort.
std::vector<double> order_statistics(std::span<const double> values, const std::vector<std::size_t>& ranks) {
    const bool unit = std::all_of(values.begin(), values.end(), [](double v) { return v >= 0.0 && v <= 1.0; });
    std::vector<double> out(ranks.size());
    if (!unit) {
        std::vector<double> work(values.begin(), values.end());
        std::sort(work.begin(), work.end());
        for (std::size_t i = 0; i < ranks.size(); ++i) out[i] = work[ranks[i]];
        return out;
    }
    std::vector<std::size_t> start(kBuckets + 1, 0);
    for (double v : values) ++start[bucket_of(v) + 1];
    for (std::size_t b = 0; b < kBuckets; ++b) start[b + 1] += start[b];

    std::vector<std::uint8_t> wanted(kBuckets, 0);
    for (std::size_t r : ranks) {
        const auto b = static_cast<std::size_t>(std::upper_bound(start.begin(), start.end(), r) - start.begin()) - 1;
        wanted[b] = 1;
    }
    std::vector<std::size_t> fill(start.begin(), start.end() - 1);
    std::vector<double> gathered(values.size());
    for (double v : values) {
        const std::size_t b = bucket_of(v);
        if (wanted[b]) gathered[fill[b]++] = v;
    }
    for (std::size_t b = 0; b < kBuckets; ++b) {
        const auto lo = gathered.begin() + static_cast<std::ptrdiff_t>(start[b]);
        const auto hi = gathered.begin() + static_cast<std::ptrdiff_t>(start[b + 1]);
        if (wanted[b] && std::adjacent_find(lo, hi, std::not_equal_to<>()) != hi) std::sort(lo, hi);
    }
    for (std::size_t i = 0; i < ranks.size(); ++i) out[i] = gathered[ranks[i]];
    return out;
}

// 1-D squared distance transform of f (kInf = no site) into d. Scratch
// buffers are caller-owned so the 2-D pass allocates once.
void edt_1d(const double* f, double* d, int n, std::vector<int>& sites, std::vector<double>& bounds) {
    int k = -1;
    for (int q = 0; q < n; ++q) {
        if (f[q] == kInf) continue;
        const double fq = f[q] + static_cast<double>(q) * q;
        double s = -kInf;
        while (k >= 0) {
            const int v = sites[static_cast<std::size_t>(k)];
            s = (fq - (f[v] + static_cast<double>(v) * v)) / (2.0 * (q - v));
            if (s > bounds[static_cast<std::size_t>(k)]) break;
            --k;
        }
        if (k < 0) s = -kInf;
        ++k;
        sites[static_cast<std::size_t>(k)] = q;
        bounds[static_cast<std::size_t>(k)] = s;
    }
    if (k < 0) {
        for (int q = 0; q < n; ++q) d[q] = kInf;
        return;
    }
    int j = 0;
    for (int q = 0; q < n; ++q) {
        while (j < k && bounds[static_cast<std::size_t>(j + 1)] < q) ++j;
        const int v = sites[static_cast<std::size_t>(j)];
        const double dq = static_cast<double>(q - v);
        d[q] = dq * dq + f[v];
    }
}

}  // namespace

MassRatios mass_ratios(const SaliencyField& sal, const StructureMasks& masks) {
    const auto& c = sal.normalized;
    require_same_shape(c, masks.finder.grid, "saliency/finder mask shape mismatch");
    require_same_shape(c, masks.timing.grid, "saliency/timing mask shape mismatch");
    require_same_shape(c, masks.box.grid, "saliency/box mask shape mismatch");

    const auto cv = c.values();
    const auto f = masks.finder.grid.values();
    const auto t = masks.timing.grid.values();
    const auto b = masks.box.grid.values();
    double on_finder = 0.0;
    double on_timing = 0.0;
    double off_box = 0.0;
    for (std::size_t i = 0; i < cv.size(); ++i) {
        const double v = cv[i];
        if (f[i]) on_finder += v;
        if (t[i]) on_timing += v;
        if (!b[i]) off_box += v;
    }
    return {on_finder / sal.total_mass, on_timing / sal.total_mass, off_box / sal.total_mass};
}

std::vector<double> quantiles(std::span<const double> values, std::span<const double> levels) {
    if (values.empty()) throw BenchError(ErrorCode::InvalidArgument, "quantiles of an empty sequence");
    const std::size_t n = values.size();
    std::vector<std::size_t> positions;
    positions.reserve(2 * levels.size());
    for (double q : levels) {
        if (!(q >= 0.0 && q <= 1.0)) throw BenchError(ErrorCode::InvalidArgument, "quantile level outside [0, 1]");
        const auto lo = static_cast<std::size_t>(std::floor(q * static_cast<double>(n - 1)));
        positions.push_back(lo);
        if (lo + 1 < n) positions.push_back(lo + 1);
    }
    std::sort(positions.begin(), positions.end());
    positions.erase(std::unique(positions.begin(), positions.end()), positions.end());

    const auto stats = order_statistics(values, positions);
    const auto at = [&](std::size_t rank) {
        return stats[static_cast<std::size_t>(std::lower_bound(positions.begin(), positions.end(), rank) - positions.begin())];
    };

    std::vector<double> out;
    out.reserve(levels.size());
    for (double q : levels) {
        const double h = q * static_cast<double>(n - 1);
        const auto lo = static_cast<std::size_t>(std::floor(h));
        const double frac = h - static_cast<double>(lo);
        const double a = at(lo);
        out.push_back(frac > 0.0 && lo + 1 < n ? a + frac * (at(lo + 1) - a) : a);
    }
    return out;
}

CoverageCurve coverage_curve(const SaliencyField& sal, const StructureMasks& masks, int k) {
    if (k < 2) throw BenchError(ErrorCode::InvalidK, "coverage curve needs K >= 2");
    const auto& c = sal.normalized;
    require_same_shape(c, masks.finder.grid, "saliency/finder mask shape mismatch");
    require_same_shape(c, masks.timing.grid, "saliency/timing mask shape mismatch");
    require_same_shape(c, masks.box.grid, "saliency/box mask shape mismatch");

    std::vector<double> levels(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) levels[static_cast<std::size_t>(i)] = static_cast<double>(i + 1) / (k + 1);

    CoverageCurve curve;
    curve.thresholds = quantiles(c.values(), levels);
    const auto& tau = curve.thresholds;

    // hist[j] counts pixels whose value clears exactly the first j thresholds;
    // a pixel lies in S_tau_k iff j > k.
    const std::size_t bins = static_cast<std::size_t>(k) + 1;
    std::vector<std::int64_t> total(bins, 0), finder(bins, 0), timing(bins, 0), background(bins, 0);
    const auto cv = c.values();
    const auto f = masks.finder.grid.values();
    const auto t = masks.timing.grid.values();
    const auto b = masks.box.grid.values();
    // Thresholds in lower buckets are all cleared and those in higher buckets
    // none, so each pixel only searches the thresholds sharing its bucket.
    const bool unit = tau.front() >= 0.0 && tau.back() <= 1.0 &&
                      std::all_of(cv.begin(), cv.end(), [](double v) { return v >= 0.0 && v <= 1.0; });
    std::vector<std::uint32_t> first;
    std::vector<std::uint32_t> last;
    if (unit) {
        first.assign(kBuckets, 0);
        last.assign(kBuckets, 0);
        std::size_t next = 0;
        for (std::size_t bucket = 0; bucket < kBuckets; ++bucket) {
            first[bucket] = static_cast<std::uint32_t>(next);
            while (next < tau.size() && bucket_of(tau[next]) == bucket) ++next;
            last[bucket] = static_cast<std::uint32_t>(next);
        }
    }
    for (std::size_t i = 0; i < cv.size(); ++i) {
        const double v = cv[i];
        auto lo = tau.begin();
        auto hi = tau.end();
        if (unit) {
            const std::size_t bucket = bucket_of(v);
            lo = tau.begin() + first[bucket];
            hi = tau.begin() + last[bucket];
        }
        const auto j = static_cast<std::size_t>(std::upper_bound(lo, hi, v) - tau.begin());
        ++total[j];
        finder[j] += f[i] ? 1 : 0;
        timing[j] += t[i] ? 1 : 0;
        background[j] += b[i] ? 0 : 1;
    }

    curve.phi_finder.assign(static_cast<std::size_t>(k), 0.0);
    curve.phi_timing.assign(static_cast<std::size_t>(k), 0.0);
    curve.phi_background.assign(static_cast<std::size_t>(k), 0.0);
    std::int64_t st = 0, sf = 0, stm = 0, sb = 0;
    for (std::size_t j = bins - 1; j >= 1; --j) {
        st += total[j];
        sf += finder[j];
        stm += timing[j];
        sb += background[j];
        const std::size_t idx = j - 1;
        const double denom = static_cast<double>(st) + sal.epsilon;
        curve.phi_finder[idx] = static_cast<double>(sf) / denom;
        curve.phi_timing[idx] = static_cast<double>(stm) / denom;
        curve.phi_background[idx] = static_cast<double>(sb) / denom;
    }
    return curve;
}

CoverageAucs coverage_aucs(const CoverageCurve& curve) {
    const double k = static_cast<double>(curve.thresholds.size());
    CoverageAucs a;
    for (std::size_t i = 0; i < curve.thresholds.size(); ++i) {
        a.misf += curve.phi_finder[i];
        a.mist += curve.phi_timing[i];
        a.bg += curve.phi_background[i];
    }
    a.misf /= k;
    a.mist /= k;
    a.bg /= k;
    return a;
}

DistanceField euclidean_distance_transform(const BinaryMask& structure) {
    const int h = structure.height();
    const int w = structure.width();
    bool any = false;
    for (auto v : structure.grid.values()) any = any || v != 0;
    if (!any) throw BenchError(ErrorCode::EmptyStructure, "distance transform of an empty mask");

    Image sq(h, w, 0.0);

    const int n = std::max(h, w);
    std::vector<int> sites(static_cast<std::size_t>(n));
    std::vector<double> bounds(static_cast<std::size_t>(n) + 1);
    std::vector<double> in(static_cast<std::size_t>(n));
    std::vector<double> out(static_cast<std::size_t>(n));

    // Column pass on a binary mask: nearest set pixel above or below, found by
    // two row-order sweeps.
    const double far = static_cast<double>(h + w);
    std::vector<double> run(static_cast<std::size_t>(w), far);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            auto& r = run[static_cast<std::size_t>(x)];
            r = structure.grid(y, x) ? 0.0 : r + 1.0;
            sq(y, x) = r;
        }
    }
    std::fill(run.begin(), run.end(), far);
    for (int y = h - 1; y >= 0; --y) {
        for (int x = 0; x < w; ++x) {
            auto& r = run[static_cast<std::size_t>(x)];
            r = structure.grid(y, x) ? 0.0 : r + 1.0;
            const double d = std::min(sq(y, x), r);
            sq(y, x) = d >= far ? kInf : d * d;
        }
    }
    for (int y = 0; y < h; ++y) {
        double* row = sq.data() + static_cast<std::size_t>(y) * static_cast<std::size_t>(w);
        std::copy(row, row + w, in.begin());
        edt_1d(in.data(), row, w, sites, bounds);
    }
    for (auto& v : sq.values()) v = std::sqrt(v);
    return DistanceField{std::move(sq)};
}

double dts(const SaliencyField& sal, const DistanceField& distance) {
    const double diag = std::hypot(static_cast<double>(sal.normalized.height()), static_cast<double>(sal.normalized.width()));
    return inner_product(sal.normalized, distance.grid) / (sal.total_mass * diag);
}

double dts(const SaliencyField& sal, const StructureMasks& masks) {
    require_same_shape(sal.normalized, masks.finder.grid, "saliency/mask shape mismatch");
    return dts(sal, euclidean_distance_transform(masks.structure_union()));
}

double structure_score(double auc_misf, double auc_mist, double auc_bg, double dts_value) {
    return auc_misf + auc_mist - 3.0 * auc_bg - dts_value;
}

double leak_penalty(const SaliencyField& sal, const BinaryMask& box, const PenaltyParams& params) {
    require_same_shape(sal.normalized, box.grid, "saliency/box mask shape mismatch");
    const auto cv = sal.normalized.values();
    const auto b = box.grid.values();
    double inside = 0.0;
    double outside = 0.0;
    for (std::size_t i = 0; i < cv.size(); ++i) {
        if (b[i]) {
            inside += cv[i];
        } else {
            outside += cv[i];
        }
    }
    return outside / sal.total_mass - params.alpha * (inside / sal.total_mass);
}

MetricReport evaluate(const SaliencyField& sal, const StructureMasks& masks, const MetricOptions& options) {
    const auto start = std::chrono::steady_clock::now();
    const int h = sal.normalized.height();
    const int w = sal.normalized.width();
    std::optional<StructureMasks> resized;
    if (masks.height() != h || masks.width() != w) resized = align_masks(masks, h, w);
    const StructureMasks& aligned = resized ? *resized : masks;

    MetricReport r;
    const auto ratios = mass_ratios(sal, aligned);
    r.fmr = ratios.fmr;
    r.tmr = ratios.tmr;
    r.bl = ratios.bl;
    const auto aucs = coverage_aucs(coverage_curve(sal, aligned, options.quantiles));
    r.auc_misf = aucs.misf;
    r.auc_mist = aucs.mist;
    r.auc_bg = aucs.bg;
    r.dts = dts(sal, aligned);
    r.structure_score = structure_score(r.auc_misf, r.auc_mist, r.auc_bg, r.dts);
    r.leak_penalty = leak_penalty(sal, aligned.box, options.penalty);
    r.degenerate = sal.degenerate;
    r.eval_latency_us = std::chrono::duration_cast<std::chrono::microseconds>(std::chrono::steady_clock::now() - start).count();
    return r;
}

}  // namespace cambench::metrics
