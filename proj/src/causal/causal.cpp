// Copyright 2026 The CamBench Authors
// SPDX-License-Identifier: Apache-2.0

#include "cambench/causal/causal.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

#include "cambench/core/error.hpp"
#include "cambench/core/rng.hpp"
#include "cambench/distort/distortion.hpp"
#include "cambench/metrics/structure_metrics.hpp"

namespace cambench::causal {

namespace {

constexpr std::array<std::string_view, 4> kPartNames = {"finder", "timing", "box", "random-background"};

double log_choose(std::size_t n, std::size_t k) {
    return std::lgamma(static_cast<double>(n) + 1.0) - std::lgamma(static_cast<double>(k) + 1.0) -
           std::lgamma(static_cast<double>(n - k) + 1.0);
}

}  // namespace

std::string_view to_string(Part part) { return kPartNames.at(static_cast<std::size_t>(part)); }

Part parse_part(std::string_view text) {
    for (std::size_t i = 0; i < kPartNames.size(); ++i) {
        if (kPartNames[i] == text) return static_cast<Part>(i);
    }
    throw BenchError(ErrorCode::InvalidArgument, "unknown part '" + std::string(text) + "'");
}

MaskGrid occlusion_region(const StructureMasks& masks, Part part, std::uint64_t seed) {
    MaskGrid region(masks.height(), masks.width(), 0);
    switch (part) {
        case Part::Finder:
            region = masks.finder.grid;
            break;
        case Part::Timing:
            region = masks.timing.grid;
            break;
        case Part::Box:
            region = masks.box.grid;
            break;
        case Part::RandomBackground: {
            const std::size_t area = masks.finder.count();
            std::vector<std::size_t> background;
            for (std::size_t i = 0; i < region.size(); ++i) {
                if (!masks.box.grid[i]) background.push_back(i);
            }
            if (background.empty() || area == 0) break;
            Rng rng(seed);
            const auto w = static_cast<std::size_t>(masks.width());
            const std::size_t anchor = background[static_cast<std::size_t>(
                rng.uniform_int(0, static_cast<std::int64_t>(background.size()) - 1))];
            const auto ay = static_cast<long>(anchor / w);
            const auto ax = static_cast<long>(anchor % w);
            const auto key = [&](std::size_t i) {
                const long dy = static_cast<long>(i / w) - ay;
                const long dx = static_cast<long>(i % w) - ax;
                return std::pair{dy * dy + dx * dx, i};
            };
            const std::size_t take = std::min(area, background.size());
            std::nth_element(background.begin(), background.begin() + static_cast<std::ptrdiff_t>(take - 1),
                             background.end(), [&](std::size_t a, std::size_t b) { return key(a) < key(b); });
            for (std::size_t k = 0; k < take; ++k) region[background[k]] = 1;
            break;
        }
    }
    if (std::none_of(region.values().begin(), region.values().end(), [](std::uint8_t v) { return v != 0; })) {
        throw BenchError(ErrorCode::EmptyStructure, "occlusion region for '" + std::string(to_string(part)) + "' is empty");
    }
    return region;
}

Image occlude_structure(const Image& image, const StructureMasks& masks, Part part, double fill, std::uint64_t seed) {
    require_same_shape(image, masks.box.grid, "occlude_structure: image and masks differ in shape");
    const auto region = occlusion_region(masks, part, seed);
    Image out = image;
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (region[i]) out[i] = fill;
    }
    return out;
}

Image make_baseline(const Image& image, Baseline kind) {
    if (kind == Baseline::Gray) return Image(image.height(), image.width(), kOcclusionFill);
    return distort::gaussian_blur(image, kInsertionBlurSigma);
}

std::vector<std::size_t> saliency_order(const Image& normalized) {
    std::vector<std::size_t> order(normalized.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return normalized[a] > normalized[b]; });
    return order;
}

InsertionDeletion insertion_deletion(const SaliencyField& sal, const Image& image, Scorer& scorer,
                                     const InsertionDeletionOptions& options) {
    if (options.steps < 2) throw BenchError(ErrorCode::InvalidArgument, "insertion/deletion needs steps >= 2");
    require_same_shape(sal.normalized, image, "insertion_deletion: saliency and image differ in shape");
    const auto order = saliency_order(sal.normalized);
    const Image deletion_base = make_baseline(image, options.deletion_baseline);
    const Image insertion_base = make_baseline(image, options.insertion_baseline);
    Image deleted = image;
    Image inserted = insertion_base;

    InsertionDeletion out;
    const auto n = static_cast<double>(image.size());
    std::size_t done = 0;
    for (int i = 0; i < options.steps; ++i) {
        const double f = static_cast<double>(i) / (options.steps - 1);
        const auto target = i == options.steps - 1 ? image.size() : static_cast<std::size_t>(std::llround(f * n));
        for (; done < target; ++done) {
            const std::size_t p = order[done];
            deleted[p] = deletion_base[p];
            inserted[p] = image[p];
        }
        out.fractions.push_back(f);
        out.deletion.push_back(scorer.score(deleted));
        out.insertion.push_back(scorer.score(inserted));
    }
    out.insertion_auc = trapezoid(out.fractions, out.insertion);
    out.deletion_auc = trapezoid(out.fractions, out.deletion);
    return out;
}

double trapezoid(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw BenchError(ErrorCode::ShapeError, "trapezoid: length mismatch");
    double acc = 0.0;
    for (std::size_t i = 1; i < x.size(); ++i) acc += (x[i] - x[i - 1]) * (y[i] + y[i - 1]) / 2.0;
    return acc;
}

std::vector<double> average_ranks(std::span<const double> values) {
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> ranks(values.size());
    for (std::size_t i = 0; i < order.size();) {
        std::size_t j = i;
        while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) ++j;
        const double rank = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
        i = j + 1;
    }
    return ranks;
}

std::optional<double> spearman(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw BenchError(ErrorCode::ShapeError, "spearman: length mismatch");
    if (x.size() < 3) throw BenchError(ErrorCode::NotEnoughData, "spearman needs at least 3 points");
    const auto rx = average_ranks(x);
    const auto ry = average_ranks(y);
    const double mean = (static_cast<double>(x.size()) + 1.0) / 2.0;
    double sxy = 0.0;
    double sxx = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < rx.size(); ++i) {
        sxy += (rx[i] - mean) * (ry[i] - mean);
        sxx += (rx[i] - mean) * (rx[i] - mean);
        syy += (ry[i] - mean) * (ry[i] - mean);
    }
    if (sxx == 0.0 || syy == 0.0) return std::nullopt;
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

SignTest sign_test(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw BenchError(ErrorCode::ShapeError, "sign_test: length mismatch");
    SignTest t;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] > b[i]) {
            ++t.positive;
        } else if (a[i] < b[i]) {
            ++t.negative;
        } else {
            ++t.ties;
        }
    }
    const std::size_t n = t.positive + t.negative;
    double p = 0.0;
    for (std::size_t k = t.positive; k <= n; ++k) p += std::exp(log_choose(n, k) - static_cast<double>(n) * std::log(2.0));
    t.p_value = std::min(1.0, p);
    return t;
}

CausalRecord causal_record(const CausalInput& input, Scorer& scorer, const CausalOptions& options) {
    CausalRecord r;
    r.sample_id = input.sample_id;
    const auto masks = (input.masks.height() == input.saliency.normalized.height() &&
                        input.masks.width() == input.saliency.normalized.width())
                           ? input.masks
                           : align_masks(input.masks, input.saliency.normalized.height(), input.saliency.normalized.width());
    const auto ratios = metrics::mass_ratios(input.saliency, masks);
    r.fmr = ratios.fmr;
    r.tmr = ratios.tmr;
    r.logit = scorer.score(input.image);
    r.delta_finder = r.logit - scorer.score(occlude_structure(input.image, input.masks, Part::Finder, options.fill));
    r.delta_timing = r.logit - scorer.score(occlude_structure(input.image, input.masks, Part::Timing, options.fill));
    r.delta_background = r.logit - scorer.score(occlude_structure(input.image, input.masks, Part::RandomBackground,
                                                                  options.fill, input.seed));
    if (options.steps >= 2) {
        auto curve_options = options.curves;
        curve_options.steps = options.steps;
        const auto curves = insertion_deletion(input.saliency, input.image, scorer, curve_options);
        r.insertion_auc = curves.insertion_auc;
        r.deletion_auc = curves.deletion_auc;
    }
    return r;
}

CorrelationSummary summarize_causal(std::span<const CausalRecord> records) {
    if (records.size() < 3) throw BenchError(ErrorCode::NotEnoughData, "causal summary needs at least 3 positives");
    std::vector<double> fmr, tmr, df, dt, db;
    for (const auto& r : records) {
        fmr.push_back(r.fmr);
        tmr.push_back(r.tmr);
        df.push_back(r.delta_finder);
        dt.push_back(r.delta_timing);
        db.push_back(r.delta_background);
    }
    CorrelationSummary s;
    s.n = records.size();
    s.rho_finder = spearman(fmr, df);
    s.rho_timing = spearman(tmr, dt);
    const auto mean = [](const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size()); };
    s.mean_delta_finder = mean(df);
    s.mean_delta_timing = mean(dt);
    s.mean_delta_background = mean(db);
    s.finder_vs_background = sign_test(df, db);
    return s;
}

}  // namespace cambench::causal
