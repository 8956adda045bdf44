// Copyright 2026 The CamBench Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cambench/causal/scorer.hpp"
#include "cambench/core/grid.hpp"
#include "cambench/core/saliency.hpp"

namespace cambench::causal {

enum class Part { Finder, Timing, Box, RandomBackground };

std::string_view to_string(Part part);
Part parse_part(std::string_view text);

inline constexpr double kOcclusionFill = 0.5;

/// Region that `occlude_structure` overwrites. RandomBackground selects the
/// |M_F| background pixels nearest (squared distance, then row-major) to a
/// seeded background pixel. Throws EmptyStructure when the region is empty.
MaskGrid occlusion_region(const StructureMasks& masks, Part part, std::uint64_t seed);

Image occlude_structure(const Image& image, const StructureMasks& masks, Part part, double fill = kOcclusionFill,
                        std::uint64_t seed = 0);

enum class Baseline { Gray, Blur };

inline constexpr double kInsertionBlurSigma = 8.0;
inline constexpr int kDefaultSteps = 100;

struct InsertionDeletion {
    std::vector<double> fractions;
    std::vector<double> insertion;
    std::vector<double> deletion;
    double insertion_auc = 0.0;
    double deletion_auc = 0.0;
};

struct InsertionDeletionOptions {
    int steps = kDefaultSteps;
    Baseline insertion_baseline = Baseline::Blur;
    Baseline deletion_baseline = Baseline::Gray;
};

Image make_baseline(const Image& image, Baseline kind);

/// Pixel order by descending saliency, ties by ascending index.
std::vector<std::size_t> saliency_order(const Image& normalized);

/// Curves on the grid f_i = i / (steps - 1). The top round(f N) pixels are
/// replaced by the deletion baseline, or restored onto the insertion baseline.
/// Throws InvalidArgument for steps < 2 or a saliency/image shape mismatch.
InsertionDeletion insertion_deletion(const SaliencyField& sal, const Image& image, Scorer& scorer,
                                     const InsertionDeletionOptions& options = {});

double trapezoid(std::span<const double> x, std::span<const double> y);

/// Mean ranks (1-based) with ties averaged.
std::vector<double> average_ranks(std::span<const double> values);

/// Pearson correlation of average ranks; nullopt when either rank vector has
/// zero variance. Throws ShapeError on length mismatch, NotEnoughData for n<3.
std::optional<double> spearman(std::span<const double> x, std::span<const double> y);

struct SignTest {
    std::size_t positive = 0;
    std::size_t negative = 0;
    std::size_t ties = 0;
    /// One-sided P(X >= positive) under Binomial(positive + negative, 1/2).
    double p_value = 1.0;
};

/// Sign test of a[i] > b[i], ties dropped.
SignTest sign_test(std::span<const double> a, std::span<const double> b);

struct CausalRecord {
    std::string sample_id;
    double fmr = 0.0;
    double tmr = 0.0;
    double logit = 0.0;
    double delta_finder = 0.0;
    double delta_timing = 0.0;
    double delta_background = 0.0;
    std::optional<double> insertion_auc;
    std::optional<double> deletion_auc;
};

struct CorrelationSummary {
    std::optional<double> rho_finder;
    std::optional<double> rho_timing;
    std::size_t n = 0;
    double mean_delta_finder = 0.0;
    double mean_delta_timing = 0.0;
    double mean_delta_background = 0.0;
    /// delta_finder versus delta_background.
    SignTest finder_vs_background;
};

struct CausalInput {
    std::string sample_id;
    Image image;
    StructureMasks masks;
    SaliencyField saliency;
    std::uint64_t seed = 0;
};

struct CausalOptions {
    double fill = kOcclusionFill;
    /// 0 disables insertion/deletion.
    int steps = 0;
    InsertionDeletionOptions curves;
};

CausalRecord causal_record(const CausalInput& input, Scorer& scorer, const CausalOptions& options = {});

/// Summary over records, in whatever order they are given. Throws
/// NotEnoughData for fewer than 3 records.
CorrelationSummary summarize_causal(std::span<const CausalRecord> records);

}  // namespace cambench::causal
