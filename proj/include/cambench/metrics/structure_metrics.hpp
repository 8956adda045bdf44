// Copyright 2026 The CamBench Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <vector>

#include "cambench/core/grid.hpp"
#include "cambench/core/saliency.hpp"

namespace cambench::metrics {

inline constexpr int kDefaultQuantiles = 32;

struct MassRatios {
    double fmr = 0.0;
    double tmr = 0.0;
    double bl = 0.0;
};

/// Superlevel-set coverage fractions sampled at K interior quantiles of the
/// normalized field.
struct CoverageCurve {
    std::vector<double> thresholds;
    std::vector<double> phi_finder;
    std::vector<double> phi_timing;
    std::vector<double> phi_background;
};

struct CoverageAucs {
    double misf = 0.0;
    double mist = 0.0;
    double bg = 0.0;
};

/// Per-pixel Euclidean distance (pixels) to the nearest structure pixel.
struct DistanceField {
    Image grid;
};

struct PenaltyParams {
    double lambda = 1.0;
    double alpha = 0.25;
};

struct MetricReport {
    double fmr = 0.0;
    double tmr = 0.0;
    double bl = 0.0;
    double auc_misf = 0.0;
    double auc_mist = 0.0;
    double auc_bg = 0.0;
    double dts = 0.0;
    double structure_score = 0.0;
    double leak_penalty = 0.0;
    bool degenerate = false;
    std::int64_t eval_latency_us = 0;
};

struct MetricOptions {
    int quantiles = kDefaultQuantiles;
    PenaltyParams penalty;
};

/// FMR = <C~,M_F>/S, TMR = <C~,M_T>/S, BL = <C~,1-M_B>/S.
MassRatios mass_ratios(const SaliencyField& sal, const StructureMasks& masks);

/// Empirical quantile (linear interpolation between order statistics) of
/// `values` at each level in `levels`; levels must lie in [0, 1].
std::vector<double> quantiles(std::span<const double> values, std::span<const double> levels);

/// Thresholds at q_k = k / (K + 1), k = 1..K; S_tau = 1[C~ >= tau];
/// phi_X = <S_tau, M_X> / (<S_tau, 1> + eps). Throws InvalidK for K < 2.
CoverageCurve coverage_curve(const SaliencyField& sal, const StructureMasks& masks, int k);

CoverageAucs coverage_aucs(const CoverageCurve& curve);

/// Exact EDT by the two-pass lower-envelope algorithm. Throws EmptyStructure
/// if the mask has no set pixel.
DistanceField euclidean_distance_transform(const BinaryMask& structure);

/// DtS = <C~, D> / (S sqrt(H^2 + W^2)) with D the EDT of min(M_F + M_T, 1).
double dts(const SaliencyField& sal, const StructureMasks& masks);
double dts(const SaliencyField& sal, const DistanceField& distance);

double structure_score(double auc_misf, double auc_mist, double auc_bg, double dts);

/// Per-sample bracket <C^, 1-M_B> - alpha <C^, M_B> with C^ = C~/S; the caller
/// multiplies by lambda.
double leak_penalty(const SaliencyField& sal, const BinaryMask& box, const PenaltyParams& params);

/// Full structural suite for one positive sample; masks are aligned to the
/// saliency grid first. Records its own wall-clock latency.
MetricReport evaluate(const SaliencyField& sal, const StructureMasks& masks, const MetricOptions& options = {});

}  // namespace cambench::metrics
