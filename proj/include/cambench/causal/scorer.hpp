// Copyright 2026 The CamBench Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <vector>

#include "cambench/core/grid.hpp"

namespace cambench::causal {

/// Source of a single "qr" logit per image.
class Scorer {
public:
    virtual ~Scorer() = default;
    virtual double score(const Image& image) = 0;
};

inline constexpr double kFinderWeight = 2.0;
inline constexpr double kTimingWeight = 1.0;
inline constexpr double kLogitBias = -1.5;
inline constexpr std::array<int, 4> kFinderScales = {3, 4, 5, 6};
/// Frozen from a seeded calibration run (see tools/calibrate_scorer.cpp).
inline constexpr double kSyntheticDecisionThreshold = 1.0;

struct FinderPeak {
    int y = 0;
    int x = 0;
    int scale = 0;
    double ncc = 0.0;
};

struct SyntheticBreakdown {
    double finder = 0.0;
    double timing = 0.0;
    double logit = kLogitBias;
    std::vector<FinderPeak> peaks;
};

/// Deterministic template detector. The image is binarized at its mean
/// (dark = below mean), correlated against the 7x7 finder motif at every
/// scale, and the gaps between axis-aligned peak pairs are scored for a
/// period-2 module alternation.
class SyntheticScorer final : public Scorer {
public:
    double score(const Image& image) override { return analyze(image).logit; }
    static SyntheticBreakdown analyze(const Image& image);
};

/// Normalized cross-correlation of a binary window with the finder motif at
/// `scale`, from the three concentric square sums; 0 for zero variance.
double finder_ncc(double sum7, double sum5, double sum3, int scale);

/// Periodicity of a binary line with module length `scale`:
/// clamp((r(2s) - r(s)) / 2, 0, 1) using unbiased autocorrelation.
double timing_periodicity(const std::vector<double>& line, int scale);

}  // namespace cambench::causal
