// Copyright 2026 The CamBench Authors
// SPDX-License-Identifier: Apache-2.0

// Prints synthetic-scorer logit statistics on a seeded dev set of pristine
// scenes. Used once to freeze kSyntheticDecisionThreshold.

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <vector>

#include "cambench/causal/scorer.hpp"
#include "cambench/qr/scene.hpp"

int main(int argc, char** argv) {
    using namespace cambench;
    const std::size_t n = argc > 1 ? std::strtoul(argv[1], nullptr, 10) : 500;
    const std::uint64_t seed = argc > 2 ? std::strtoull(argv[2], nullptr, 10) : 2026;
    const int module_px = argc > 3 ? std::atoi(argv[3]) : 4;

    qr::SynthesisOptions pos;
    // module_px 0 keeps the full version and module-size ranges.
    if (module_px > 0) {
        pos.versions = {1};
        pos.min_module_px = pos.max_module_px = module_px;
    }
    pos.positive_fraction = 1.0;
    qr::SynthesisOptions neg;
    neg.positive_fraction = 0.0;

    std::vector<double> p;
    std::vector<double> q;
    for (std::size_t i = 0; i < n; ++i) {
        p.push_back(causal::SyntheticScorer::analyze(qr::synthesize_sample(pos, seed, i).image).logit);
        q.push_back(causal::SyntheticScorer::analyze(qr::synthesize_sample(neg, seed, i).image).logit);
    }
    std::sort(p.begin(), p.end());
    std::sort(q.begin(), q.end());
    const auto pct = [](const std::vector<double>& v, double f) { return v[static_cast<std::size_t>(f * (v.size() - 1))]; };
    std::printf("positives: min %.4f p1 %.4f p50 %.4f max %.4f\n", p.front(), pct(p, 0.01), pct(p, 0.5), p.back());
    std::printf("negatives: min %.4f p50 %.4f p99 %.4f max %.4f\n", q.front(), pct(q, 0.5), pct(q, 0.99), q.back());
    const double threshold = causal::kSyntheticDecisionThreshold;
    const auto above = static_cast<double>(p.end() - std::upper_bound(p.begin(), p.end(), threshold));
    const auto neg_above = static_cast<double>(q.end() - std::upper_bound(q.begin(), q.end(), threshold));
    std::printf("threshold %.3f: positives above %.2f%%, negatives above %.2f%%\n", threshold, 100.0 * above / n,
                100.0 * neg_above / n);
    return 0;
}
