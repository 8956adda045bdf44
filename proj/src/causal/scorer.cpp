// Copyright 2026 The CamBench Authors
// SPDX-License-Identifier: Apache-2.0

#include "cambench/causal/scorer.hpp"

#include <algorithm>
#include <cmath>

namespace cambench::causal {

namespace {

constexpr double kTemplateDark = 33.0;  // 24 outer ring + 9 center modules
constexpr double kTemplateMean = kTemplateDark / 49.0;

// Summed-area table with a zero border: at(y, x) = sum over [0,y) x [0,x).
class Integral {
public:
    explicit Integral(const Grid2D<std::uint8_t>& bits) : w_(bits.width() + 1), table_((bits.height() + 1) * w_, 0) {
        for (int y = 0; y < bits.height(); ++y) {
            long row = 0;
            for (int x = 0; x < bits.width(); ++x) {
                row += bits(y, x);
                table_[idx(y + 1, x + 1)] = table_[idx(y, x + 1)] + row;
            }
        }
    }

    long sum(int y, int x, int size) const {
        return table_[idx(y + size, x + size)] - table_[idx(y, x + size)] - table_[idx(y + size, x)] + table_[idx(y, x)];
    }

private:
    std::size_t idx(int y, int x) const { return static_cast<std::size_t>(y) * static_cast<std::size_t>(w_) + static_cast<std::size_t>(x); }
    int w_;
    std::vector<long> table_;
};

bool overlaps(const FinderPeak& a, const FinderPeak& b) {
    const int ea = 7 * a.scale;
    const int eb = 7 * b.scale;
    return a.y < b.y + eb && b.y < a.y + ea && a.x < b.x + eb && b.x < a.x + ea;
}

// Local maxima (3x3, positive) of the NCC map at one scale.
void collect_peaks(const Integral& integral, int h, int w, int s, std::vector<FinderPeak>& out) {
    const int extent = 7 * s;
    if (extent > h || extent > w) return;
    const int ny = h - extent + 1;
    const int nx = w - extent + 1;
    std::vector<double> map(static_cast<std::size_t>(ny) * nx);
    for (int y = 0; y < ny; ++y) {
        for (int x = 0; x < nx; ++x) {
            const auto s7 = static_cast<double>(integral.sum(y, x, extent));
            const auto s5 = static_cast<double>(integral.sum(y + s, x + s, 5 * s));
            const auto s3 = static_cast<double>(integral.sum(y + 2 * s, x + 2 * s, 3 * s));
            map[static_cast<std::size_t>(y) * nx + x] = finder_ncc(s7, s5, s3, s);
        }
    }
    for (int y = 0; y < ny; ++y) {
        for (int x = 0; x < nx; ++x) {
            const double v = map[static_cast<std::size_t>(y) * nx + x];
            if (v <= 0.0) continue;
            bool is_max = true;
            for (int dy = -1; dy <= 1 && is_max; ++dy) {
                for (int dx = -1; dx <= 1; ++dx) {
                    const int yy = y + dy;
                    const int xx = x + dx;
                    if ((dy == 0 && dx == 0) || yy < 0 || xx < 0 || yy >= ny || xx >= nx) continue;
                    const double u = map[static_cast<std::size_t>(yy) * nx + xx];
                    // Strict on earlier neighbors so plateaus yield one peak.
                    if (u > v || (u == v && (dy < 0 || (dy == 0 && dx < 0)))) {
                        is_max = false;
                        break;
                    }
                }
            }
            if (is_max) out.push_back({y, x, s, v});
        }
    }
}

}  // namespace

double finder_ncc(double sum7, double sum5, double sum3, int scale) {
    const double n = 49.0 * scale * scale;
    const double ones = sum7;
    const double mean_b = ones / n;
    const double var_b = ones - n * mean_b * mean_b;  // sum of squares equals sum for bits
    if (var_b <= 1e-12) return 0.0;
    const double var_t = n * kTemplateMean * (1.0 - kTemplateMean);
    const double cross = (sum7 - sum5 + sum3) - n * mean_b * kTemplateMean;
    return cross / std::sqrt(var_b * var_t);
}

double timing_periodicity(const std::vector<double>& line, int scale) {
    const auto n = line.size();
    if (scale < 1 || n < static_cast<std::size_t>(4 * scale)) return 0.0;
    double mean = 0.0;
    for (double v : line) mean += v;
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (double v : line) var += (v - mean) * (v - mean);
    var /= static_cast<double>(n);
    if (var <= 1e-12) return 0.0;
    const auto autocorr = [&](std::size_t lag) {
        double acc = 0.0;
        for (std::size_t i = 0; i + lag < n; ++i) acc += (line[i] - mean) * (line[i + lag] - mean);
        return acc / static_cast<double>(n - lag) / var;
    };
    const auto s = static_cast<std::size_t>(scale);
    return std::clamp((autocorr(2 * s) - autocorr(s)) / 2.0, 0.0, 1.0);
}

SyntheticBreakdown SyntheticScorer::analyze(const Image& image) {
    const int h = image.height();
    const int w = image.width();
    double mean = 0.0;
    for (double v : image.values()) mean += v;
    mean /= static_cast<double>(image.size());
    Grid2D<std::uint8_t> bits(h, w, 0);
    for (std::size_t i = 0; i < image.size(); ++i) bits[i] = image[i] < mean ? 1 : 0;

    const Integral integral(bits);
    std::vector<FinderPeak> candidates;
    for (int s : kFinderScales) collect_peaks(integral, h, w, s, candidates);
    std::stable_sort(candidates.begin(), candidates.end(),
                     [](const FinderPeak& a, const FinderPeak& b) { return a.ncc > b.ncc; });

    SyntheticBreakdown out;
    for (const auto& c : candidates) {
        if (out.peaks.size() == 3) break;
        if (std::none_of(out.peaks.begin(), out.peaks.end(), [&](const FinderPeak& p) { return overlaps(p, c); })) {
            out.peaks.push_back(c);
        }
    }
    double total = 0.0;
    for (const auto& p : out.peaks) total += p.ncc;
    out.finder = std::max(0.0, total / 3.0);

    for (std::size_t i = 0; i < out.peaks.size(); ++i) {
        for (std::size_t j = 0; j < out.peaks.size(); ++j) {
            const auto& a = out.peaks[i];
            const auto& b = out.peaks[j];
            if (i == j || a.scale != b.scale) continue;
            const int s = a.scale;
            std::vector<double> line;
            if (std::abs(a.y - b.y) <= s && a.x < b.x) {
                const int y = a.y + (13 * s) / 2;
                for (int x = a.x + 7 * s; x < b.x; ++x) line.push_back(bits(y, x));
            } else if (std::abs(a.x - b.x) <= s && a.y < b.y) {
                const int x = a.x + (13 * s) / 2;
                for (int y = a.y + 7 * s; y < b.y; ++y) line.push_back(bits(y, x));
            } else {
                continue;
            }
            out.timing = std::max(out.timing, timing_periodicity(line, s));
        }
    }
    out.logit = kFinderWeight * out.finder + kTimingWeight * out.timing + kLogitBias;
    return out;
}

}  // namespace cambench::causal
