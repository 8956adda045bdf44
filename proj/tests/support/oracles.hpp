// Copyright 2026 The CamBench Authors
// SPDX-License-Identifier: Apache-2.0

// Slow, table-free reference implementations shared by unit and acceptance
// tests.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "cambench/core/grid.hpp"
#include "cambench/core/saliency.hpp"

namespace cambench::oracle {

inline std::uint8_t slow_mul(std::uint8_t a, std::uint8_t b) {
    unsigned acc = 0;
    unsigned x = a;
    for (int i = 0; i < 8; ++i) {
        if (b & (1u << i)) acc ^= x;
        x <<= 1;
        if (x & 0x100) x ^= 0x11D;
    }
    return static_cast<std::uint8_t>(acc);
}

inline std::uint8_t slow_pow2(int e) {
    std::uint8_t v = 1;
    for (int i = 0; i < e; ++i) v = slow_mul(v, 2);
    return v;
}

/// prod_{i<degree} (x - 2^i), highest coefficient first.
inline std::vector<std::uint8_t> rs_generator(int degree) {
    std::vector<std::uint8_t> g{1};
    for (int i = 0; i < degree; ++i) {
        std::vector<std::uint8_t> next(g.size() + 1, 0);
        const auto root = slow_pow2(i);
        for (std::size_t j = 0; j < g.size(); ++j) {
            next[j] ^= g[j];
            next[j + 1] ^= slow_mul(g[j], root);
        }
        g = next;
    }
    return g;
}

/// Remainder of a full codeword polynomial modulo the generator.
inline std::vector<std::uint8_t> rs_remainder(std::vector<std::uint8_t> poly, const std::vector<std::uint8_t>& gen) {
    for (std::size_t i = 0; i + gen.size() <= poly.size(); ++i) {
        const std::uint8_t f = poly[i];
        if (f == 0) continue;
        for (std::size_t j = 0; j < gen.size(); ++j) poly[i + j] ^= slow_mul(gen[j], f);
    }
    return {poly.end() - static_cast<std::ptrdiff_t>(gen.size() - 1), poly.end()};
}

/// 15-bit format word: BCH(15,5) by long division with 0x537, masked by 0x5412.
inline std::uint16_t format_word(int level_bits, int mask) {
    const unsigned data = static_cast<unsigned>(level_bits << 3 | mask);
    unsigned v = data << 10;
    for (int bit = 14; bit >= 10; --bit) {
        if (v & (1u << bit)) v ^= 0x537u << (bit - 10);
    }
    return static_cast<std::uint16_t>(((data << 10) | v) ^ 0x5412u);
}

/// Distance to the nearest set pixel by exhaustive search.
inline Image brute_force_edt(const BinaryMask& m) {
    Image d(m.height(), m.width(), std::numeric_limits<double>::infinity());
    for (int y = 0; y < m.height(); ++y) {
        for (int x = 0; x < m.width(); ++x) {
            double best = std::numeric_limits<double>::infinity();
            for (int sy = 0; sy < m.height(); ++sy) {
                for (int sx = 0; sx < m.width(); ++sx) {
                    if (m.grid(sy, sx)) best = std::min(best, static_cast<double>((y - sy) * (y - sy) + (x - sx) * (x - sx)));
                }
            }
            d(y, x) = std::sqrt(best);
        }
    }
    return d;
}

}  // namespace cambench::oracle
