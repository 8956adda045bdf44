// Copyright 2026 The CamBench Authors
// SPDX-License-Identifier: Apache-2.0

#include "cambench/qr/reed_solomon.hpp"

#include <array>

#include "cambench/core/error.hpp"

namespace cambench::qr {

namespace {

struct Tables {
    std::array<std::uint8_t, 512> exp{};
    std::array<int, 256> log{};
};

constexpr Tables make_tables() {
    Tables t;
    int x = 1;
    for (int i = 0; i < 255; ++i) {
        t.exp[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(x);
        t.log[static_cast<std::size_t>(x)] = i;
        x <<= 1;
        if (x & 0x100) x ^= 0x11D;
    }
    for (int i = 255; i < 512; ++i) t.exp[static_cast<std::size_t>(i)] = t.exp[static_cast<std::size_t>(i - 255)];
    return t;
}

constexpr Tables kTables = make_tables();

}  // namespace

namespace gf256 {

std::uint8_t mul(std::uint8_t a, std::uint8_t b) noexcept {
    if (a == 0 || b == 0) return 0;
    return kTables.exp[static_cast<std::size_t>(kTables.log[a] + kTables.log[b])];
}

std::uint8_t exp(int e) noexcept {
    e %= 255;
    if (e < 0) e += 255;
    return kTables.exp[static_cast<std::size_t>(e)];
}

int log(std::uint8_t a) {
    if (a == 0) throw BenchError(ErrorCode::InvalidArgument, "log of zero in GF(256)");
    return kTables.log[a];
}

}  // namespace gf256

std::vector<std::uint8_t> generator_polynomial(int degree) {
    if (degree < 1 || degree > 30) throw BenchError(ErrorCode::InvalidArgument, "RS degree must be in [1, 30]");
    std::vector<std::uint8_t> g{1};
    for (int i = 0; i < degree; ++i) {
        // g(x) *= (x + alpha^i); subtraction is XOR in characteristic 2.
        std::vector<std::uint8_t> next(g.size() + 1, 0);
        const std::uint8_t root = gf256::exp(i);
        for (std::size_t j = 0; j < g.size(); ++j) {
            next[j] ^= g[j];
            next[j + 1] ^= gf256::mul(g[j], root);
        }
        g = std::move(next);
    }
    return g;
}

std::vector<std::uint8_t> rs_encode(std::span<const std::uint8_t> data, int ecc_count) {
    const auto gen = generator_polynomial(ecc_count);
    std::vector<std::uint8_t> rem(static_cast<std::size_t>(ecc_count), 0);
    for (std::uint8_t byte : data) {
        const std::uint8_t factor = byte ^ rem[0];
        rem.erase(rem.begin());
        rem.push_back(0);
        for (std::size_t j = 0; j < rem.size(); ++j) rem[j] ^= gf256::mul(gen[j + 1], factor);
    }
    return rem;
}

}  // namespace cambench::qr
