// Copyright 2026 The CamBench Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace cambench::qr {

/// GF(2^8) arithmetic over the primitive polynomial x^8 + x^4 + x^3 + x^2 + 1 (0x11D).
namespace gf256 {

std::uint8_t mul(std::uint8_t a, std::uint8_t b) noexcept;
/// alpha^e with alpha = 2.
std::uint8_t exp(int e) noexcept;
/// Discrete log base alpha; a must be nonzero.
int log(std::uint8_t a);

}  // namespace gf256

/// Monic generator prod_{i=0}^{degree-1} (x - alpha^i), coefficients highest
/// degree first (leading 1 included), so the result has degree + 1 entries.
std::vector<std::uint8_t> generator_polynomial(int degree);

/// Reed-Solomon parity: remainder of data(x) * x^ecc_count mod generator(x).
/// Requires 1 <= ecc_count <= 30.
std::vector<std::uint8_t> rs_encode(std::span<const std::uint8_t> data, int ecc_count);

}  // namespace cambench::qr
