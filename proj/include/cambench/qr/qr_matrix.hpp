// Copyright 2026 The CamBench Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "cambench/core/grid.hpp"

namespace cambench::qr {

enum class EccLevel { L, M, Q, H };

std::string_view to_string(EccLevel level);
EccLevel parse_ecc_level(std::string_view text);

inline constexpr int kMinVersion = 1;
inline constexpr int kMaxVersion = 4;

struct QrSpec {
    int version = 1;
    EccLevel ecc_level = EccLevel::L;
    /// nullopt selects the pattern with the lowest standard penalty score.
    std::optional<int> mask_pattern;
    std::vector<std::uint8_t> payload;
};

enum class ModuleRole : std::uint8_t { Data, Finder, Separator, Timing, Alignment, Format, Quiet };

std::string_view to_string(ModuleRole role);

struct ModuleMatrix {
    int side = 0;
    /// dark = 1
    Grid2D<std::uint8_t> modules;
    Grid2D<ModuleRole> roles;
    /// Spec with the mask pattern actually applied.
    QrSpec spec;
    std::vector<std::uint8_t> codewords;
};

inline constexpr int symbol_side(int version) noexcept { return 17 + 4 * version; }

/// Byte-mode payload capacity for (version, level).
int byte_capacity(int version, EccLevel level);
int total_codewords(int version);
int data_codewords(int version, EccLevel level);

/// Data codewords (mode, count, payload, terminator, pads) before RS.
std::vector<std::uint8_t> encode_data_codewords(const QrSpec& spec);

/// Interleaved data + ECC codeword stream in placement order.
std::vector<std::uint8_t> build_codewords(const QrSpec& spec);

/// 15-bit format word: BCH(15,5) of (level bits << 3 | mask) XOR 0x5412.
std::uint16_t format_bits(EccLevel level, int mask_pattern);

bool mask_applies(int pattern, int row, int col) noexcept;

/// Standard four-rule penalty of a finished module matrix.
int penalty_score(const Grid2D<std::uint8_t>& modules);

/// Throws CapacityExceeded when the payload does not fit.
ModuleMatrix build_matrix(const QrSpec& spec);

}  // namespace cambench::qr
