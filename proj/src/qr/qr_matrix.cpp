// Copyright 2026 The CamBench Authors
// SPDX-License-Identifier: Apache-2.0

#include "cambench/qr/qr_matrix.hpp"

#include <array>
#include <cstdlib>
#include <limits>

#include "cambench/core/error.hpp"
#include "cambench/qr/reed_solomon.hpp"

namespace cambench::qr {

namespace {

struct BlockLayout {
    int blocks;
    int data_per_block;
    int ecc_per_block;
};

// Indexed [version - 1][level] with level order L, M, Q, H.
constexpr std::array<std::array<BlockLayout, 4>, kMaxVersion> kLayouts = {{
    {{{1, 19, 7}, {1, 16, 10}, {1, 13, 13}, {1, 9, 17}}},
    {{{1, 34, 10}, {1, 28, 16}, {1, 22, 22}, {1, 16, 28}}},
    {{{1, 55, 15}, {1, 44, 26}, {2, 17, 18}, {2, 13, 22}}},
    {{{1, 80, 20}, {2, 32, 18}, {2, 24, 26}, {4, 9, 16}}},
}};

void check_version(int version) {
    if (version < kMinVersion || version > kMaxVersion) {
        throw BenchError(ErrorCode::InvalidArgument, "QR version must be in [1, 4]");
    }
}

const BlockLayout& layout(int version, EccLevel level) {
    check_version(version);
    return kLayouts[static_cast<std::size_t>(version - 1)][static_cast<std::size_t>(level)];
}

int level_bits(EccLevel level) {
    switch (level) {
        case EccLevel::L: return 1;
        case EccLevel::M: return 0;
        case EccLevel::Q: return 3;
        case EccLevel::H: return 2;
    }
    return 0;
}

class BitWriter {
public:
    void put(std::uint32_t value, int bits) {
        for (int i = bits - 1; i >= 0; --i) bits_.push_back(static_cast<std::uint8_t>((value >> i) & 1U));
    }
    std::size_t size() const { return bits_.size(); }
    std::vector<std::uint8_t> to_bytes() const {
        std::vector<std::uint8_t> out(bits_.size() / 8, 0);
        for (std::size_t i = 0; i < out.size() * 8; ++i) out[i / 8] |= static_cast<std::uint8_t>(bits_[i] << (7 - i % 8));
        return out;
    }

private:
    std::vector<std::uint8_t> bits_;
};

struct Canvas {
    explicit Canvas(int side)
        : side(side), modules(side, side, 0), roles(side, side, ModuleRole::Data), reserved(side, side, 0) {}

    void set(int row, int col, bool dark, ModuleRole role) {
        modules(row, col) = dark ? 1 : 0;
        roles(row, col) = role;
        reserved(row, col) = 1;
    }

    int side;
    Grid2D<std::uint8_t> modules;
    Grid2D<ModuleRole> roles;
    Grid2D<std::uint8_t> reserved;
};

void draw_finder(Canvas& c, int top, int left) {
    for (int dy = -1; dy <= 7; ++dy) {
        for (int dx = -1; dx <= 7; ++dx) {
            const int r = top + dy;
            const int col = left + dx;
            if (r < 0 || col < 0 || r >= c.side || col >= c.side) continue;
            if (dy == -1 || dy == 7 || dx == -1 || dx == 7) {
                c.set(r, col, false, ModuleRole::Separator);
            } else {
                const int d = std::max(std::abs(dy - 3), std::abs(dx - 3));
                c.set(r, col, d != 2, ModuleRole::Finder);
            }
        }
    }
}

void draw_alignment(Canvas& c, int center_row, int center_col) {
    for (int dy = -2; dy <= 2; ++dy) {
        for (int dx = -2; dx <= 2; ++dx) {
            const int d = std::max(std::abs(dy), std::abs(dx));
            c.set(center_row + dy, center_col + dx, d != 1, ModuleRole::Alignment);
        }
    }
}

void draw_function_patterns(Canvas& c, int version) {
    const int side = c.side;
    for (int i = 8; i <= side - 9; ++i) {
        c.set(6, i, i % 2 == 0, ModuleRole::Timing);
        c.set(i, 6, i % 2 == 0, ModuleRole::Timing);
    }
    draw_finder(c, 0, 0);
    draw_finder(c, 0, side - 7);
    draw_finder(c, side - 7, 0);
    if (version >= 2) draw_alignment(c, side - 7, side - 7);

    // Reserve format areas; bits are written after masking.
    for (int i = 0; i <= 8; ++i) {
        if (i != 6) {
            c.set(8, i, false, ModuleRole::Format);
            c.set(i, 8, false, ModuleRole::Format);
        }
    }
    for (int i = 0; i < 8; ++i) c.set(8, side - 1 - i, false, ModuleRole::Format);
    for (int i = 0; i < 7; ++i) c.set(side - 1 - i, 8, false, ModuleRole::Format);
    c.set(side - 8, 8, true, ModuleRole::Format);
}

void draw_format(Canvas& c, std::uint16_t bits) {
    const int side = c.side;
    auto bit = [bits](int i) { return ((bits >> i) & 1U) != 0; };
    for (int i = 0; i <= 5; ++i) c.set(i, 8, bit(i), ModuleRole::Format);
    c.set(7, 8, bit(6), ModuleRole::Format);
    c.set(8, 8, bit(7), ModuleRole::Format);
    c.set(8, 7, bit(8), ModuleRole::Format);
    for (int i = 9; i < 15; ++i) c.set(8, 14 - i, bit(i), ModuleRole::Format);
    for (int i = 0; i < 8; ++i) c.set(8, side - 1 - i, bit(i), ModuleRole::Format);
    for (int i = 8; i < 15; ++i) c.set(side - 15 + i, 8, bit(i), ModuleRole::Format);
    c.set(side - 8, 8, true, ModuleRole::Format);
}

void place_codewords(Canvas& c, const std::vector<std::uint8_t>& codewords) {
    const int side = c.side;
    const std::size_t total_bits = codewords.size() * 8;
    std::size_t i = 0;
    for (int right = side - 1; right >= 1; right -= 2) {
        if (right == 6) right = 5;
        const bool upward = ((right + 1) & 2) == 0;
        for (int vert = 0; vert < side; ++vert) {
            for (int j = 0; j < 2; ++j) {
                const int col = right - j;
                const int row = upward ? side - 1 - vert : vert;
                if (c.reserved(row, col)) continue;
                if (i < total_bits) {
                    c.modules(row, col) = static_cast<std::uint8_t>((codewords[i >> 3] >> (7 - (i & 7))) & 1U);
                    ++i;
                }
                // Remainder bits stay light before masking.
            }
        }
    }
}

void apply_mask(Canvas& c, int pattern) {
    for (int r = 0; r < c.side; ++r) {
        for (int col = 0; col < c.side; ++col) {
            if (!c.reserved(r, col) && mask_applies(pattern, r, col)) c.modules(r, col) ^= 1U;
        }
    }
}

bool is_light_run(const Grid2D<std::uint8_t>& m, int row, int col, int drow, int dcol, int from, int to) {
    // Positions outside the symbol count as light.
    const int n = m.height();
    for (int k = std::max(from, 0); k < std::min(to, n); ++k) {
        const int r = row + drow * k;
        const int cc = col + dcol * k;
        if (m(r, cc)) return false;
    }
    return true;
}

}  // namespace

std::string_view to_string(EccLevel level) {
    switch (level) {
        case EccLevel::L: return "L";
        case EccLevel::M: return "M";
        case EccLevel::Q: return "Q";
        case EccLevel::H: return "H";
    }
    return "?";
}

EccLevel parse_ecc_level(std::string_view text) {
    if (text == "L") return EccLevel::L;
    if (text == "M") return EccLevel::M;
    if (text == "Q") return EccLevel::Q;
    if (text == "H") return EccLevel::H;
    throw BenchError(ErrorCode::InvalidArgument, "unknown ECC level '" + std::string(text) + "'");
}

std::string_view to_string(ModuleRole role) {
    switch (role) {
        case ModuleRole::Data: return "data";
        case ModuleRole::Finder: return "finder";
        case ModuleRole::Separator: return "separator";
        case ModuleRole::Timing: return "timing";
        case ModuleRole::Alignment: return "alignment";
        case ModuleRole::Format: return "format";
        case ModuleRole::Quiet: return "quiet";
    }
    return "?";
}

int total_codewords(int version) {
    const auto& l = layout(version, EccLevel::L);
    return l.blocks * (l.data_per_block + l.ecc_per_block);
}

int data_codewords(int version, EccLevel level) {
    const auto& l = layout(version, level);
    return l.blocks * l.data_per_block;
}

int byte_capacity(int version, EccLevel level) {
    // 4-bit mode + 8-bit count indicator (versions 1-9) + 8 bits per byte.
    return (data_codewords(version, level) * 8 - 12) / 8;
}

std::vector<std::uint8_t> encode_data_codewords(const QrSpec& spec) {
    const int capacity = byte_capacity(spec.version, spec.ecc_level);
    if (static_cast<int>(spec.payload.size()) > capacity) {
        throw BenchError(ErrorCode::CapacityExceeded, "payload of " + std::to_string(spec.payload.size()) +
                                                          " bytes exceeds capacity " + std::to_string(capacity));
    }
    const std::size_t data_bits = static_cast<std::size_t>(data_codewords(spec.version, spec.ecc_level)) * 8;
    BitWriter w;
    w.put(0b0100, 4);
    w.put(static_cast<std::uint32_t>(spec.payload.size()), 8);
    for (std::uint8_t b : spec.payload) w.put(b, 8);
    w.put(0, static_cast<int>(std::min<std::size_t>(4, data_bits - w.size())));
    if (w.size() % 8 != 0) w.put(0, static_cast<int>(8 - w.size() % 8));
    for (std::uint32_t pad = 0xEC; w.size() < data_bits; pad ^= 0xEC ^ 0x11) w.put(pad, 8);
    return w.to_bytes();
}

std::vector<std::uint8_t> build_codewords(const QrSpec& spec) {
    const auto data = encode_data_codewords(spec);
    const auto& l = layout(spec.version, spec.ecc_level);
    std::vector<std::vector<std::uint8_t>> data_blocks;
    std::vector<std::vector<std::uint8_t>> ecc_blocks;
    for (int b = 0; b < l.blocks; ++b) {
        const auto first = data.begin() + b * l.data_per_block;
        data_blocks.emplace_back(first, first + l.data_per_block);
        ecc_blocks.push_back(rs_encode(data_blocks.back(), l.ecc_per_block));
    }
    // Versions 1-4 use equal-length blocks, so column-wise interleave is rectangular.
    std::vector<std::uint8_t> out;
    out.reserve(static_cast<std::size_t>(total_codewords(spec.version)));
    for (int i = 0; i < l.data_per_block; ++i) {
        for (const auto& blk : data_blocks) out.push_back(blk[static_cast<std::size_t>(i)]);
    }
    for (int i = 0; i < l.ecc_per_block; ++i) {
        for (const auto& blk : ecc_blocks) out.push_back(blk[static_cast<std::size_t>(i)]);
    }
    return out;
}

std::uint16_t format_bits(EccLevel level, int mask_pattern) {
    if (mask_pattern < 0 || mask_pattern > 7) throw BenchError(ErrorCode::InvalidArgument, "mask pattern must be in [0, 7]");
    const std::uint32_t data = static_cast<std::uint32_t>(level_bits(level) << 3 | mask_pattern);
    std::uint32_t rem = data;
    for (int i = 0; i < 10; ++i) rem = (rem << 1) ^ ((rem >> 9) * 0x537U);
    return static_cast<std::uint16_t>(((data << 10) | (rem & 0x3FFU)) ^ 0x5412U);
}

bool mask_applies(int pattern, int row, int col) noexcept {
    const int x = col;
    const int y = row;
    switch (pattern) {
        case 0: return (x + y) % 2 == 0;
        case 1: return y % 2 == 0;
        case 2: return x % 3 == 0;
        case 3: return (x + y) % 3 == 0;
        case 4: return (x / 3 + y / 2) % 2 == 0;
        case 5: return x * y % 2 + x * y % 3 == 0;
        case 6: return (x * y % 2 + x * y % 3) % 2 == 0;
        case 7: return ((x + y) % 2 + x * y % 3) % 2 == 0;
        default: return false;
    }
}

int penalty_score(const Grid2D<std::uint8_t>& m) {
    const int n = m.height();
    int score = 0;

    // Rule 1: runs of >= 5 same-colored modules.
    for (int pass = 0; pass < 2; ++pass) {
        for (int i = 0; i < n; ++i) {
            int run = 0;
            std::uint8_t prev = 2;
            for (int j = 0; j < n; ++j) {
                const std::uint8_t v = pass == 0 ? m(i, j) : m(j, i);
                if (v == prev) {
                    ++run;
                } else {
                    if (run >= 5) score += 3 + (run - 5);
                    run = 1;
                    prev = v;
                }
            }
            if (run >= 5) score += 3 + (run - 5);
        }
    }

    // Rule 2: 2x2 same-colored blocks.
    for (int r = 0; r + 1 < n; ++r) {
        for (int c = 0; c + 1 < n; ++c) {
            const auto v = m(r, c);
            if (v == m(r, c + 1) && v == m(r + 1, c) && v == m(r + 1, c + 1)) score += 3;
        }
    }

    // Rule 3: 1:1:3:1:1 finder-like runs with 4 light modules on either side.
    constexpr std::array<std::uint8_t, 7> kPattern = {1, 0, 1, 1, 1, 0, 1};
    int finder_like = 0;
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) {
            if (c + 6 < n) {
                bool match = true;
                for (int k = 0; k < 7 && match; ++k) match = m(r, c + k) == kPattern[static_cast<std::size_t>(k)];
                if (match && (is_light_run(m, r, 0, 0, 1, c - 4, c) || is_light_run(m, r, 0, 0, 1, c + 7, c + 11))) {
                    ++finder_like;
                }
            }
            if (r + 6 < n) {
                bool match = true;
                for (int k = 0; k < 7 && match; ++k) match = m(r + k, c) == kPattern[static_cast<std::size_t>(k)];
                if (match && (is_light_run(m, 0, c, 1, 0, r - 4, r) || is_light_run(m, 0, c, 1, 0, r + 7, r + 11))) {
                    ++finder_like;
                }
            }
        }
    }
    score += 40 * finder_like;

    // Rule 4: dark-module proportion in 5% steps away from 50%.
    int dark = 0;
    for (auto v : m.values()) dark += v;
    const int total = n * n;
    score += 10 * (std::abs(dark * 2 - total) * 10 / total);
    return score;
}

ModuleMatrix build_matrix(const QrSpec& spec) {
    check_version(spec.version);
    if (spec.mask_pattern && (*spec.mask_pattern < 0 || *spec.mask_pattern > 7)) {
        throw BenchError(ErrorCode::InvalidArgument, "mask pattern must be in [0, 7]");
    }
    const int side = symbol_side(spec.version);
    const auto codewords = build_codewords(spec);

    Canvas base(side);
    draw_function_patterns(base, spec.version);
    place_codewords(base, codewords);

    auto render = [&](int pattern) {
        Canvas c = base;
        apply_mask(c, pattern);
        draw_format(c, format_bits(spec.ecc_level, pattern));
        return c;
    };

    int chosen = 0;
    if (spec.mask_pattern) {
        chosen = *spec.mask_pattern;
    } else {
        int best = std::numeric_limits<int>::max();
        for (int p = 0; p < 8; ++p) {
            const int s = penalty_score(render(p).modules);
            if (s < best) {
                best = s;
                chosen = p;
            }
        }
    }
    Canvas final_canvas = render(chosen);

    ModuleMatrix out;
    out.side = side;
    out.modules = std::move(final_canvas.modules);
    out.roles = std::move(final_canvas.roles);
    out.spec = spec;
    out.spec.mask_pattern = chosen;
    out.codewords = codewords;
    return out;
}

}  // namespace cambench::qr
