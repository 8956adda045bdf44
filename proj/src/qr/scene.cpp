// Copyright 2026 The CamBench Authors
// SPDX-License-Identifier: Apache-2.0

#include "cambench/qr/scene.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "cambench/core/error.hpp"
#include "cambench/core/rng.hpp"

namespace cambench::qr {

namespace {

constexpr int kMinCellPx = 3;
constexpr int kMaxCellPx = 16;

double mean_of(const Image& image) {
    double sum = 0.0;
    for (double v : image.values()) sum += v;
    return sum / static_cast<double>(image.size());
}

int draw_cell(const NegativeSpec& spec, Rng& rng) {
    if (spec.cell_px) {
        if (*spec.cell_px < 1) throw BenchError(ErrorCode::InvalidArgument, "negative cell size must be >= 1");
        return *spec.cell_px;
    }
    return static_cast<int>(rng.uniform_int(kMinCellPx, kMaxCellPx));
}

}  // namespace

std::string_view to_string(BackgroundKind kind) {
    switch (kind) {
        case BackgroundKind::Flat: return "flat";
        case BackgroundKind::Gradient: return "gradient";
        case BackgroundKind::BlockTexture: return "block-texture";
    }
    return "?";
}

BackgroundKind parse_background_kind(std::string_view text) {
    if (text == "flat") return BackgroundKind::Flat;
    if (text == "gradient") return BackgroundKind::Gradient;
    if (text == "block-texture") return BackgroundKind::BlockTexture;
    throw BenchError(ErrorCode::InvalidArgument, "unknown background kind '" + std::string(text) + "'");
}

std::string_view to_string(NegativeKind kind) {
    switch (kind) {
        case NegativeKind::Checkerboard: return "checkerboard";
        case NegativeKind::BlockNoise: return "block-noise";
        case NegativeKind::Grating: return "grating";
    }
    return "?";
}

NegativeKind parse_negative_kind(std::string_view text) {
    if (text == "checkerboard") return NegativeKind::Checkerboard;
    if (text == "block-noise") return NegativeKind::BlockNoise;
    if (text == "grating") return NegativeKind::Grating;
    throw BenchError(ErrorCode::InvalidArgument, "unknown negative kind '" + std::string(text) + "'");
}

Image render_background(const SceneParams& params) {
    Image bg(params.height, params.width, params.background.level);
    const Background& b = params.background;
    switch (b.kind) {
        case BackgroundKind::Flat:
            break;
        case BackgroundKind::Gradient: {
            const double a = b.angle_deg * std::numbers::pi / 180.0;
            const double ca = std::cos(a);
            const double sa = std::sin(a);
            // Project pixel centers on the direction, rescale to [0, 1] over the canvas.
            const double corners[4] = {0.0, params.width * ca, params.height * sa, params.width * ca + params.height * sa};
            const double lo = *std::min_element(corners, corners + 4);
            const double hi = *std::max_element(corners, corners + 4);
            const double span = std::max(hi - lo, 1e-12);
            for (int y = 0; y < params.height; ++y) {
                for (int x = 0; x < params.width; ++x) {
                    const double t = ((x + 0.5) * ca + (y + 0.5) * sa - lo) / span;
                    bg(y, x) = b.level + t * (b.level_end - b.level);
                }
            }
            break;
        }
        case BackgroundKind::BlockTexture: {
            if (b.block_px < 1) throw BenchError(ErrorCode::InvalidArgument, "texture block size must be >= 1");
            Rng rng = Rng::stream(params.seed, 0x7E47);
            const int rows = (params.height + b.block_px - 1) / b.block_px;
            const int cols = (params.width + b.block_px - 1) / b.block_px;
            std::vector<double> blocks(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols));
            for (auto& v : blocks) v = std::clamp(b.level + rng.uniform(-b.amplitude, b.amplitude), 0.0, 1.0);
            for (int y = 0; y < params.height; ++y) {
                for (int x = 0; x < params.width; ++x) {
                    bg(y, x) = blocks[static_cast<std::size_t>(y / b.block_px) * static_cast<std::size_t>(cols) +
                                      static_cast<std::size_t>(x / b.block_px)];
                }
            }
            break;
        }
    }
    return bg;
}

SampleRecord compose_scene(const ModuleMatrix& matrix, const SceneParams& params) {
    if (params.module_px < 3) throw BenchError(ErrorCode::InvalidArgument, "module_px must be >= 3");
    const int mp = params.module_px;
    const int quiet = kQuietZoneModules * mp;
    const int extent = matrix.side * mp;
    if (params.origin_y - quiet < 0 || params.origin_x - quiet < 0 ||
        params.origin_y + extent + quiet > params.height || params.origin_x + extent + quiet > params.width) {
        throw BenchError(ErrorCode::DoesNotFit, "symbol plus quiet zone does not fit the canvas");
    }

    SampleRecord rec;
    rec.label = 1;
    rec.image = render_background(params);
    rec.background_level = mean_of(rec.image);
    rec.masks = StructureMasks::zeros(params.height, params.width);
    rec.provenance.qr = matrix.spec;
    rec.provenance.scene = params;
    rec.provenance.seed = params.seed;

    for (int y = params.origin_y - quiet; y < params.origin_y + extent + quiet; ++y) {
        for (int x = params.origin_x - quiet; x < params.origin_x + extent + quiet; ++x) {
            rec.image(y, x) = params.light_level;
        }
    }
    for (int r = 0; r < matrix.side; ++r) {
        for (int c = 0; c < matrix.side; ++c) {
            const bool dark = matrix.modules(r, c) != 0;
            const ModuleRole role = matrix.roles(r, c);
            for (int dy = 0; dy < mp; ++dy) {
                const int y = params.origin_y + r * mp + dy;
                for (int dx = 0; dx < mp; ++dx) {
                    const int x = params.origin_x + c * mp + dx;
                    if (dark) rec.image(y, x) = params.dark_level;
                    rec.masks.box.grid(y, x) = 1;
                    if (role == ModuleRole::Finder) rec.masks.finder.grid(y, x) = 1;
                    if (role == ModuleRole::Timing) rec.masks.timing.grid(y, x) = 1;
                }
            }
        }
    }
    return rec;
}

SampleRecord make_negative(const NegativeSpec& spec, const SceneParams& params) {
    Rng rng = Rng::stream(params.seed, 0x4E47);
    const int cell = draw_cell(spec, rng);

    SampleRecord rec;
    rec.label = 0;
    rec.image = Image(params.height, params.width, params.light_level);
    rec.masks = StructureMasks::zeros(params.height, params.width);
    rec.provenance.negative = NegativeSpec{spec.kind, cell};
    rec.provenance.scene = params;
    rec.provenance.seed = params.seed;

    switch (spec.kind) {
        case NegativeKind::Checkerboard:
            for (int y = 0; y < params.height; ++y) {
                for (int x = 0; x < params.width; ++x) {
                    if ((y / cell + x / cell) % 2 == 0) rec.image(y, x) = params.dark_level;
                }
            }
            break;
        case NegativeKind::BlockNoise: {
            const int rows = (params.height + cell - 1) / cell;
            const int cols = (params.width + cell - 1) / cell;
            std::vector<std::uint8_t> dark(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols));
            for (auto& d : dark) d = rng.coin() ? 1 : 0;
            for (int y = 0; y < params.height; ++y) {
                for (int x = 0; x < params.width; ++x) {
                    if (dark[static_cast<std::size_t>(y / cell) * static_cast<std::size_t>(cols) +
                             static_cast<std::size_t>(x / cell)]) {
                        rec.image(y, x) = params.dark_level;
                    }
                }
            }
            break;
        }
        case NegativeKind::Grating:
            // Vertical square-wave stripes of period `cell`, dark for the first half.
            for (int y = 0; y < params.height; ++y) {
                for (int x = 0; x < params.width; ++x) {
                    if (2 * (x % cell) < cell) rec.image(y, x) = params.dark_level;
                }
            }
            break;
    }
    rec.background_level = mean_of(rec.image);
    return rec;
}

int label_for_index(std::size_t index, double positive_fraction) {
    const auto before = static_cast<long long>(std::floor(static_cast<double>(index) * positive_fraction));
    const auto after = static_cast<long long>(std::floor(static_cast<double>(index + 1) * positive_fraction));
    return after > before ? 1 : 0;
}

SampleRecord synthesize_sample(const SynthesisOptions& options, std::uint64_t seed, std::size_t index) {
    if (options.versions.empty() || options.ecc_levels.empty()) {
        throw BenchError(ErrorCode::InvalidArgument, "synthesis needs at least one version and ECC level");
    }
    Rng rng = Rng::stream(seed, index);

    SceneParams scene;
    scene.height = options.height;
    scene.width = options.width;
    scene.background.kind = static_cast<BackgroundKind>(rng.uniform_int(0, 2));
    scene.background.level = rng.uniform(0.3, 0.7);
    scene.background.level_end = rng.uniform(0.3, 0.7);
    scene.background.angle_deg = rng.uniform(0.0, 360.0);
    scene.background.block_px = static_cast<int>(rng.uniform_int(4, 16));
    scene.background.amplitude = rng.uniform(0.03, 0.15);
    scene.dark_level = rng.uniform(0.0, 0.25);
    scene.light_level = rng.uniform(0.75, 1.0);
    scene.seed = rng.next_u64();

    SampleRecord rec;
    if (label_for_index(index, options.positive_fraction) == 1) {
        QrSpec spec;
        spec.version = options.versions[static_cast<std::size_t>(
            rng.uniform_int(0, static_cast<std::int64_t>(options.versions.size()) - 1))];
        spec.ecc_level = options.ecc_levels[static_cast<std::size_t>(
            rng.uniform_int(0, static_cast<std::int64_t>(options.ecc_levels.size()) - 1))];
        spec.mask_pattern = options.mask_pattern;
        const int cap = byte_capacity(spec.version, spec.ecc_level);
        spec.payload.resize(static_cast<std::size_t>(rng.uniform_int(1, cap)));
        for (auto& b : spec.payload) b = static_cast<std::uint8_t>(rng.uniform_int(0, 255));

        const int side = symbol_side(spec.version);
        const int span_modules = side + 2 * kQuietZoneModules;
        const int max_fit = std::min(options.height, options.width) / span_modules;
        const int hi = std::min(options.max_module_px, max_fit);
        if (hi < options.min_module_px) {
            throw BenchError(ErrorCode::DoesNotFit, "canvas too small for QR version " + std::to_string(spec.version));
        }
        scene.module_px = static_cast<int>(rng.uniform_int(options.min_module_px, hi));
        const int quiet = kQuietZoneModules * scene.module_px;
        const int extent = side * scene.module_px;
        scene.origin_y = static_cast<int>(rng.uniform_int(quiet, options.height - extent - quiet));
        scene.origin_x = static_cast<int>(rng.uniform_int(quiet, options.width - extent - quiet));
        rec = compose_scene(build_matrix(spec), scene);
    } else {
        NegativeSpec neg;
        neg.kind = static_cast<NegativeKind>(rng.uniform_int(0, 2));
        rec = make_negative(neg, scene);
    }
    char id[32];
    std::snprintf(id, sizeof(id), "s%06zu", index);
    rec.id = id;
    rec.provenance.seed = scene.seed;
    return rec;
}

}  // namespace cambench::qr
