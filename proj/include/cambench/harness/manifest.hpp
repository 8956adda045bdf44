// Copyright 2026 The CamBench Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "cambench/core/grid.hpp"
#include "cambench/core/saliency.hpp"
#include "cambench/distort/distortion.hpp"
#include "cambench/harness/io.hpp"
#include "cambench/qr/scene.hpp"
#include "json.hpp"

namespace cambench::harness {

struct MaskPaths {
    std::string finder;
    std::string timing;
    std::string box;
};

/// One manifest line. Paths are relative to the manifest's directory.
struct ManifestEntry {
    std::string id;
    std::string split;
    int label = 0;
    int height = 0;
    int width = 0;
    double background_level = 0.5;
    std::string image;
    std::optional<MaskPaths> masks;
    /// Distortion chain in "family:severity:seed" form.
    std::vector<std::string> distortions;
    nlohmann::json provenance;
};

struct Manifest {
    std::filesystem::path root;
    std::vector<ManifestEntry> entries;
};

nlohmann::json provenance_json(const qr::SceneProvenance& p, const std::vector<distort::Distortion>& chain);

nlohmann::json to_json(const ManifestEntry& e, const RunStamp& stamp);
ManifestEntry entry_from_json(const nlohmann::json& j);

/// Throws FormatError with the line number on malformed content.
Manifest read_manifest(const std::filesystem::path& path);

struct LoadedSample {
    ManifestEntry entry;
    Image image;
    /// All-zero for negatives.
    StructureMasks masks;
};

LoadedSample load_sample(const Manifest& manifest, const ManifestEntry& entry);

/// "train", "val" or "test" from a stream derived from (seed, index).
std::string split_for_index(std::uint64_t seed, std::size_t index, const std::array<double, 3>& fractions);

}  // namespace cambench::harness
