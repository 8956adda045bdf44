// Copyright 2026 The CamBench Authors
// SPDX-License-Identifier: Apache-2.0

#include "cambench/harness/manifest.hpp"

#include <fstream>

#include "cambench/core/error.hpp"
#include "cambench/core/png_io.hpp"
#include "cambench/core/rng.hpp"

namespace cambench::harness {

namespace {

using nlohmann::json;

constexpr std::uint64_t kSplitKey = 0x53504c4954;  // "SPLIT"

std::string hex(const std::vector<std::uint8_t>& bytes) {
    static constexpr char digits[] = "0123456789abcdef";
    std::string out;
    for (auto b : bytes) {
        out += digits[b >> 4];
        out += digits[b & 15];
    }
    return out;
}

json scene_json(const qr::SceneParams& s) {
    return {{"height", s.height},
            {"width", s.width},
            {"module_px", s.module_px},
            {"origin_y", s.origin_y},
            {"origin_x", s.origin_x},
            {"background",
             {{"kind", std::string(qr::to_string(s.background.kind))},
              {"level", s.background.level},
              {"level_end", s.background.level_end},
              {"angle_deg", s.background.angle_deg},
              {"block_px", s.background.block_px},
              {"amplitude", s.background.amplitude}}},
            {"dark_level", s.dark_level},
            {"light_level", s.light_level},
            {"seed", s.seed}};
}

template <class T>
T field(const json& j, const char* key, const std::string& where) {
    const auto it = j.find(key);
    if (it == j.end()) throw BenchError(ErrorCode::FormatError, where + ": missing '" + key + "'");
    try {
        return it->get<T>();
    } catch (const json::exception&) {
        throw BenchError(ErrorCode::FormatError, where + ": bad type for '" + key + "'");
    }
}

}  // namespace

json provenance_json(const qr::SceneProvenance& p, const std::vector<distort::Distortion>& chain) {
    json out = {{"seed", p.seed}, {"scene", scene_json(p.scene)}, {"qr", nullptr}, {"negative", nullptr}};
    if (p.qr) {
        out["qr"] = {{"version", p.qr->version},
                     {"ecc_level", std::string(qr::to_string(p.qr->ecc_level))},
                     {"mask_pattern", p.qr->mask_pattern ? json(*p.qr->mask_pattern) : json(nullptr)},
                     {"payload_hex", hex(p.qr->payload)}};
    }
    if (p.negative) {
        out["negative"] = {{"kind", std::string(qr::to_string(p.negative->kind))},
                           {"cell_px", p.negative->cell_px ? json(*p.negative->cell_px) : json(nullptr)}};
    }
    json steps = json::array();
    for (const auto& d : chain) {
        json params = json::object();
        for (const auto& [k, v] : d.parameters) params[k] = v;
        steps.push_back({{"family", std::string(distort::to_string(d.family))},
                         {"severity", d.severity},
                         {"seed", d.seed},
                         {"parameters", params}});
    }
    out["distortions"] = steps;
    return out;
}

json to_json(const ManifestEntry& e, const RunStamp& stamp) {
    json masks = nullptr;
    if (e.masks) masks = {{"finder", e.masks->finder}, {"timing", e.masks->timing}, {"box", e.masks->box}};
    return {{"id", e.id},
            {"split", e.split},
            {"label", e.label},
            {"height", e.height},
            {"width", e.width},
            {"background_level", e.background_level},
            {"image", e.image},
            {"masks", masks},
            {"distortions", e.distortions},
            {"provenance", e.provenance},
            {"run", stamp.to_json()}};
}

ManifestEntry entry_from_json(const json& j) {
    if (!j.is_object()) throw BenchError(ErrorCode::FormatError, "manifest line is not an object");
    ManifestEntry e;
    e.id = field<std::string>(j, "id", "manifest");
    const std::string where = "manifest entry " + e.id;
    e.split = j.value("split", "");
    e.label = field<int>(j, "label", where);
    e.height = field<int>(j, "height", where);
    e.width = field<int>(j, "width", where);
    e.background_level = j.value("background_level", 0.5);
    e.image = field<std::string>(j, "image", where);
    if (const auto it = j.find("masks"); it != j.end() && !it->is_null()) {
        e.masks = MaskPaths{field<std::string>(*it, "finder", where), field<std::string>(*it, "timing", where),
                            field<std::string>(*it, "box", where)};
    }
    if (const auto it = j.find("distortions"); it != j.end()) e.distortions = it->get<std::vector<std::string>>();
    if (const auto it = j.find("provenance"); it != j.end()) e.provenance = *it;
    if (e.label == 1 && !e.masks) throw BenchError(ErrorCode::FormatError, where + ": positive sample without masks");
    return e;
}

Manifest read_manifest(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw BenchError(ErrorCode::IoError, "cannot read manifest " + path.string());
    Manifest m;
    m.root = path.parent_path();
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (line.empty() || line[0] == '#') continue;
        const json j = json::parse(line, nullptr, false);
        if (j.is_discarded()) {
            throw BenchError(ErrorCode::FormatError, path.string() + ":" + std::to_string(number) + ": invalid JSON");
        }
        try {
            m.entries.push_back(entry_from_json(j));
        } catch (const BenchError& e) {
            throw BenchError(ErrorCode::FormatError, path.string() + ":" + std::to_string(number) + ": " + e.what());
        }
    }
    return m;
}

LoadedSample load_sample(const Manifest& manifest, const ManifestEntry& entry) {
    LoadedSample s;
    s.entry = entry;
    s.image = read_image_png(manifest.root / entry.image);
    if (entry.masks) {
        s.masks.finder = read_mask_png(manifest.root / entry.masks->finder, MaskRole::Finder);
        s.masks.timing = read_mask_png(manifest.root / entry.masks->timing, MaskRole::Timing);
        s.masks.box = read_mask_png(manifest.root / entry.masks->box, MaskRole::Box);
        const std::string what = "sample " + entry.id + ": image and masks";
        require_same_shape(s.image, s.masks.finder.grid, what.c_str());
        require_same_shape(s.image, s.masks.timing.grid, what.c_str());
        require_same_shape(s.image, s.masks.box.grid, what.c_str());
    } else {
        s.masks = StructureMasks::zeros(s.image.height(), s.image.width());
    }
    return s;
}

std::string split_for_index(std::uint64_t seed, std::size_t index, const std::array<double, 3>& fractions) {
    const double u = Rng::stream(derive_seed(seed, kSplitKey), index).uniform();
    if (u < fractions[0]) return "train";
    if (u < fractions[0] + fractions[1]) return "val";
    return "test";
}

}  // namespace cambench::harness
