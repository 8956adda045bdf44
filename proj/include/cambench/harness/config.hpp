// Copyright 2026 The CamBench Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace cambench::harness {

inline constexpr int kSchemaVersion = 1;

struct SynthConfig {
    std::size_t count = 100;
    int height = 224;
    int width = 224;
    std::vector<int> versions = {1, 2, 3, 4};
    std::vector<std::string> ecc_levels = {"L", "M", "Q", "H"};
    std::optional<int> mask_pattern;
    int min_module_px = 3;
    int max_module_px = 6;
    double positive_fraction = 0.5;
    /// train / val / test
    std::array<double, 3> split = {0.70, 0.15, 0.15};
    /// Chain applied to every sample, "family:severity[:seed]".
    std::vector<std::string> distortions;
    /// Ground-truth saliency written per positive: finder, timing, structure,
    /// box.
    std::vector<std::string> oracle_saliency;
};

struct EvalConfig {
    std::string manifest;
    std::string saliency_dir;
    std::vector<std::string> methods;
    std::string regime;
    int quantiles = 32;
    double epsilon = 1e-6;
    double lambda = 1.0;
    double alpha = 0.25;
};

struct RobustnessConfig {
    std::string manifest;
    std::vector<std::string> families = {"rotation", "perspective", "blur", "jpeg", "lowlight", "occlusion"};
    /// structure | box | uniform | edge | files
    std::string saliency = "edge";
    /// For "files": <dir>/<family>-<severity>/<id>.<method>.cbsm, severity 0 = clean.
    std::string saliency_dir;
    std::string method;
    std::size_t max_samples = 0;
    double epsilon = 1e-6;
};

struct CausalConfig {
    std::string manifest;
    /// structure | finder | timing | box | uniform | files
    std::string saliency = "structure";
    std::string saliency_dir;
    std::string method;
    /// builtin | process
    std::string scorer = "builtin";
    std::string scorer_command;
    int steps = 100;
    double fill = 0.5;
    std::size_t max_samples = 0;
    double epsilon = 1e-6;
};

struct RunConfig {
    int schema_version = kSchemaVersion;
    std::uint64_t seed = 0;
    /// Worker-pool size; excluded from the config hash.
    int workers = 1;
    /// Excluded from the config hash.
    std::string output_dir = "cambench-out";
    SynthConfig synth;
    EvalConfig eval;
    RobustnessConfig robustness;
    CausalConfig causal;
};

nlohmann::json to_json(const RunConfig& config);

/// Strict conversion: unknown keys, wrong types and out-of-range values throw
/// ConfigError naming the offending path. Missing keys keep their defaults.
RunConfig config_from_json(const nlohmann::json& j);
RunConfig load_config(const std::filesystem::path& path);

/// Range and cross-field checks; throws ConfigError.
void validate(const RunConfig& config);

/// FNV-1a 64 over the canonical dump with execution-only fields removed.
std::string config_hash(const RunConfig& config);

}  // namespace cambench::harness
