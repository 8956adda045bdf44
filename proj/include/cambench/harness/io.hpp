// Copyright 2026 The CamBench Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "cambench/core/png_io.hpp"
#include "cambench/harness/config.hpp"
#include "json.hpp"

namespace cambench::harness {

std::string_view tool_version() noexcept;

/// {config hash, seed, tool version} embedded in every output file.
struct RunStamp {
    std::string config_hash;
    std::uint64_t seed = 0;
    std::string version;

    static RunStamp of(const RunConfig& config);
    nlohmann::json to_json() const;
    PngText png_text() const;
    /// "# cambench run config_hash=... seed=... version=..."
    std::string comment_line() const;
};

/// Runs `writer` on a sibling temporary path, then renames it over `target`.
/// The temporary is removed if the writer throws.
void atomic_write(const std::filesystem::path& target, const std::function<void(const std::filesystem::path&)>& writer);
void atomic_write_text(const std::filesystem::path& target, const std::string& text);

std::string read_text(const std::filesystem::path& path);

/// Shortest round-trip decimal; empty for nullopt.
std::string format_number(double v);
std::string format_number(std::optional<double> v);

/// Quotes a CSV field when it contains a comma, quote or newline.
std::string csv_field(const std::string& s);

/// Calls fn(index, worker) for every index in [0, n) on `workers` threads.
/// The first exception stops remaining work and is rethrown.
void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t, int)>& fn);

}  // namespace cambench::harness
