// Copyright 2026 The CamBench Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "cambench/core/grid.hpp"
#include "cambench/core/saliency.hpp"
#include "cambench/harness/config.hpp"

namespace cambench::harness {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFatal = 1;
inline constexpr int kExitPartial = 2;

struct CommandResult {
    int exit_code = kExitOk;
    std::vector<std::string> warnings;
};

/// Ground-truth saliency: finder, timing, structure (finder or timing), box,
/// or uniform (all ones).
Image oracle_saliency(std::string_view kind, const StructureMasks& masks);

/// Oracle saliency as a normalized field. "uniform" is built directly as
/// C = 1 everywhere, since a constant raw map normalizes to zero.
SaliencyField oracle_field(std::string_view kind, const StructureMasks& masks, double epsilon);

/// Method tags with this prefix name an oracle computed in memory instead of
/// a CBSM file, e.g. "builtin:uniform".
inline constexpr std::string_view kBuiltinMethodPrefix = "builtin:";

/// Sobel gradient magnitude with replicated borders.
Image edge_saliency(const Image& image);

/// Frozen column order of metrics.csv.
const std::vector<std::string>& metrics_csv_columns();

CommandResult cmd_synth(const RunConfig& config);
CommandResult cmd_eval(const RunConfig& config);
CommandResult cmd_robustness(const RunConfig& config);
CommandResult cmd_causal(const RunConfig& config);

/// Markdown summary of whatever result files exist in `dir`.
CommandResult cmd_report(const std::filesystem::path& dir, std::ostream& out);

}  // namespace cambench::harness
