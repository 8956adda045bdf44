// Copyright 2026 The CamBench Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cambench {

enum class ErrorCode {
    InvalidSaliency,
    InvalidDimensions,
    ShapeError,
    CapacityExceeded,
    DoesNotFit,
    InvalidK,
    EmptyStructure,
    Undefined,
    NotEnoughData,
    ProtocolError,
    FormatError,
    IoError,
    ConfigError,
    InvalidArgument,
};

std::string_view to_string(ErrorCode code);

/// Every failure surfaced by the library carries one of the codes above so
/// batch drivers can record per-sample errors without string matching.
class BenchError : public std::runtime_error {
public:
    BenchError(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace cambench
