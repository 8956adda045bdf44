// Copyright 2026 The CamBench Authors
// SPDX-License-Identifier: Apache-2.0

#include "cambench/core/error.hpp"

namespace cambench {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::InvalidSaliency: return "InvalidSaliency";
        case ErrorCode::InvalidDimensions: return "InvalidDimensions";
        case ErrorCode::ShapeError: return "ShapeError";
        case ErrorCode::CapacityExceeded: return "CapacityExceeded";
        case ErrorCode::DoesNotFit: return "DoesNotFit";
        case ErrorCode::InvalidK: return "InvalidK";
        case ErrorCode::EmptyStructure: return "EmptyStructure";
        case ErrorCode::Undefined: return "Undefined";
        case ErrorCode::NotEnoughData: return "NotEnoughData";
        case ErrorCode::ProtocolError: return "ProtocolError";
        case ErrorCode::FormatError: return "FormatError";
        case ErrorCode::IoError: return "IoError";
        case ErrorCode::ConfigError: return "ConfigError";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

}  // namespace cambench
