// Copyright 2026 The CamBench Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cambench/causal/scorer.hpp"
#include "cambench/core/grid.hpp"

namespace cambench::causal {

inline constexpr std::string_view kProtocolName = "cbqr-scorer";
inline constexpr int kProtocolVersion = 1;

std::string base64_encode(std::span<const std::uint8_t> bytes);
/// Throws FormatError on malformed input.
std::vector<std::uint8_t> base64_decode(std::string_view text);

/// H*W little-endian float32 values, base64 encoded.
std::string encode_pixels(const Image& image);
Image decode_pixels(std::string_view b64, int height, int width);

/// The image as the scorer sees it after the float32 round trip.
Image quantize_to_float(const Image& image);

std::string handshake_line();
/// Throws ProtocolError unless the line is a v1 cbqr-scorer handshake.
void check_handshake(std::string_view line);

struct Request {
    std::uint64_t id = 0;
    Image image;
};

struct Response {
    std::uint64_t id = 0;
    std::optional<double> logit;
    std::optional<std::string> error;
};

std::string request_line(std::uint64_t id, const Image& image);
std::string response_line(std::uint64_t id, double logit);
std::string error_line(std::uint64_t id, std::string_view message);

/// Throws ProtocolError; `id` in the error path is recovered when possible.
Request parse_request(std::string_view line, std::optional<std::uint64_t>* id_out = nullptr);
Response parse_response(std::string_view line);

/// Serves `scorer` until end of input: handshake first, then one response per
/// request line. Malformed lines get an error response when their id parses
/// and are otherwise reported to `log`. Returns the number of lines handled.
std::size_t serve(std::istream& in, std::ostream& out, std::ostream& log, Scorer& scorer);

/// Scorer backed by a child process speaking the wire protocol over its
/// standard streams. One connection per instance; not thread-safe.
class ProcessScorer final : public Scorer {
public:
    /// Spawns `/bin/sh -c command` and validates the handshake.
    explicit ProcessScorer(const std::string& command, int timeout_ms = 60000);
    ~ProcessScorer() override;
    ProcessScorer(const ProcessScorer&) = delete;
    ProcessScorer& operator=(const ProcessScorer&) = delete;

    double score(const Image& image) override;

    /// Sends a raw line and returns the next response line.
    std::string exchange(const std::string& line);

private:
    std::string read_line();
    void shutdown() noexcept;
    void write_line(const std::string& line);

    int pid_ = -1;
    int to_child_ = -1;
    int from_child_ = -1;
    int timeout_ms_;
    std::string buffer_;
    std::uint64_t next_id_ = 1;
};

struct ConformanceReport {
    bool handshake_ok = false;
    std::size_t requests = 0;
    std::size_t id_mismatches = 0;
    std::size_t value_mismatches = 0;
    std::size_t malformed_responses = 0;
    bool error_path_ok = false;
    std::vector<std::string> failures;

    bool passed() const noexcept {
        return handshake_ok && error_path_ok && id_mismatches == 0 && value_mismatches == 0 && malformed_responses == 0;
    }
};

struct ConformanceOptions {
    std::size_t requests = 1000;
    std::uint64_t seed = 1;
    /// Compare logits against the built-in scorer; otherwise only protocol
    /// shape and repeat-determinism are checked.
    bool compare_builtin = true;
    double tolerance = 1e-9;
};

/// Handshake, id echo on random 64-bit ids, randomized images, and the
/// malformed-request error path.
ConformanceReport run_conformance(const std::string& command, const ConformanceOptions& options = {});

}  // namespace cambench::causal
