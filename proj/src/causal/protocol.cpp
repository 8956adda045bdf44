// Copyright 2026 The CamBench Authors
// SPDX-License-Identifier: Apache-2.0

#include "cambench/causal/protocol.hpp"

#include <openssl/evp.h>
#include <poll.h>
#include <signal.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <bit>
#include <cerrno>
#include <cmath>
#include <cstring>
#include <istream>
#include <ostream>

#include "cambench/core/error.hpp"
#include "cambench/core/rng.hpp"
#include "cambench/distort/distortion.hpp"
#include "cambench/qr/scene.hpp"
#include "json.hpp"

extern char** environ;

namespace cambench::causal {

namespace {

using nlohmann::json;

static_assert(std::endian::native == std::endian::little, "wire format assumes a little-endian host");

[[noreturn]] void protocol_error(const std::string& msg) { throw BenchError(ErrorCode::ProtocolError, msg); }

json parse_object(std::string_view line) {
    json j = json::parse(line.begin(), line.end(), nullptr, false);
    if (j.is_discarded() || !j.is_object()) protocol_error("line is not a JSON object");
    return j;
}

std::uint64_t get_id(const json& j) {
    const auto it = j.find("id");
    if (it == j.end() || !it->is_number_unsigned()) protocol_error("missing or non-u64 id");
    return it->get<std::uint64_t>();
}

int get_dim(const json& j, const char* key) {
    const auto it = j.find(key);
    if (it == j.end() || !it->is_number_integer()) protocol_error(std::string("missing integer '") + key + "'");
    const auto v = it->get<std::int64_t>();
    if (v < 1 || v > kMaxGridSide) protocol_error(std::string("'") + key + "' out of range");
    return static_cast<int>(v);
}

}  // namespace

std::string base64_encode(std::span<const std::uint8_t> bytes) {
    std::string out(4 * ((bytes.size() + 2) / 3), '\0');
    const int n = EVP_EncodeBlock(reinterpret_cast<unsigned char*>(out.data()), bytes.data(), static_cast<int>(bytes.size()));
    out.resize(static_cast<std::size_t>(n));
    return out;
}

std::vector<std::uint8_t> base64_decode(std::string_view text) {
    if (text.size() % 4 != 0) throw BenchError(ErrorCode::FormatError, "base64 length is not a multiple of 4");
    std::vector<std::uint8_t> out(3 * (text.size() / 4));
    const int n = EVP_DecodeBlock(out.data(), reinterpret_cast<const unsigned char*>(text.data()), static_cast<int>(text.size()));
    if (n < 0) throw BenchError(ErrorCode::FormatError, "invalid base64");
    // EVP_DecodeBlock keeps the bytes that padding stands for.
    std::size_t pad = 0;
    if (!text.empty() && text.back() == '=') ++pad;
    if (text.size() > 1 && text[text.size() - 2] == '=') ++pad;
    out.resize(static_cast<std::size_t>(n) - pad);
    return out;
}

std::string encode_pixels(const Image& image) {
    std::vector<std::uint8_t> bytes(image.size() * 4);
    for (std::size_t i = 0; i < image.size(); ++i) {
        const auto f = static_cast<float>(image[i]);
        std::memcpy(bytes.data() + 4 * i, &f, 4);
    }
    return base64_encode(bytes);
}

Image decode_pixels(std::string_view b64, int height, int width) {
    const auto bytes = base64_decode(b64);
    Image image(height, width, 0.0);
    if (bytes.size() != image.size() * 4) protocol_error("pixel payload does not match h*w float32");
    for (std::size_t i = 0; i < image.size(); ++i) {
        float f = 0.0f;
        std::memcpy(&f, bytes.data() + 4 * i, 4);
        if (!std::isfinite(f)) protocol_error("non-finite pixel");
        image[i] = f;
    }
    return image;
}

Image quantize_to_float(const Image& image) {
    Image out = image;
    for (auto& v : out.values()) v = static_cast<double>(static_cast<float>(v));
    return out;
}

std::string handshake_line() { return json{{"protocol", kProtocolName}, {"version", kProtocolVersion}}.dump(); }

void check_handshake(std::string_view line) {
    json j = json::parse(line.begin(), line.end(), nullptr, false);
    if (j.is_discarded() || !j.is_object() || j.value("protocol", "") != kProtocolName ||
        !j.contains("version") || j["version"] != kProtocolVersion) {
        protocol_error("bad handshake: " + std::string(line.substr(0, 200)));
    }
}

std::string request_line(std::uint64_t id, const Image& image) {
    return json{{"id", id}, {"h", image.height()}, {"w", image.width()}, {"pixels_b64", encode_pixels(image)}}.dump();
}

std::string response_line(std::uint64_t id, double logit) { return json{{"id", id}, {"logit", logit}}.dump(); }

std::string error_line(std::uint64_t id, std::string_view message) {
    return json{{"id", id}, {"error", std::string(message)}}.dump();
}

Request parse_request(std::string_view line, std::optional<std::uint64_t>* id_out) {
    const json j = parse_object(line);
    Request r;
    r.id = get_id(j);
    if (id_out != nullptr) *id_out = r.id;
    const int h = get_dim(j, "h");
    const int w = get_dim(j, "w");
    const auto it = j.find("pixels_b64");
    if (it == j.end() || !it->is_string()) protocol_error("missing pixels_b64");
    try {
        r.image = decode_pixels(it->get_ref<const std::string&>(), h, w);
    } catch (const BenchError& e) {
        protocol_error(e.what());
    }
    return r;
}

Response parse_response(std::string_view line) {
    const json j = parse_object(line);
    Response r;
    r.id = get_id(j);
    if (const auto it = j.find("error"); it != j.end()) {
        r.error = it->is_string() ? it->get<std::string>() : it->dump();
        return r;
    }
    const auto it = j.find("logit");
    if (it == j.end() || !it->is_number()) protocol_error("response has no numeric logit");
    r.logit = it->get<double>();
    if (!std::isfinite(*r.logit)) protocol_error("non-finite logit");
    return r;
}

std::size_t serve(std::istream& in, std::ostream& out, std::ostream& log, Scorer& scorer) {
    out << handshake_line() << '\n' << std::flush;
    std::size_t handled = 0;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        ++handled;
        std::optional<std::uint64_t> id;
        try {
            const auto request = parse_request(line, &id);
            out << response_line(request.id, scorer.score(request.image)) << '\n' << std::flush;
        } catch (const BenchError& e) {
            if (id) {
                out << error_line(*id, e.what()) << '\n' << std::flush;
            } else {
                log << "score-serve: skipped malformed line: " << e.what() << '\n';
            }
        }
    }
    return handled;
}

ProcessScorer::ProcessScorer(const std::string& command, int timeout_ms) : timeout_ms_(timeout_ms) {
    ::signal(SIGPIPE, SIG_IGN);
    int in_pipe[2];
    int out_pipe[2];
    if (::pipe(in_pipe) != 0) throw BenchError(ErrorCode::IoError, "pipe failed");
    if (::pipe(out_pipe) != 0) {
        ::close(in_pipe[0]);
        ::close(in_pipe[1]);
        throw BenchError(ErrorCode::IoError, "pipe failed");
    }
    posix_spawn_file_actions_t actions;
    posix_spawn_file_actions_init(&actions);
    posix_spawn_file_actions_adddup2(&actions, in_pipe[0], STDIN_FILENO);
    posix_spawn_file_actions_adddup2(&actions, out_pipe[1], STDOUT_FILENO);
    for (int fd : {in_pipe[0], in_pipe[1], out_pipe[0], out_pipe[1]}) posix_spawn_file_actions_addclose(&actions, fd);
    std::string shell = "/bin/sh";
    std::string flag = "-c";
    std::string cmd = command;
    char* argv[] = {shell.data(), flag.data(), cmd.data(), nullptr};
    pid_t pid = -1;
    const int rc = posix_spawn(&pid, "/bin/sh", &actions, nullptr, argv, environ);
    posix_spawn_file_actions_destroy(&actions);
    ::close(in_pipe[0]);
    ::close(out_pipe[1]);
    to_child_ = in_pipe[1];
    from_child_ = out_pipe[0];
    if (rc != 0) {
        ::close(to_child_);
        ::close(from_child_);
        throw BenchError(ErrorCode::IoError, "cannot spawn scorer: " + std::string(std::strerror(rc)));
    }
    pid_ = pid;
    try {
        check_handshake(read_line());
    } catch (...) {
        shutdown();
        throw;
    }
}

ProcessScorer::~ProcessScorer() { shutdown(); }

void ProcessScorer::shutdown() noexcept {
    if (to_child_ >= 0) ::close(to_child_);
    if (from_child_ >= 0) ::close(from_child_);
    to_child_ = from_child_ = -1;
    if (pid_ > 0) {
        int status = 0;
        // Closing stdin asks the child to exit; do not wait on a wedged one.
        for (int i = 0; i < 200 && ::waitpid(pid_, &status, WNOHANG) == 0; ++i) ::usleep(10000);
        if (::waitpid(pid_, &status, WNOHANG) == 0) {
            ::kill(pid_, SIGKILL);
            ::waitpid(pid_, &status, 0);
        }
        pid_ = -1;
    }
}

std::string ProcessScorer::read_line() {
    for (;;) {
        if (const auto nl = buffer_.find('\n'); nl != std::string::npos) {
            std::string line = buffer_.substr(0, nl);
            buffer_.erase(0, nl + 1);
            return line;
        }
        pollfd pfd{from_child_, POLLIN, 0};
        const int ready = ::poll(&pfd, 1, timeout_ms_);
        if (ready == 0) protocol_error("scorer timed out");
        if (ready < 0) {
            if (errno == EINTR) continue;
            protocol_error("poll failed");
        }
        char chunk[65536];
        const ssize_t n = ::read(from_child_, chunk, sizeof chunk);
        if (n < 0 && errno == EINTR) continue;
        if (n <= 0) protocol_error("scorer closed its output");
        buffer_.append(chunk, static_cast<std::size_t>(n));
    }
}

void ProcessScorer::write_line(const std::string& line) {
    std::string data = line + '\n';
    std::size_t off = 0;
    while (off < data.size()) {
        const ssize_t n = ::write(to_child_, data.data() + off, data.size() - off);
        if (n < 0 && errno == EINTR) continue;
        if (n <= 0) protocol_error("scorer closed its input");
        off += static_cast<std::size_t>(n);
    }
}

std::string ProcessScorer::exchange(const std::string& line) {
    write_line(line);
    return read_line();
}

double ProcessScorer::score(const Image& image) {
    const std::uint64_t id = next_id_++;
    const auto response = parse_response(exchange(request_line(id, image)));
    if (response.id != id) protocol_error("response id " + std::to_string(response.id) + " != request id " + std::to_string(id));
    if (response.error) protocol_error("scorer error: " + *response.error);
    return *response.logit;
}

ConformanceReport run_conformance(const std::string& command, const ConformanceOptions& options) {
    ConformanceReport report;
    std::optional<ProcessScorer> proc;
    try {
        proc.emplace(command);
        report.handshake_ok = true;
    } catch (const BenchError& e) {
        report.failures.emplace_back(std::string("handshake: ") + e.what());
        return report;
    }

    SyntheticScorer builtin;
    Rng rng(options.seed);
    qr::SynthesisOptions synth;
    synth.height = synth.width = 128;
    synth.versions = {1, 2};
    std::optional<double> first_logit;
    Image first_image;
    const auto note = [&](std::string msg) {
        if (report.failures.size() < 20) report.failures.push_back(std::move(msg));
    };

    for (std::size_t i = 0; i < options.requests; ++i) {
        Image image;
        switch (i % 4) {
            case 0:  // rendered scene, sometimes distorted
            case 1: {
                auto s = qr::synthesize_sample(synth, options.seed, i);
                image = s.image;
                if (rng.coin()) {
                    const auto family = distort::kAllFamilies[static_cast<std::size_t>(rng.uniform_int(0, 5))];
                    const auto d = distort::make_distortion(family, static_cast<int>(rng.uniform_int(1, 5)), rng.next_u64());
                    image = distort::apply(distort::from_sample(s), d).image;
                }
                break;
            }
            case 2: {
                image = Image(static_cast<int>(rng.uniform_int(1, 96)), static_cast<int>(rng.uniform_int(1, 96)), 0.0);
                for (auto& v : image.values()) v = rng.uniform();
                break;
            }
            default:
                image = Image(static_cast<int>(rng.uniform_int(1, 64)), static_cast<int>(rng.uniform_int(1, 64)), rng.uniform());
                break;
        }
        if (i == 0) first_image = image;
        const std::uint64_t id = rng.next_u64();
        ++report.requests;
        try {
            const auto response = parse_response(proc->exchange(request_line(id, image)));
            if (response.id != id) {
                ++report.id_mismatches;
                note("request " + std::to_string(i) + ": id not echoed");
                continue;
            }
            if (!response.logit) {
                ++report.malformed_responses;
                note("request " + std::to_string(i) + ": error response " + response.error.value_or(""));
                continue;
            }
            if (i == 0) first_logit = response.logit;
            if (options.compare_builtin) {
                const double want = builtin.score(quantize_to_float(image));
                if (!(std::abs(*response.logit - want) <= options.tolerance)) {
                    ++report.value_mismatches;
                    note("request " + std::to_string(i) + ": logit " + std::to_string(*response.logit) + " != " + std::to_string(want));
                }
            }
        } catch (const BenchError& e) {
            ++report.malformed_responses;
            note("request " + std::to_string(i) + ": " + e.what());
            if (std::string_view(e.what()).find("closed") != std::string_view::npos) return report;
        }
    }

    try {
        // Repeat of the first request must reproduce its logit bitwise.
        if (first_logit) {
            const auto again = parse_response(proc->exchange(request_line(7, first_image)));
            if (!again.logit || *again.logit != *first_logit) {
                ++report.value_mismatches;
                note("repeat request changed its logit");
            }
        }
        // Valid id, broken payload: expect an error response carrying the id.
        const auto err = parse_response(proc->exchange(R"({"id": 4242, "h": 2, "w": 2, "pixels_b64": "!!"})"));
        report.error_path_ok = err.id == 4242 && err.error.has_value();
        if (!report.error_path_ok) note("malformed request did not yield an error response with its id");
    } catch (const BenchError& e) {
        note(std::string("error path: ") + e.what());
    }
    return report;
}

}  // namespace cambench::causal
