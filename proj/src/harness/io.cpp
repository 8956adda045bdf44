// Copyright 2026 The CamBench Authors
// SPDX-License-Identifier: Apache-2.0

#include "cambench/harness/io.hpp"

#include <unistd.h>

#include <atomic>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "cambench/core/error.hpp"

#ifndef CAMBENCH_VERSION
#define CAMBENCH_VERSION "0.0.0"
#endif

namespace cambench::harness {

std::string_view tool_version() noexcept { return CAMBENCH_VERSION; }

RunStamp RunStamp::of(const RunConfig& config) { return {harness::config_hash(config), config.seed, std::string(tool_version())}; }

nlohmann::json RunStamp::to_json() const { return {{"config_hash", config_hash}, {"seed", seed}, {"version", version}}; }

PngText RunStamp::png_text() const {
    return {{"cambench:config_hash", config_hash}, {"cambench:seed", std::to_string(seed)}, {"cambench:version", version}};
}

std::string RunStamp::comment_line() const {
    return "# cambench run config_hash=" + config_hash + " seed=" + std::to_string(seed) + " version=" + version;
}

void atomic_write(const std::filesystem::path& target, const std::function<void(const std::filesystem::path&)>& writer) {
    namespace fs = std::filesystem;
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    static std::atomic<unsigned> counter{0};
    fs::path tmp = target;
    tmp += ".tmp." + std::to_string(::getpid()) + "." + std::to_string(counter++);
    try {
        writer(tmp);
        fs::rename(tmp, target);
    } catch (...) {
        std::error_code ec;
        fs::remove(tmp, ec);
        throw;
    }
}

void atomic_write_text(const std::filesystem::path& target, const std::string& text) {
    atomic_write(target, [&](const std::filesystem::path& tmp) {
        std::ofstream out(tmp, std::ios::binary);
        out << text;
        out.close();
        if (!out) throw BenchError(ErrorCode::IoError, "cannot write " + tmp.string());
    });
}

std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw BenchError(ErrorCode::IoError, "cannot read " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string format_number(double v) { return nlohmann::json(v).dump(); }

std::string format_number(std::optional<double> v) { return v ? format_number(*v) : std::string(); }

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t, int)>& fn) {
    if (workers <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i, 0);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mutex;
    {
        std::vector<std::jthread> pool;
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                for (;;) {
                    if (failed.load()) return;
                    const std::size_t i = next.fetch_add(1);
                    if (i >= n) return;
                    try {
                        fn(i, w);
                    } catch (...) {
                        const std::lock_guard lock(error_mutex);
                        if (!error) error = std::current_exception();
                        failed = true;
                    }
                }
            });
        }
    }
    if (error) std::rethrow_exception(error);
}

}  // namespace cambench::harness
