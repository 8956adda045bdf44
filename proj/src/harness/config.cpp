// Copyright 2026 The CamBench Authors
// SPDX-License-Identifier: Apache-2.0

#include "cambench/harness/config.hpp"

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "cambench/core/error.hpp"
#include "cambench/distort/distortion.hpp"
#include "cambench/qr/qr_matrix.hpp"

namespace cambench::harness {

namespace {

using nlohmann::json;

[[noreturn]] void config_error(const std::string& path, const std::string& msg) {
    throw BenchError(ErrorCode::ConfigError, path + ": " + msg);
}

// Walks one JSON object, rejecting keys nobody asked for.
class ObjectReader {
public:
    ObjectReader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) config_error(path_, "expected an object");
    }

    void finish() const {
        for (const auto& [key, value] : j_.items()) {
            if (!seen_.contains(key)) config_error(child(key), "unknown key");
        }
    }

    template <class T>
    void read(const char* key, T& out) {
        seen_.insert(key);
        const auto it = j_.find(key);
        if (it == j_.end()) return;
        assign(*it, child(key), out);
    }

    const json* sub(const char* key) {
        seen_.insert(key);
        const auto it = j_.find(key);
        return it == j_.end() ? nullptr : &*it;
    }

    std::string child(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

private:
    static void assign(const json& v, const std::string& path, std::string& out) {
        if (!v.is_string()) config_error(path, "expected a string");
        out = v.get<std::string>();
    }
    static void assign(const json& v, const std::string& path, int& out) {
        if (!v.is_number_integer()) config_error(path, "expected an integer");
        const auto x = v.get<std::int64_t>();
        if (x < INT32_MIN || x > INT32_MAX) config_error(path, "integer out of range");
        out = static_cast<int>(x);
    }
    template <std::unsigned_integral U>
    static void assign(const json& v, const std::string& path, U& out) {
        if (!v.is_number_unsigned()) config_error(path, "expected a non-negative integer");
        out = v.get<U>();
    }
    static void assign(const json& v, const std::string& path, double& out) {
        if (!v.is_number()) config_error(path, "expected a number");
        out = v.get<double>();
    }
    static void assign(const json& v, const std::string& path, std::optional<int>& out) {
        if (v.is_null()) {
            out.reset();
            return;
        }
        int x = 0;
        assign(v, path, x);
        out = x;
    }
    template <class T>
    static void assign(const json& v, const std::string& path, std::vector<T>& out) {
        if (!v.is_array()) config_error(path, "expected an array");
        out.clear();
        for (std::size_t i = 0; i < v.size(); ++i) {
            T x{};
            assign(v[i], path + "[" + std::to_string(i) + "]", x);
            out.push_back(std::move(x));
        }
    }
    template <class T, std::size_t N>
    static void assign(const json& v, const std::string& path, std::array<T, N>& out) {
        if (!v.is_array() || v.size() != N) config_error(path, "expected an array of " + std::to_string(N) + " values");
        for (std::size_t i = 0; i < N; ++i) assign(v[i], path + "[" + std::to_string(i) + "]", out[i]);
    }

    const json& j_;
    std::string path_;
    std::set<std::string> seen_;
};

void check(bool ok, const std::string& path, const std::string& msg) {
    if (!ok) config_error(path, msg);
}

void check_one_of(const std::string& value, std::initializer_list<const char*> allowed, const std::string& path) {
    for (const char* a : allowed) {
        if (value == a) return;
    }
    std::string list;
    for (const char* a : allowed) list += std::string(list.empty() ? "" : ", ") + a;
    config_error(path, "'" + value + "' is not one of {" + list + "}");
}

}  // namespace

json to_json(const RunConfig& c) {
    json synth = {{"count", c.synth.count},
                  {"height", c.synth.height},
                  {"width", c.synth.width},
                  {"versions", c.synth.versions},
                  {"ecc_levels", c.synth.ecc_levels},
                  {"mask_pattern", c.synth.mask_pattern ? json(*c.synth.mask_pattern) : json(nullptr)},
                  {"min_module_px", c.synth.min_module_px},
                  {"max_module_px", c.synth.max_module_px},
                  {"positive_fraction", c.synth.positive_fraction},
                  {"split", c.synth.split},
                  {"distortions", c.synth.distortions},
                  {"oracle_saliency", c.synth.oracle_saliency}};
    json eval = {{"manifest", c.eval.manifest}, {"saliency_dir", c.eval.saliency_dir}, {"methods", c.eval.methods},
                 {"regime", c.eval.regime},     {"quantiles", c.eval.quantiles},       {"epsilon", c.eval.epsilon},
                 {"lambda", c.eval.lambda},     {"alpha", c.eval.alpha}};
    json robustness = {{"manifest", c.robustness.manifest},       {"families", c.robustness.families},
                       {"saliency", c.robustness.saliency},       {"saliency_dir", c.robustness.saliency_dir},
                       {"method", c.robustness.method},           {"max_samples", c.robustness.max_samples},
                       {"epsilon", c.robustness.epsilon}};
    json causal = {{"manifest", c.causal.manifest},   {"saliency", c.causal.saliency},
                   {"saliency_dir", c.causal.saliency_dir}, {"method", c.causal.method},
                   {"scorer", c.causal.scorer},       {"scorer_command", c.causal.scorer_command},
                   {"steps", c.causal.steps},         {"fill", c.causal.fill},
                   {"max_samples", c.causal.max_samples}, {"epsilon", c.causal.epsilon}};
    return {{"schema_version", c.schema_version}, {"seed", c.seed},   {"workers", c.workers},
            {"output_dir", c.output_dir},         {"synth", synth},   {"eval", eval},
            {"robustness", robustness},           {"causal", causal}};
}

RunConfig config_from_json(const json& j) {
    RunConfig c;
    ObjectReader root(j, "");
    root.read("schema_version", c.schema_version);
    if (c.schema_version != kSchemaVersion) {
        config_error("schema_version", "unsupported version " + std::to_string(c.schema_version));
    }
    root.read("seed", c.seed);
    root.read("workers", c.workers);
    root.read("output_dir", c.output_dir);
    if (const auto* s = root.sub("synth")) {
        ObjectReader r(*s, "synth");
        r.read("count", c.synth.count);
        r.read("height", c.synth.height);
        r.read("width", c.synth.width);
        r.read("versions", c.synth.versions);
        r.read("ecc_levels", c.synth.ecc_levels);
        r.read("mask_pattern", c.synth.mask_pattern);
        r.read("min_module_px", c.synth.min_module_px);
        r.read("max_module_px", c.synth.max_module_px);
        r.read("positive_fraction", c.synth.positive_fraction);
        r.read("split", c.synth.split);
        r.read("distortions", c.synth.distortions);
        r.read("oracle_saliency", c.synth.oracle_saliency);
        r.finish();
    }
    if (const auto* s = root.sub("eval")) {
        ObjectReader r(*s, "eval");
        r.read("manifest", c.eval.manifest);
        r.read("saliency_dir", c.eval.saliency_dir);
        r.read("methods", c.eval.methods);
        r.read("regime", c.eval.regime);
        r.read("quantiles", c.eval.quantiles);
        r.read("epsilon", c.eval.epsilon);
        r.read("lambda", c.eval.lambda);
        r.read("alpha", c.eval.alpha);
        r.finish();
    }
    if (const auto* s = root.sub("robustness")) {
        ObjectReader r(*s, "robustness");
        r.read("manifest", c.robustness.manifest);
        r.read("families", c.robustness.families);
        r.read("saliency", c.robustness.saliency);
        r.read("saliency_dir", c.robustness.saliency_dir);
        r.read("method", c.robustness.method);
        r.read("max_samples", c.robustness.max_samples);
        r.read("epsilon", c.robustness.epsilon);
        r.finish();
    }
    if (const auto* s = root.sub("causal")) {
        ObjectReader r(*s, "causal");
        r.read("manifest", c.causal.manifest);
        r.read("saliency", c.causal.saliency);
        r.read("saliency_dir", c.causal.saliency_dir);
        r.read("method", c.causal.method);
        r.read("scorer", c.causal.scorer);
        r.read("scorer_command", c.causal.scorer_command);
        r.read("steps", c.causal.steps);
        r.read("fill", c.causal.fill);
        r.read("max_samples", c.causal.max_samples);
        r.read("epsilon", c.causal.epsilon);
        r.finish();
    }
    root.finish();
    validate(c);
    return c;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw BenchError(ErrorCode::ConfigError, "cannot read config " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();
    json j = json::parse(text, nullptr, false, /*ignore_comments=*/true);
    if (j.is_discarded()) throw BenchError(ErrorCode::ConfigError, path.string() + ": not valid JSON");
    return config_from_json(j);
}

void validate(const RunConfig& c) {
    check(c.workers >= 1 && c.workers <= 256, "workers", "must be in 1..256");
    check(!c.output_dir.empty(), "output_dir", "must not be empty");
    const auto& s = c.synth;
    check(s.height >= 16 && s.height <= 4096, "synth.height", "must be in 16..4096");
    check(s.width >= 16 && s.width <= 4096, "synth.width", "must be in 16..4096");
    check(!s.versions.empty(), "synth.versions", "must not be empty");
    for (int v : s.versions) check(v >= 1 && v <= 4, "synth.versions", "versions must be in 1..4");
    check(!s.ecc_levels.empty(), "synth.ecc_levels", "must not be empty");
    for (const auto& e : s.ecc_levels) check_one_of(e, {"L", "M", "Q", "H"}, "synth.ecc_levels");
    if (s.mask_pattern) check(*s.mask_pattern >= 0 && *s.mask_pattern <= 7, "synth.mask_pattern", "must be in 0..7");
    check(s.min_module_px >= 3 && s.min_module_px <= s.max_module_px, "synth.min_module_px", "must be >= 3 and <= max_module_px");
    check(s.positive_fraction >= 0.0 && s.positive_fraction <= 1.0, "synth.positive_fraction", "must be in [0, 1]");
    double total = 0.0;
    for (double f : s.split) {
        check(f >= 0.0, "synth.split", "fractions must be non-negative");
        total += f;
    }
    check(std::abs(total - 1.0) < 1e-9, "synth.split", "fractions must sum to 1");
    for (const auto& d : s.distortions) {
        try {
            distort::parse_distortion(d, 0);
        } catch (const BenchError& e) {
            config_error("synth.distortions", e.what());
        }
    }
    for (const auto& m : s.oracle_saliency) check_one_of(m, {"finder", "timing", "structure", "box"}, "synth.oracle_saliency");

    for (const auto& m : c.eval.methods) {
        check(!m.empty() && m.find('/') == std::string::npos, "eval.methods", "method tags must be non-empty file-name fragments");
        if (m.starts_with("builtin:")) {
            check_one_of(m.substr(8), {"finder", "timing", "structure", "box", "uniform"}, "eval.methods");
        }
    }
    check(c.eval.quantiles >= 2, "eval.quantiles", "must be >= 2");
    check(c.eval.epsilon > 0.0, "eval.epsilon", "must be positive");
    check(c.eval.lambda >= 0.0, "eval.lambda", "must be >= 0");
    check(c.eval.alpha >= 0.0 && c.eval.alpha <= 1.0, "eval.alpha", "must be in [0, 1]");

    const auto& r = c.robustness;
    for (const auto& f : r.families) {
        try {
            distort::parse_family(f);
        } catch (const BenchError& e) {
            config_error("robustness.families", e.what());
        }
    }
    check_one_of(r.saliency, {"structure", "box", "uniform", "edge", "files"}, "robustness.saliency");
    check(r.saliency != "files" || (!r.saliency_dir.empty() && !r.method.empty()), "robustness.saliency_dir",
          "saliency 'files' needs saliency_dir and method");
    check(r.epsilon > 0.0, "robustness.epsilon", "must be positive");

    const auto& k = c.causal;
    check_one_of(k.saliency, {"structure", "finder", "timing", "box", "uniform", "files"}, "causal.saliency");
    check(k.saliency != "files" || !k.method.empty(), "causal.method", "saliency 'files' needs a method tag");
    check_one_of(k.scorer, {"builtin", "process"}, "causal.scorer");
    check(k.scorer != "process" || !k.scorer_command.empty(), "causal.scorer_command", "required when scorer is 'process'");
    check(k.steps == 0 || k.steps >= 2, "causal.steps", "must be 0 (disabled) or >= 2");
    check(k.fill >= 0.0 && k.fill <= 1.0, "causal.fill", "must be in [0, 1]");
    check(k.epsilon > 0.0, "causal.epsilon", "must be positive");
}

std::string config_hash(const RunConfig& config) {
    json j = to_json(config);
    j.erase("workers");
    j.erase("output_dir");
    const std::string canonical = j.dump();  // object keys are sorted
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char ch : canonical) {
        h ^= ch;
        h *= 0x100000001b3ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace cambench::harness
