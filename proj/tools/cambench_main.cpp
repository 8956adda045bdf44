// Copyright 2026 The CamBench Authors
// SPDX-License-Identifier: Apache-2.0

// Command-line driver: synth | eval | robustness | causal | score-serve | config | report.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cambench/causal/protocol.hpp"
#include "cambench/causal/scorer.hpp"
#include "cambench/core/error.hpp"
#include "cambench/harness/commands.hpp"
#include "cambench/harness/config.hpp"
#include "cambench/harness/io.hpp"

namespace {

using namespace cambench;
using namespace cambench::harness;

struct Common {
    std::string config_path;
    std::optional<std::string> out;
    std::optional<std::uint64_t> seed;
    std::optional<int> workers;
};

void add_common(CLI::App& app, Common& c) {
    app.add_option("-c,--config", c.config_path, "JSON run configuration")->check(CLI::ExistingFile);
    app.add_option("-o,--out", c.out, "Output directory");
    app.add_option("--seed", c.seed, "Master seed");
    app.add_option("-j,--workers", c.workers, "Worker threads");
}

RunConfig resolve(const Common& c) {
    RunConfig config = c.config_path.empty() ? RunConfig{} : load_config(c.config_path);
    if (c.out) config.output_dir = *c.out;
    if (c.seed) config.seed = *c.seed;
    if (c.workers) config.workers = *c.workers;
    return config;
}

template <typename T>
void override_if(std::optional<T>& src, T& dst) {
    if (src) dst = *src;
}

int finish(const CommandResult& r) {
    for (const auto& w : r.warnings) std::cerr << "warning: " << w << "\n";
    return r.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"QR structure-aware saliency benchmark"};
    app.set_version_flag("--version", std::string(tool_version()));
    app.require_subcommand(1);

    // synth
    Common synth_common;
    std::optional<std::size_t> synth_count;
    std::vector<std::string> synth_distort;
    std::vector<std::string> synth_oracle;
    auto* synth = app.add_subcommand("synth", "Generate QR-bearing scenes, masks and a manifest");
    add_common(*synth, synth_common);
    synth->add_option("-n,--count", synth_count, "Number of samples");
    synth->add_option("--distort", synth_distort, "Distortion applied to every sample, family:severity[:seed] (repeatable)");
    synth->add_option("--oracle", synth_oracle, "Write ground-truth saliency: finder|timing|structure|box|uniform (repeatable)");

    // eval
    Common eval_common;
    std::optional<std::string> eval_manifest, eval_saliency_dir, eval_regime;
    std::vector<std::string> eval_methods;
    auto* eval = app.add_subcommand("eval", "Score saliency maps against structure masks");
    add_common(*eval, eval_common);
    eval->add_option("-m,--manifest", eval_manifest, "manifest.jsonl");
    eval->add_option("-s,--saliency-dir", eval_saliency_dir, "Directory of <id>.<method>.cbsm files");
    eval->add_option("--method", eval_methods, "Method tag (repeatable)");
    eval->add_option("--regime", eval_regime, "Free-form regime label copied into results");

    // robustness
    Common rob_common;
    std::optional<std::string> rob_manifest, rob_saliency, rob_saliency_dir, rob_method;
    std::vector<std::string> rob_families;
    std::optional<std::size_t> rob_max;
    auto* rob = app.add_subcommand("robustness", "Severity sweeps per distortion family");
    add_common(*rob, rob_common);
    rob->add_option("-m,--manifest", rob_manifest, "manifest.jsonl");
    rob->add_option("--saliency", rob_saliency, "structure|box|uniform|edge|files");
    rob->add_option("-s,--saliency-dir", rob_saliency_dir, "Root of <family>-<level>/<id>.<method>.cbsm");
    rob->add_option("--method", rob_method, "Method tag for --saliency files");
    rob->add_option("--family", rob_families, "Restrict to these families (repeatable)");
    rob->add_option("--max-samples", rob_max, "Use at most this many positives");

    // causal
    Common causal_common;
    std::optional<std::string> ca_manifest, ca_saliency, ca_saliency_dir, ca_method, ca_scorer, ca_cmd;
    std::optional<int> ca_steps;
    std::optional<std::size_t> ca_max;
    auto* ca = app.add_subcommand("causal", "Structure occlusion and insertion/deletion against a scorer");
    add_common(*ca, causal_common);
    ca->add_option("-m,--manifest", ca_manifest, "manifest.jsonl");
    ca->add_option("--saliency", ca_saliency, "structure|finder|timing|box|uniform|files");
    ca->add_option("-s,--saliency-dir", ca_saliency_dir, "Directory of <id>.<method>.cbsm files");
    ca->add_option("--method", ca_method, "Method tag for --saliency files");
    ca->add_option("--scorer", ca_scorer, "builtin|process");
    ca->add_option("--scorer-cmd", ca_cmd, "Shell command speaking the scorer protocol");
    ca->add_option("--steps", ca_steps, "Insertion/deletion steps (0 disables curves)");
    ca->add_option("--max-samples", ca_max, "Use at most this many positives");

    // score-serve
    std::optional<std::string> check_cmd;
    std::size_t check_requests = 1000;
    bool compare_builtin = false;
    auto* serve = app.add_subcommand("score-serve", "Serve the built-in scorer over stdin/stdout, or check an external one");
    serve->add_option("--check", check_cmd, "Run the conformance suite against this command instead of serving");
    serve->add_option("--requests", check_requests, "Requests issued by --check");
    serve->add_flag("--compare-builtin", compare_builtin, "With --check, require logits equal to the built-in scorer");

    // config
    Common config_common;
    auto* show = app.add_subcommand("config", "Print the resolved configuration and its hash");
    add_common(*show, config_common);

    // report
    std::string report_dir = "cambench-out";
    auto* report = app.add_subcommand("report", "Print a Markdown summary of a results directory");
    report->add_option("dir", report_dir, "Results directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitFatal;
    }

    try {
        if (*synth) {
            RunConfig c = resolve(synth_common);
            override_if(synth_count, c.synth.count);
            if (!synth_distort.empty()) c.synth.distortions = synth_distort;
            if (!synth_oracle.empty()) c.synth.oracle_saliency = synth_oracle;
            validate(c);
            return finish(cmd_synth(c));
        }
        if (*eval) {
            RunConfig c = resolve(eval_common);
            override_if(eval_manifest, c.eval.manifest);
            override_if(eval_saliency_dir, c.eval.saliency_dir);
            override_if(eval_regime, c.eval.regime);
            if (!eval_methods.empty()) c.eval.methods = eval_methods;
            validate(c);
            return finish(cmd_eval(c));
        }
        if (*rob) {
            RunConfig c = resolve(rob_common);
            override_if(rob_manifest, c.robustness.manifest);
            override_if(rob_saliency, c.robustness.saliency);
            override_if(rob_saliency_dir, c.robustness.saliency_dir);
            override_if(rob_method, c.robustness.method);
            override_if(rob_max, c.robustness.max_samples);
            if (!rob_families.empty()) c.robustness.families = rob_families;
            validate(c);
            return finish(cmd_robustness(c));
        }
        if (*ca) {
            RunConfig c = resolve(causal_common);
            override_if(ca_manifest, c.causal.manifest);
            override_if(ca_saliency, c.causal.saliency);
            override_if(ca_saliency_dir, c.causal.saliency_dir);
            override_if(ca_method, c.causal.method);
            override_if(ca_scorer, c.causal.scorer);
            override_if(ca_cmd, c.causal.scorer_command);
            override_if(ca_steps, c.causal.steps);
            override_if(ca_max, c.causal.max_samples);
            if (ca_cmd && !ca_scorer) c.causal.scorer = "process";
            validate(c);
            return finish(cmd_causal(c));
        }
        if (*serve) {
            if (check_cmd) {
                causal::ConformanceOptions opts;
                opts.requests = check_requests;
                opts.compare_builtin = compare_builtin;
                const auto r = causal::run_conformance(*check_cmd, opts);
                std::cout << "handshake: " << (r.handshake_ok ? "ok" : "FAILED") << "\n"
                          << "requests: " << r.requests << "\n"
                          << "id mismatches: " << r.id_mismatches << "\n"
                          << "value mismatches: " << r.value_mismatches << "\n"
                          << "malformed responses: " << r.malformed_responses << "\n"
                          << "error path: " << (r.error_path_ok ? "ok" : "FAILED") << "\n";
                for (const auto& f : r.failures) std::cout << "  " << f << "\n";
                std::cout << (r.passed() ? "conformance: PASS" : "conformance: FAIL") << "\n";
                return r.passed() ? kExitOk : kExitFatal;
            }
            causal::SyntheticScorer scorer;
            std::ios::sync_with_stdio(false);
            causal::serve(std::cin, std::cout, std::cerr, scorer);
            return kExitOk;
        }
        if (*show) {
            const RunConfig c = resolve(config_common);
            validate(c);
            auto j = to_json(c);
            std::cout << j.dump(2) << "\n";
            std::cerr << "config_hash " << config_hash(c) << "\n";
            return kExitOk;
        }
        if (*report) return finish(cmd_report(report_dir, std::cout));
    } catch (const BenchError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFatal;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFatal;
    }
    return kExitFatal;
}
