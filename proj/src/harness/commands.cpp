// Copyright 2026 The CamBench Authors
// SPDX-License-Identifier: Apache-2.0

#include "cambench/harness/commands.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <optional>
#include <ostream>

#include "cambench/causal/causal.hpp"
#include "cambench/causal/protocol.hpp"
#include "cambench/core/cbsm.hpp"
#include "cambench/core/error.hpp"
#include "cambench/core/png_io.hpp"
#include "cambench/core/rng.hpp"
#include "cambench/distort/distortion.hpp"
#include "cambench/harness/io.hpp"
#include "cambench/harness/manifest.hpp"
#include "cambench/metrics/structure_metrics.hpp"
#include "cambench/robust/aggregator.hpp"

namespace cambench::harness {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json mean_ci_json(const robust::MeanCi& m) { return {{"mean", m.mean}, {"ci95", m.ci95}, {"n", m.n}}; }

robust::MeanCi stats_of(const std::vector<double>& v) { return robust::mean_ci(v); }

std::string chain_label(const std::vector<std::string>& chain) {
    if (chain.empty()) return "none";
    std::string out;
    for (const auto& d : chain) out += (out.empty() ? "" : "+") + d;
    return out;
}

std::string saliency_file(const std::string& id, const std::string& method) { return id + "." + method + ".cbsm"; }

Manifest open_manifest(const std::string& path, const char* section) {
    if (path.empty()) throw BenchError(ErrorCode::ConfigError, std::string(section) + ".manifest is required");
    return read_manifest(path);
}

std::vector<const ManifestEntry*> positives(const Manifest& m, std::size_t limit) {
    std::vector<const ManifestEntry*> out;
    for (const auto& e : m.entries) {
        if (e.label == 1) out.push_back(&e);
    }
    std::sort(out.begin(), out.end(), [](const auto* a, const auto* b) { return a->id < b->id; });
    if (limit > 0 && out.size() > limit) out.resize(limit);
    return out;
}

SaliencyField saliency_from_file(const fs::path& path, double epsilon) {
    return normalize(read_cbsm(path).to_image(), epsilon);
}

}  // namespace

Image oracle_saliency(std::string_view kind, const StructureMasks& masks) {
    const int h = masks.height();
    const int w = masks.width();
    if (kind == "uniform") return Image(h, w, 1.0);
    const MaskGrid* grid = nullptr;
    BinaryMask structure;
    if (kind == "finder") {
        grid = &masks.finder.grid;
    } else if (kind == "timing") {
        grid = &masks.timing.grid;
    } else if (kind == "box") {
        grid = &masks.box.grid;
    } else if (kind == "structure") {
        structure = masks.structure_union();
        grid = &structure.grid;
    } else {
        throw BenchError(ErrorCode::InvalidArgument, "unknown oracle saliency '" + std::string(kind) + "'");
    }
    Image out(h, w, 0.0);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = (*grid)[i] ? 1.0 : 0.0;
    return out;
}

SaliencyField oracle_field(std::string_view kind, const StructureMasks& masks, double epsilon) {
    if (kind != "uniform") return normalize(oracle_saliency(kind, masks), epsilon);
    SaliencyField field;
    field.raw = Image(masks.height(), masks.width(), 1.0);
    field.normalized = field.raw;
    field.epsilon = epsilon;
    field.total_mass = static_cast<double>(field.raw.size()) + epsilon;
    return field;
}

Image edge_saliency(const Image& image) {
    const int h = image.height();
    const int w = image.width();
    const auto at = [&](int y, int x) { return image(std::clamp(y, 0, h - 1), std::clamp(x, 0, w - 1)); };
    Image out(h, w, 0.0);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const double gx = (at(y - 1, x + 1) + 2 * at(y, x + 1) + at(y + 1, x + 1)) -
                              (at(y - 1, x - 1) + 2 * at(y, x - 1) + at(y + 1, x - 1));
            const double gy = (at(y + 1, x - 1) + 2 * at(y + 1, x) + at(y + 1, x + 1)) -
                              (at(y - 1, x - 1) + 2 * at(y - 1, x) + at(y - 1, x + 1));
            out(y, x) = std::hypot(gx, gy);
        }
    }
    return out;
}

const std::vector<std::string>& metrics_csv_columns() {
    static const std::vector<std::string> columns = {
        "sample_id", "method", "regime", "distortion", "label",           "fmr",          "tmr",       "bl",
        "auc_misf",  "auc_mist", "auc_bg", "dts",      "structure_score", "leak_penalty", "degenerate"};
    return columns;
}

CommandResult cmd_synth(const RunConfig& config) {
    const fs::path out = config.output_dir;
    const auto stamp = RunStamp::of(config);
    const auto& sc = config.synth;

    qr::SynthesisOptions opts;
    opts.height = sc.height;
    opts.width = sc.width;
    opts.versions = sc.versions;
    opts.ecc_levels.clear();
    for (const auto& e : sc.ecc_levels) opts.ecc_levels.push_back(qr::parse_ecc_level(e));
    opts.mask_pattern = sc.mask_pattern;
    opts.min_module_px = sc.min_module_px;
    opts.max_module_px = sc.max_module_px;
    opts.positive_fraction = sc.positive_fraction;

    std::vector<distort::Distortion> templates;
    for (const auto& d : sc.distortions) templates.push_back(distort::parse_distortion(d, config.seed));

    fs::create_directories(out / "images");
    fs::create_directories(out / "masks");
    if (!sc.oracle_saliency.empty()) fs::create_directories(out / "saliency");

    std::vector<ManifestEntry> entries(sc.count);
    parallel_for(sc.count, config.workers, [&](std::size_t i, int) {
        const auto sample = qr::synthesize_sample(opts, config.seed, i);
        std::vector<distort::Distortion> chain;
        for (const auto& t : templates) {
            chain.push_back(distort::make_distortion(t.family, t.severity, derive_seed(t.seed, i)));
        }
        const auto d = distort::apply_chain(sample, chain);

        ManifestEntry e;
        e.id = sample.id;
        e.split = split_for_index(config.seed, i, sc.split);
        e.label = sample.label;
        e.height = d.image.height();
        e.width = d.image.width();
        e.background_level = d.background_level;
        e.image = "images/" + e.id + ".png";
        for (const auto& step : chain) e.distortions.push_back(distort::format_distortion(step));
        e.provenance = provenance_json(sample.provenance, chain);

        atomic_write(out / e.image, [&](const fs::path& tmp) { write_image_png(tmp, d.image, stamp.png_text()); });
        if (e.label == 1) {
            e.masks = MaskPaths{"masks/" + e.id + ".finder.png", "masks/" + e.id + ".timing.png", "masks/" + e.id + ".box.png"};
            const auto text = stamp.png_text();
            atomic_write(out / e.masks->finder, [&](const fs::path& tmp) { write_mask_png(tmp, d.masks.finder, text); });
            atomic_write(out / e.masks->timing, [&](const fs::path& tmp) { write_mask_png(tmp, d.masks.timing, text); });
            atomic_write(out / e.masks->box, [&](const fs::path& tmp) { write_mask_png(tmp, d.masks.box, text); });
            for (const auto& kind : sc.oracle_saliency) {
                const auto map = CbsmMap::from_image(oracle_saliency(kind, d.masks));
                atomic_write(out / "saliency" / saliency_file(e.id, kind), [&](const fs::path& tmp) { write_cbsm(tmp, map); });
            }
        }
        entries[i] = std::move(e);
    });

    std::string manifest;
    for (const auto& e : entries) manifest += to_json(e, stamp).dump() + "\n";
    atomic_write_text(out / "manifest.jsonl", manifest);
    return {};
}

CommandResult cmd_eval(const RunConfig& config) {
    const auto& ec = config.eval;
    if (ec.methods.empty()) throw BenchError(ErrorCode::ConfigError, "eval.methods must name at least one method tag");
    const Manifest manifest = open_manifest(ec.manifest, "eval");
    const fs::path saliency_dir = ec.saliency_dir.empty() ? manifest.root / "saliency" : fs::path(ec.saliency_dir);
    const fs::path out = config.output_dir;
    const auto stamp = RunStamp::of(config);
    const auto pos = positives(manifest, 0);

    struct Row {
        std::string sample_id;
        std::string method;
        std::string distortion;
        int label = 1;
        std::optional<metrics::MetricReport> report;
        std::string error;
    };
    std::vector<std::vector<Row>> rows(pos.size());
    metrics::MetricOptions options;
    options.quantiles = ec.quantiles;
    options.penalty = {ec.lambda, ec.alpha};

    parallel_for(pos.size(), config.workers, [&](std::size_t i, int) {
        const auto& entry = *pos[i];
        std::optional<LoadedSample> sample;
        std::string load_error;
        try {
            sample = load_sample(manifest, entry);
        } catch (const BenchError& e) {
            load_error = e.what();
        }
        for (const auto& method : ec.methods) {
            Row r{entry.id, method, chain_label(entry.distortions), entry.label, std::nullopt, load_error};
            if (sample) {
                try {
                    const auto sal = method.starts_with(kBuiltinMethodPrefix)
                                         ? oracle_field(std::string_view(method).substr(kBuiltinMethodPrefix.size()),
                                                        sample->masks, ec.epsilon)
                                         : saliency_from_file(saliency_dir / saliency_file(entry.id, method), ec.epsilon);
                    r.report = metrics::evaluate(sal, sample->masks, options);
                } catch (const BenchError& e) {
                    r.error = e.what();
                } catch (const std::filesystem::filesystem_error& e) {
                    r.error = e.what();
                }
            }
            rows[i].push_back(std::move(r));
        }
    });

    std::string jsonl;
    std::string csv = stamp.comment_line() + "\n";
    const auto& columns = metrics_csv_columns();
    for (std::size_t c = 0; c < columns.size(); ++c) csv += (c ? "," : "") + columns[c];
    csv += "\n";
    json skipped = json::array();
    std::vector<std::string> method_order = ec.methods;
    struct Acc {
        std::vector<double> fmr, tmr, bl, auc_misf, auc_mist, auc_bg, dts, score, leak;
        std::size_t degenerate = 0;
    };
    std::vector<Acc> acc(method_order.size());
    json latencies = json::array();
    std::int64_t total_us = 0;
    std::vector<std::int64_t> lat;

    for (const auto& per_sample : rows) {
        for (std::size_t m = 0; m < per_sample.size(); ++m) {
            const Row& r = per_sample[m];
            if (!r.report) {
                jsonl += json{{"sample_id", r.sample_id}, {"method", r.method}, {"error", r.error}, {"run", stamp.to_json()}}.dump() + "\n";
                skipped.push_back({{"sample_id", r.sample_id}, {"method", r.method}, {"reason", r.error}});
                continue;
            }
            const auto& x = *r.report;
            jsonl += json{{"sample_id", r.sample_id}, {"method", r.method}, {"regime", ec.regime},
                          {"distortion", r.distortion}, {"label", r.label}, {"fmr", x.fmr}, {"tmr", x.tmr},
                          {"bl", x.bl}, {"auc_misf", x.auc_misf}, {"auc_mist", x.auc_mist}, {"auc_bg", x.auc_bg},
                          {"dts", x.dts}, {"structure_score", x.structure_score}, {"leak_penalty", x.leak_penalty},
                          {"degenerate", x.degenerate}, {"run", stamp.to_json()}}
                         .dump() +
                     "\n";
            csv += csv_field(r.sample_id) + "," + csv_field(r.method) + "," + csv_field(ec.regime) + "," +
                   csv_field(r.distortion) + "," + std::to_string(r.label) + "," + format_number(x.fmr) + "," +
                   format_number(x.tmr) + "," + format_number(x.bl) + "," + format_number(x.auc_misf) + "," +
                   format_number(x.auc_mist) + "," + format_number(x.auc_bg) + "," + format_number(x.dts) + "," +
                   format_number(x.structure_score) + "," + format_number(x.leak_penalty) + "," +
                   (x.degenerate ? "1" : "0") + "\n";
            Acc& a = acc[m];
            a.fmr.push_back(x.fmr);
            a.tmr.push_back(x.tmr);
            a.bl.push_back(x.bl);
            a.auc_misf.push_back(x.auc_misf);
            a.auc_mist.push_back(x.auc_mist);
            a.auc_bg.push_back(x.auc_bg);
            a.dts.push_back(x.dts);
            a.score.push_back(x.structure_score);
            a.leak.push_back(x.leak_penalty);
            a.degenerate += x.degenerate ? 1 : 0;
            lat.push_back(x.eval_latency_us);
            total_us += x.eval_latency_us;
        }
    }

    json methods = json::object();
    for (std::size_t m = 0; m < method_order.size(); ++m) {
        const Acc& a = acc[m];
        methods[method_order[m]] = {{"n", a.fmr.size()},
                                    {"degenerate", a.degenerate},
                                    {"fmr", mean_ci_json(stats_of(a.fmr))},
                                    {"tmr", mean_ci_json(stats_of(a.tmr))},
                                    {"bl", mean_ci_json(stats_of(a.bl))},
                                    {"auc_misf", mean_ci_json(stats_of(a.auc_misf))},
                                    {"auc_mist", mean_ci_json(stats_of(a.auc_mist))},
                                    {"auc_bg", mean_ci_json(stats_of(a.auc_bg))},
                                    {"dts", mean_ci_json(stats_of(a.dts))},
                                    {"structure_score", mean_ci_json(stats_of(a.score))},
                                    {"leak_penalty", mean_ci_json(stats_of(a.leak))}};
    }
    const std::size_t negatives = manifest.entries.size() - pos.size();
    const json summary = {{"run", stamp.to_json()},
                          {"regime", ec.regime},
                          {"quantiles", ec.quantiles},
                          {"epsilon", ec.epsilon},
                          {"penalty", {{"lambda", ec.lambda}, {"alpha", ec.alpha}}},
                          {"methods", methods},
                          {"negatives_not_scored", negatives},
                          {"skipped", skipped}};

    std::sort(lat.begin(), lat.end());
    const auto pct = [&](double f) { return lat.empty() ? 0 : lat[static_cast<std::size_t>(f * static_cast<double>(lat.size() - 1))]; };
    const json timing = {{"run", stamp.to_json()},
                         {"note", "wall-clock metric evaluation latency per map; not model latency"},
                         {"maps", lat.size()},
                         {"total_us", total_us},
                         {"mean_us", lat.empty() ? 0.0 : static_cast<double>(total_us) / static_cast<double>(lat.size())},
                         {"p50_us", pct(0.5)},
                         {"p95_us", pct(0.95)},
                         {"maps_per_second", total_us > 0 ? 1e6 * static_cast<double>(lat.size()) / static_cast<double>(total_us) : 0.0}};

    const fs::path dir = config.output_dir;
    atomic_write_text(dir / "metrics.jsonl", jsonl);
    atomic_write_text(dir / "metrics.csv", csv);
    atomic_write_text(dir / "summary.json", summary.dump(2) + "\n");
    atomic_write_text(dir / "timing.json", timing.dump(2) + "\n");

    CommandResult result;
    if (!skipped.empty()) {
        result.exit_code = kExitPartial;
        result.warnings.push_back(std::to_string(skipped.size()) + " (sample, method) pairs skipped; see summary.json");
    }
    return result;
}

CommandResult cmd_robustness(const RunConfig& config) {
    const auto& rc = config.robustness;
    const Manifest manifest = open_manifest(rc.manifest, "robustness");
    const auto pos = positives(manifest, rc.max_samples);
    if (pos.empty()) throw BenchError(ErrorCode::NotEnoughData, "robustness needs at least one positive sample");
    const auto stamp = RunStamp::of(config);

    std::vector<LoadedSample> samples(pos.size());
    parallel_for(pos.size(), config.workers, [&](std::size_t i, int) { samples[i] = load_sample(manifest, *pos[i]); });

    CommandResult result;
    std::vector<robust::SeveritySeries> series;
    json schedule = json::object();
    json skipped_families = json::array();
    for (const auto& family_name : rc.families) {
        const auto family = distort::parse_family(family_name);
        const std::uint64_t family_seed = derive_seed(config.seed, static_cast<std::uint64_t>(family) + 1);
        const int levels = distort::kMaxSeverity + 1;
        std::vector<std::vector<robust::LevelSample>> per_level(static_cast<std::size_t>(levels),
                                                                std::vector<robust::LevelSample>(samples.size()));
        std::vector<std::string> missing(samples.size());
        parallel_for(samples.size(), config.workers, [&](std::size_t i, int) {
            const auto& s = samples[i];
            distort::DistortedSample base{s.entry.id, s.image, s.masks, {}, s.entry.background_level, 1};
            for (int j = 0; j < levels; ++j) {
                const auto d = j == 0 ? base : distort::apply(base, distort::make_distortion(family, j, derive_seed(family_seed, i)));
                SaliencyField sal;
                if (rc.saliency == "files") {
                    const fs::path path = fs::path(rc.saliency_dir) / (family_name + "-" + std::to_string(j)) /
                                          saliency_file(s.entry.id, rc.method);
                    if (!fs::exists(path)) {
                        missing[i] = path.string();
                        return;
                    }
                    sal = saliency_from_file(path, rc.epsilon);
                } else if (rc.saliency == "edge") {
                    sal = normalize(edge_saliency(d.image), rc.epsilon);
                } else {
                    sal = oracle_field(rc.saliency, d.masks, rc.epsilon);
                }
                const auto masks = align_masks(d.masks, sal.normalized.height(), sal.normalized.width());
                const auto r = metrics::mass_ratios(sal, masks);
                per_level[static_cast<std::size_t>(j)][i] = {r.bl, r.fmr, r.tmr};
            }
        });
        const auto first_missing = std::find_if(missing.begin(), missing.end(), [](const auto& m) { return !m.empty(); });
        if (first_missing != missing.end()) {
            result.warnings.push_back("family " + family_name + " skipped: missing saliency " + *first_missing);
            skipped_families.push_back({{"family", family_name}, {"missing", *first_missing}});
            continue;
        }
        json fam_schedule = json::array();
        for (int j = 1; j < levels; ++j) {
            json params = json::object();
            for (const auto& [k, v] : distort::make_distortion(family, j, family_seed).parameters) params[k] = v;
            fam_schedule.push_back({{"severity", j}, {"parameters_for_seed", params}});
        }
        schedule[family_name] = fam_schedule;
        series.push_back(robust::build_series(family_name, per_level));
    }
    if (series.empty()) throw BenchError(ErrorCode::NotEnoughData, "every distortion family was skipped");
    const auto summary = robust::summarize(series, robust::Aggregation::Pooled);

    json series_json = json::array();
    std::string csv = stamp.comment_line() + "\nfamily,level,severity,n,bl_mean,bl_ci95,fmr_mean,fmr_ci95,tmr_mean,tmr_ci95\n";
    std::string tsv = stamp.comment_line() + "\nfamily\tmetric\tseverity\tmean\tci95\n";
    for (const auto& s : series) {
        json bl = json::array(), fmr = json::array(), tmr = json::array();
        for (std::size_t j = 0; j < s.severities.size(); ++j) {
            bl.push_back(mean_ci_json(s.bl[j]));
            fmr.push_back(mean_ci_json(s.fmr[j]));
            tmr.push_back(mean_ci_json(s.tmr[j]));
            csv += s.family + "," + std::to_string(j) + "," + format_number(s.severities[j]) + "," +
                   std::to_string(s.bl[j].n) + "," + format_number(s.bl[j].mean) + "," + format_number(s.bl[j].ci95) +
                   "," + format_number(s.fmr[j].mean) + "," + format_number(s.fmr[j].ci95) + "," +
                   format_number(s.tmr[j].mean) + "," + format_number(s.tmr[j].ci95) + "\n";
        }
        for (const auto& [name, values] : {std::pair{"bl", &s.bl}, std::pair{"fmr", &s.fmr}, std::pair{"tmr", &s.tmr}}) {
            for (std::size_t j = 0; j < s.severities.size(); ++j) {
                tsv += s.family + "\t" + name + "\t" + format_number(s.severities[j]) + "\t" +
                       format_number((*values)[j].mean) + "\t" + format_number((*values)[j].ci95) + "\n";
            }
        }
        series_json.push_back({{"family", s.family}, {"severities", s.severities}, {"bl", bl}, {"fmr", fmr}, {"tmr", tmr}});
    }
    json families = json::array();
    for (const auto& f : summary.families) {
        families.push_back({{"family", f.family}, {"bl_slope", f.bl_slope}, {"fmr_aurc", f.fmr_aurc}, {"tmr_aurc", f.tmr_aurc}});
    }
    const json doc = {{"run", stamp.to_json()},
                      {"saliency", rc.saliency},
                      {"method", rc.method},
                      {"samples", samples.size()},
                      {"severity_axis", "level j of 5 maps to s = j/5; s = 0 is the clean image; BL slope is per unit s"},
                      {"schedule", schedule},
                      {"series", series_json},
                      {"summary",
                       {{"aggregation", "pooled"},
                        {"bl_slope", summary.bl_slope},
                        {"fmr_aurc", summary.fmr_aurc},
                        {"tmr_aurc", summary.tmr_aurc},
                        {"ci95", {{"bl_slope", summary.bl_slope_ci95}, {"fmr_aurc", summary.fmr_aurc_ci95}, {"tmr_aurc", summary.tmr_aurc_ci95}}},
                        {"families", families}}},
                      {"skipped_families", skipped_families}};
    const fs::path dir = config.output_dir;
    atomic_write_text(dir / "robustness.json", doc.dump(2) + "\n");
    atomic_write_text(dir / "robustness.csv", csv);
    atomic_write_text(dir / "robustness.tsv", tsv);
    if (!result.warnings.empty()) result.exit_code = kExitPartial;
    return result;
}

CommandResult cmd_causal(const RunConfig& config) {
    const auto& cc = config.causal;
    const Manifest manifest = open_manifest(cc.manifest, "causal");
    const auto pos = positives(manifest, cc.max_samples);
    const auto stamp = RunStamp::of(config);

    std::vector<std::unique_ptr<causal::Scorer>> scorers;
    for (int w = 0; w < std::max(1, config.workers); ++w) {
        if (cc.scorer == "process") {
            scorers.push_back(std::make_unique<causal::ProcessScorer>(cc.scorer_command));
        } else {
            scorers.push_back(std::make_unique<causal::SyntheticScorer>());
        }
    }
    causal::CausalOptions options;
    options.fill = cc.fill;
    options.steps = cc.steps;

    std::vector<std::optional<causal::CausalRecord>> records(pos.size());
    std::vector<std::string> errors(pos.size());
    parallel_for(pos.size(), config.workers, [&](std::size_t i, int worker) {
        const auto sample = load_sample(manifest, *pos[i]);
        SaliencyField sal;
        try {
            if (cc.saliency == "files") {
                const fs::path dir = cc.saliency_dir.empty() ? manifest.root / "saliency" : fs::path(cc.saliency_dir);
                sal = saliency_from_file(dir / saliency_file(sample.entry.id, cc.method), cc.epsilon);
            } else {
                sal = oracle_field(cc.saliency, sample.masks, cc.epsilon);
            }
        } catch (const BenchError& e) {
            errors[i] = e.what();
            return;
        }
        causal::CausalInput input{sample.entry.id, sample.image, sample.masks, std::move(sal), derive_seed(config.seed, i)};
        records[i] = causal::causal_record(input, *scorers[static_cast<std::size_t>(worker)], options);
    });

    CommandResult result;
    std::vector<causal::CausalRecord> ok;
    json skipped = json::array();
    for (std::size_t i = 0; i < pos.size(); ++i) {
        if (records[i]) {
            ok.push_back(*records[i]);
        } else {
            skipped.push_back({{"sample_id", pos[i]->id}, {"reason", errors[i]}});
        }
    }
    const auto summary = causal::summarize_causal(ok);

    std::string jsonl;
    std::string csv = stamp.comment_line() +
                      "\nsample_id,fmr,tmr,logit,delta_finder,delta_timing,delta_background,insertion_auc,deletion_auc\n";
    std::vector<double> ins, del;
    for (const auto& r : ok) {
        jsonl += json{{"sample_id", r.sample_id},
                      {"fmr", r.fmr},
                      {"tmr", r.tmr},
                      {"logit", r.logit},
                      {"delta_finder", r.delta_finder},
                      {"delta_timing", r.delta_timing},
                      {"delta_background", r.delta_background},
                      {"insertion_auc", r.insertion_auc ? json(*r.insertion_auc) : json(nullptr)},
                      {"deletion_auc", r.deletion_auc ? json(*r.deletion_auc) : json(nullptr)},
                      {"run", stamp.to_json()}}
                     .dump() +
                 "\n";
        csv += csv_field(r.sample_id) + "," + format_number(r.fmr) + "," + format_number(r.tmr) + "," +
               format_number(r.logit) + "," + format_number(r.delta_finder) + "," + format_number(r.delta_timing) + "," +
               format_number(r.delta_background) + "," + format_number(r.insertion_auc) + "," +
               format_number(r.deletion_auc) + "\n";
        if (r.insertion_auc) ins.push_back(*r.insertion_auc);
        if (r.deletion_auc) del.push_back(*r.deletion_auc);
    }
    const auto opt = [](const std::optional<double>& v) { return v ? json(*v) : json(nullptr); };
    const json doc = {{"run", stamp.to_json()},
                      {"scorer", cc.scorer},
                      {"saliency", cc.saliency},
                      {"method", cc.method},
                      {"fill", cc.fill},
                      {"steps", cc.steps},
                      {"summary",
                       {{"n", summary.n},
                        {"rho_finder", opt(summary.rho_finder)},
                        {"rho_timing", opt(summary.rho_timing)},
                        {"mean_delta_finder", summary.mean_delta_finder},
                        {"mean_delta_timing", summary.mean_delta_timing},
                        {"mean_delta_background", summary.mean_delta_background},
                        {"sign_test_finder_vs_background",
                         {{"positive", summary.finder_vs_background.positive},
                          {"negative", summary.finder_vs_background.negative},
                          {"ties", summary.finder_vs_background.ties},
                          {"p_value", summary.finder_vs_background.p_value}}},
                        {"insertion_auc", ins.empty() ? json(nullptr) : mean_ci_json(stats_of(ins))},
                        {"deletion_auc", del.empty() ? json(nullptr) : mean_ci_json(stats_of(del))}}},
                      {"skipped", skipped}};
    const fs::path dir = config.output_dir;
    atomic_write_text(dir / "causal.jsonl", jsonl);
    atomic_write_text(dir / "causal.csv", csv);
    atomic_write_text(dir / "causal.json", doc.dump(2) + "\n");
    if (!skipped.empty()) {
        result.exit_code = kExitPartial;
        result.warnings.push_back(std::to_string(skipped.size()) + " samples skipped; see causal.json");
    }
    return result;
}

CommandResult cmd_report(const fs::path& dir, std::ostream& out) {
    CommandResult result;
    bool any = false;
    const auto fmt = [](const json& v) {
        if (v.is_null()) return std::string("n/a");
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.4f", v.get<double>());
        return std::string(buf);
    };
    if (fs::exists(dir / "summary.json")) {
        any = true;
        const json s = json::parse(read_text(dir / "summary.json"));
        out << "## Structural metrics\n\n| method | n | FMR | TMR | BL | AUC_MISF | AUC_MIST | AUC_BG | DtS | StructureScore |\n"
               "|---|---|---|---|---|---|---|---|---|---|\n";
        for (const auto& [method, m] : s["methods"].items()) {
            out << "| " << method << " | " << m["n"].get<std::size_t>();
            for (const char* k : {"fmr", "tmr", "bl", "auc_misf", "auc_mist", "auc_bg", "dts", "structure_score"}) {
                out << " | " << fmt(m[k]["mean"]) << " ± " << fmt(m[k]["ci95"]);
            }
            out << " |\n";
        }
        out << "\nskipped pairs: " << s["skipped"].size() << "\n\n";
    }
    if (fs::exists(dir / "timing.json")) {
        const json t = json::parse(read_text(dir / "timing.json"));
        out << "Metric evaluation latency (not model latency): mean " << fmt(t["mean_us"]) << " us/map, "
            << fmt(t["maps_per_second"]) << " maps/s\n\n";
    }
    if (fs::exists(dir / "robustness.json")) {
        any = true;
        const json r = json::parse(read_text(dir / "robustness.json"));
        const auto& s = r["summary"];
        out << "## Robustness (saliency: " << r["saliency"].get<std::string>() << ")\n\n| family | BL slope | FMR AURC | TMR AURC |\n|---|---|---|---|\n";
        for (const auto& f : s["families"]) {
            out << "| " << f["family"].get<std::string>() << " | " << fmt(f["bl_slope"]) << " | " << fmt(f["fmr_aurc"])
                << " | " << fmt(f["tmr_aurc"]) << " |\n";
        }
        out << "| **pooled** | " << fmt(s["bl_slope"]) << " | " << fmt(s["fmr_aurc"]) << " | " << fmt(s["tmr_aurc"]) << " |\n\n";
    }
    if (fs::exists(dir / "causal.json")) {
        any = true;
        const json c = json::parse(read_text(dir / "causal.json"));
        const auto& s = c["summary"];
        out << "## Causal occlusion (scorer: " << c["scorer"].get<std::string>() << ", n = " << s["n"].get<std::size_t>() << ")\n\n"
            << "rho(FMR, dFinder) = " << fmt(s["rho_finder"]) << ", rho(TMR, dTiming) = " << fmt(s["rho_timing"]) << "\n"
            << "mean dFinder = " << fmt(s["mean_delta_finder"]) << ", mean dBackground = " << fmt(s["mean_delta_background"])
            << ", sign test p = " << s["sign_test_finder_vs_background"]["p_value"].get<double>() << "\n";
        if (!s["deletion_auc"].is_null()) {
            out << "insertion AUC = " << fmt(s["insertion_auc"]["mean"]) << ", deletion AUC = " << fmt(s["deletion_auc"]["mean"]) << "\n";
        }
        out << "\n";
    }
    if (!any) {
        result.exit_code = kExitFatal;
        result.warnings.push_back("no result files found in " + dir.string());
    }
    return result;
}

}  // namespace cambench::harness
