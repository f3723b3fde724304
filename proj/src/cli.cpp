// ============================================================================
// cli.cpp: compile / score / gen / eval command implementations
// ============================================================================

#include "actre/cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <json.hpp>

#include "actre/detscore.hpp"
#include "actre/io.hpp"
#include "actre/probscore.hpp"

namespace actre::cli {

namespace {

// Seed streams for evaluation-side re-emissions; must stay disjoint from the
// generation streams used inside generate_dataset.
enum EvalStream : std::uint64_t { kValidation = 100, kRepetition = 101 };

Compiled compile_from_text(const std::string& text, const Vocabulary& vocab, bool untrimmed,
                           Pattern* out_pattern = nullptr) {
    Pattern p = parse(text, vocab);
    if (untrimmed) p = wrap_untrimmed(p);
    if (out_pattern) *out_pattern = p;
    return compile_pattern(p);
}

const char* scorer_name(ScorerKind kind) {
    return kind == ScorerKind::Deterministic ? "deterministic" : "probabilistic";
}

nlohmann::json hyper_json(ScorerKind kind, const HyperPoint& hp) {
    if (kind == ScorerKind::Deterministic) return {{"tau", hp.tau}};
    return {{"alpha", hp.alpha}, {"gamma", hp.gamma}};
}

}  // namespace

// ── compile ─────────────────────────────────────────────────────────────────

int cmd_compile(const CompileConfig& cfg) {
    const Vocabulary vocab = read_vocab_file(cfg.vocab_path);
    Pattern pattern;
    const Compiled compiled = compile_from_text(cfg.pattern, vocab, cfg.untrimmed, &pattern);

    std::cout << "pattern: " << format(pattern, vocab) << '\n'
              << "states: " << compiled.completed.state_count << '\n'
              << "support: " << compiled.completed.support.size() << '\n';

    if (!cfg.dump_path.empty()) {
        std::ofstream out(cfg.dump_path);
        if (!out) throw std::runtime_error("cannot open '" + cfg.dump_path + "' for writing");
        out << dump_json(compiled.completed, vocab).dump(2) << '\n';
    }
    if (!cfg.dot_path.empty()) {
        std::ofstream out(cfg.dot_path);
        if (!out) throw std::runtime_error("cannot open '" + cfg.dot_path + "' for writing");
        out << export_dot(compiled.completed, vocab);
    }
    return 0;
}

// ── score ───────────────────────────────────────────────────────────────────

int cmd_score(const ScoreConfig& cfg) {
    const VideoFile file = read_videos_file(cfg.videos_path);
    if (!cfg.vocab_path.empty()) {
        const Vocabulary from_file = read_vocab_file(cfg.vocab_path);
        if (!(from_file == file.vocab)) {
            throw std::runtime_error("--vocab does not match the vocabulary in " + cfg.videos_path);
        }
    }
    const Compiled compiled = compile_from_text(cfg.pattern, file.vocab, cfg.untrimmed);

    std::vector<std::pair<std::string, double>> scores;
    scores.reserve(file.videos.size());
    if (cfg.scorer == ScorerKind::Deterministic) {
        for (const Video& v : file.videos) {
            scores.emplace_back(v.id, det_score(compiled.partial, compiled.dist, v, cfg.tau));
        }
    } else {
        const Pa pa = build_pa(compiled.completed, cfg.alpha);
        const EmissionParams emission{cfg.gamma, 1e-6};
        for (const Video& v : file.videos) {
            scores.emplace_back(v.id, match_prob(pa, v, emission));
        }
    }

    nlohmann::json config = {{"pattern", cfg.pattern},
                             {"videos", cfg.videos_path},
                             {"scorer", scorer_name(cfg.scorer)},
                             {"untrimmed", cfg.untrimmed}};
    config.update(hyper_json(cfg.scorer, {cfg.tau, cfg.alpha, cfg.gamma}));

    if (cfg.out_path.empty()) {
        write_scores(std::cout, config, scores);
    } else {
        std::ofstream out(cfg.out_path);
        if (!out) throw std::runtime_error("cannot open '" + cfg.out_path + "' for writing");
        write_scores(out, config, scores);
    }
    return 0;
}

// ── gen ─────────────────────────────────────────────────────────────────────

int cmd_gen(const GenCliConfig& cfg) {
    const Dataset ds = generate_dataset(cfg.gen);
    std::filesystem::create_directories(cfg.out_dir);
    const std::string manifest_path = cfg.out_dir + "/manifest.json";
    const std::string videos_path = cfg.out_dir + "/videos.jsonl";
    write_manifest_file(manifest_path, ds);
    write_videos_file(videos_path, ds.vocab, ds.videos);
    std::cout << "expressions: " << ds.expressions.size() << '\n'
              << "clips: " << ds.clips.size() << '\n'
              << "seed: " << ds.config.seed << '\n'
              << "wrote " << manifest_path << " and " << videos_path << '\n';
    return 0;
}

// ── eval ────────────────────────────────────────────────────────────────────

namespace {

struct RepetitionMetrics {
    double auc = 0.0;
    double map = 0.0;
    std::vector<std::pair<std::uint32_t, std::pair<double, double>>> per_query;  // (expr, (auc, ap))
};

RepetitionMetrics measure(const Dataset& ds, std::span<const Video> videos, ScorerKind kind,
                          const HyperPoint& hp, Protocol protocol) {
    const std::vector<QueryResult> results = score_dataset(ds, videos, kind, hp, protocol);
    RepetitionMetrics m;
    m.auc = mean_auc(results);
    m.map = map_over_queries(results);
    for (const QueryResult& q : results) {
        m.per_query.emplace_back(q.expr_id,
                                 std::make_pair(auc(q.scored), average_precision(q.scored)));
    }
    return m;
}

std::pair<double, double> mean_std(const std::vector<double>& values) {
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(values.size());
    double var = 0.0;
    for (double v : values) var += (v - mean) * (v - mean);
    var /= static_cast<double>(values.size());
    return {mean, std::sqrt(var)};
}

}  // namespace

int cmd_eval(const EvalConfig& cfg) {
    Dataset ds = read_manifest_file(cfg.manifest_path);
    const double noise = cfg.noise_override.value_or(ds.config.noise);
    const std::size_t vocab_size = ds.vocab.size();

    // Video source per repetition: a provided file for a single repetition,
    // otherwise fresh noise emissions from the manifest's ground truth.
    std::vector<Video> provided;
    if (!cfg.videos_path.empty()) {
        if (cfg.repetitions != 1) {
            throw std::runtime_error("--videos only applies to a single repetition; "
                                     "multiple repetitions re-emit noise from the manifest");
        }
        VideoFile file = read_videos_file(cfg.videos_path);
        if (!(file.vocab == ds.vocab)) {
            throw std::runtime_error("videos vocabulary does not match the manifest");
        }
        if (file.videos.size() != ds.clips.size()) {
            throw std::runtime_error("videos file does not cover the manifest clips");
        }
        for (std::size_t i = 0; i < file.videos.size(); ++i) {
            if (file.videos[i].id != ds.clips[i].id) {
                throw std::runtime_error("videos file is not aligned with the manifest clips");
            }
        }
        provided = std::move(file.videos);
    }

    std::vector<ScorerKind> kinds;
    if (cfg.run_det) kinds.push_back(ScorerKind::Deterministic);
    if (cfg.run_prob) kinds.push_back(ScorerKind::Probabilistic);
    if (kinds.empty()) throw std::runtime_error("no scorer selected");

    nlohmann::json report;
    report["config"] = {{"manifest", cfg.manifest_path},
                        {"noise", noise},
                        {"repetitions", cfg.repetitions},
                        {"seed", ds.config.seed},
                        {"protocol", cfg.protocol == Protocol::Paired  ? "paired"
                                     : cfg.protocol == Protocol::Cross ? "cross"
                                                                       : "auto"}};
    nlohmann::json scorers = nlohmann::json::array();

    std::cout << "scorer          AUC                  MAP\n";
    for (ScorerKind kind : kinds) {
        HyperPoint hp = cfg.hypers;
        nlohmann::json entry;
        entry["scorer"] = scorer_name(kind);

        if (cfg.grid) {
            const std::vector<Video> validation = emit_noisy_videos(
                ds.clips, {noise, derive_seed(ds.config.seed, kValidation, 0)}, vocab_size);
            hp = grid_search(*cfg.grid, kind, [&](const HyperPoint& candidate) {
                const auto results =
                    score_dataset(ds, validation, kind, candidate, cfg.protocol);
                return map_over_queries(results);
            });
            entry["grid_searched"] = true;
        }
        entry["hypers"] = hyper_json(kind, hp);

        std::vector<double> aucs, maps;
        nlohmann::json reps = nlohmann::json::array();
        for (std::uint32_t rep = 0; rep < cfg.repetitions; ++rep) {
            std::vector<Video> emitted;
            const std::vector<Video>* videos = &provided;
            if (provided.empty()) {
                emitted = emit_noisy_videos(
                    ds.clips, {noise, derive_seed(ds.config.seed, kRepetition, rep)}, vocab_size);
                videos = &emitted;
            }
            const RepetitionMetrics m = measure(ds, *videos, kind, hp, cfg.protocol);
            aucs.push_back(m.auc);
            maps.push_back(m.map);
            nlohmann::json per_query = nlohmann::json::array();
            for (const auto& [expr, metrics] : m.per_query) {
                per_query.push_back(
                    {{"expr", expr}, {"auc", metrics.first}, {"ap", metrics.second}});
            }
            reps.push_back({{"rep", rep}, {"auc", m.auc}, {"map", m.map},
                            {"per_query", std::move(per_query)}});
        }
        entry["repetitions"] = std::move(reps);

        const auto [auc_mean, auc_std] = mean_std(aucs);
        const auto [map_mean, map_std] = mean_std(maps);
        entry["summary"] = {{"auc_mean", auc_mean},
                            {"auc_std", auc_std},
                            {"map_mean", map_mean},
                            {"map_std", map_std}};
        scorers.push_back(std::move(entry));

        char row[128];
        std::snprintf(row, sizeof(row), "%-15s %8s +/- %-8s %8s +/- %-8s\n", scorer_name(kind),
                      format_sig6(auc_mean).c_str(), format_sig6(auc_std).c_str(),
                      format_sig6(map_mean).c_str(), format_sig6(map_std).c_str());
        std::cout << row;
    }
    report["scorers"] = std::move(scorers);

    if (!cfg.report_path.empty()) {
        std::ofstream out(cfg.report_path);
        if (!out) throw std::runtime_error("cannot open '" + cfg.report_path + "' for writing");
        out << report.dump(2) << '\n';
    }
    return 0;
}

}  // namespace actre::cli
