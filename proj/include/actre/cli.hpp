// ============================================================================
// actre/cli.hpp: command implementations behind the `actre` tool
// ============================================================================
//
// Exit codes: 0 ok, 1 runtime error, 2 usage/parse error (mapped in main).
// Every output embeds the configuration that produced it; all commands are
// deterministic given their configuration and seed.
//
// ============================================================================

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "actre/eval.hpp"
#include "actre/synth.hpp"

namespace actre::cli {

// ── compile ─────────────────────────────────────────────────────────────────

struct CompileConfig {
    std::string vocab_path;
    std::string pattern;       // pattern text (already read from file if needed)
    bool untrimmed = false;
    std::string dump_path;     // optional JSON dump
    std::string dot_path;      // optional DOT export
};

int cmd_compile(const CompileConfig& cfg);

// ── score ───────────────────────────────────────────────────────────────────

struct ScoreConfig {
    std::string pattern;
    std::string videos_path;
    std::string vocab_path;    // optional; must match the videos header if set
    ScorerKind scorer = ScorerKind::Probabilistic;
    double tau = 0.5;
    double alpha = 1e-3;
    double gamma = 1.0;
    bool untrimmed = false;
    std::string out_path;      // empty = stdout
};

int cmd_score(const ScoreConfig& cfg);

// ── gen ─────────────────────────────────────────────────────────────────────

struct GenCliConfig {
    GenConfig gen;
    std::string out_dir;
};

int cmd_gen(const GenCliConfig& cfg);

// ── eval ────────────────────────────────────────────────────────────────────

struct EvalConfig {
    std::string manifest_path;
    std::string videos_path;   // optional; used verbatim when repetitions == 1
    bool run_det = false;
    bool run_prob = true;
    HyperPoint hypers;
    std::optional<HyperGrid> grid;  // cross-validate on a derived validation emission
    std::uint32_t repetitions = 1;
    Protocol protocol = Protocol::Auto;
    std::optional<double> noise_override;
    std::string report_path;   // optional JSON report
};

int cmd_eval(const EvalConfig& cfg);

}  // namespace actre::cli
