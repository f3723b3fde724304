// ============================================================================
// actre/synth.hpp: synthetic expressions, clips, and noisy emissions
// ============================================================================
//
// Expressions follow the parametric template
//
//     w_1+ ... w_{s-1}+ ( (w_s^1+ ... w_n^1+) | ... | (w_s^d+ ... w_n^d+) )
//
// with every symbol a random size-|w| subset of the vocabulary and the d
// symbols at each branch position pairwise distinct.  Positive clips are
// random walks on the compiled DFA constrained (by dynamic programming over
// (state, remaining-length) feasibility) to end in a final state at exactly
// the requested number of frames.  Negatives are other expressions' positives
// redrawn until the target machine rejects them.  Classifier behaviour is
// emulated at the probability level: indicator emissions plus uniform
// additive noise in [-x, x], clipped to [0, 1] and clamped away from exact
// zero/one.
//
// Everything is seed-deterministic; per-expression seeds are derived from
// the master seed so expressions could be generated independently.
//
// ============================================================================

#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "actre/automata.hpp"
#include "actre/pattern.hpp"
#include "actre/video.hpp"

namespace actre {

// ── Parameters ──────────────────────────────────────────────────────────────

struct ExprParams {
    std::uint32_t symbol_size = 3;      // |w|: primitives per symbol
    std::uint32_t sequence_length = 3;  // n: number of sequential symbols
    std::uint32_t branch_count = 2;     // d: alternative branches
    std::uint32_t branch_start = 2;     // s: first position covered by branches
    std::uint32_t frames = 32;          // total clip length
    std::uint32_t vocab_size = 10;      // M

    void validate() const;  // throws std::invalid_argument, incl. infeasible d
};

struct NoiseSpec {
    double level = 0.0;  // x: uniform half-width, >= 0
    std::uint64_t seed = 0;
};

struct LabeledClip {
    std::string id;
    std::uint32_t expr_id = 0;
    bool positive = true;
    std::vector<SymbolSet> symbols;  // ground truth, one per frame
};

// ── Sampling operations ─────────────────────────────────────────────────────

// Random template expression (pre-desugar: uses Plus nodes).
Pattern sample_expression(const ExprParams& params, const Vocabulary& vocab,
                          std::mt19937_64& rng);

// Walks of exact length over a machine's explicit (non-reject) transitions,
// ending in a final state.  The feasibility table is shared across samples.
class PositiveSampler {
public:
    PositiveSampler(const Dfa& dfa, std::size_t length);

    bool feasible() const { return feasible_[length_][dfa_->start] != 0; }
    std::size_t length() const { return length_; }

    // Uniform choice among feasible explicit moves at every step.  Throws
    // std::runtime_error when no accepted string of this length exists.
    std::vector<SymbolSet> sample(std::mt19937_64& rng) const;

private:
    const Dfa* dfa_;
    std::size_t length_;
    std::vector<std::vector<char>> feasible_;  // [remaining][state]
};

std::vector<SymbolSet> sample_positive(const Dfa& dfa, std::size_t frames,
                                       std::mt19937_64& rng);

// Draw a positive from a pool member other than `target_index` and redraw
// (up to 100 attempts) while the target machine accepts it.
std::vector<SymbolSet> sample_negative(std::span<const PositiveSampler> pool,
                                       std::size_t target_index, const Dfa& target,
                                       std::mt19937_64& rng);

// Indicator emissions with uniform additive noise, clipped to [0,1] and
// clamped to [1e-6, 1 - 1e-6].  level = 0 yields exact indicators (pre-clamp).
Video emit_noisy(const LabeledClip& clip, double level, std::size_t vocab_size,
                 std::mt19937_64& rng);

// ── Dataset assembly ────────────────────────────────────────────────────────

struct GenConfig {
    ExprParams params;
    std::uint32_t expression_count = 20;
    std::uint32_t positives_per_expr = 10;
    std::uint32_t negatives_per_expr = 0;
    double noise = 0.0;
    std::uint64_t seed = 0;
};

struct Expression {
    std::uint32_t id = 0;
    std::string text;
    Pattern pattern;
    Compiled machine;
};

struct Dataset {
    GenConfig config;
    Vocabulary vocab;
    std::vector<Expression> expressions;
    std::vector<LabeledClip> clips;   // expression-major, positives then negatives
    std::vector<Video> videos;        // aligned with clips
};

// Deterministic stream derivation from a master seed.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t index);

// Default vocabulary a0..a{M-1}.
Vocabulary default_vocabulary(std::uint32_t size);

// Compile one expression (parse/sample elsewhere).
Expression make_expression(std::uint32_t id, Pattern pattern, const Vocabulary& vocab);

Dataset generate_dataset(const GenConfig& config);

// Re-emit the noisy videos of a clip list (used for repeated evaluations).
std::vector<Video> emit_noisy_videos(std::span<const LabeledClip> clips, const NoiseSpec& noise,
                                     std::size_t vocab_size);

}  // namespace actre
