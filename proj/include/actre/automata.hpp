// ============================================================================
// actre/automata.hpp: compiling patterns into minimized, completed DFAs
// ============================================================================
//
// The alphabet is the power set of the vocabulary, which is never enumerated.
// Machines work over the *effective* alphabet: the support Σ′ (the distinct
// symbol literals of the source pattern) plus one residual letter OTHER that
// stands for every symbol outside Σ′.  Each DFA state therefore carries one
// explicit transition per support symbol and a single default transition
// taken by all OTHER symbols.  Wildcards only ever contribute to defaults.
//
// Pipeline: desugar -> to_nfa -> determinize -> minimize -> complete.
// determinize/minimize produce *partial* machines (missing transitions mean
// the automaton halts); complete() adds an absorbing non-final reject state
// so the machine becomes total.  The reject state is added after
// minimization so it is never merged away.
//
// ============================================================================

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "actre/pattern.hpp"

namespace actre {

// ── Nfa ─────────────────────────────────────────────────────────────────────
// Thompson-style NFA.  Symbol edges are labeled by an index into `support`
// (the source pattern's literals) or by kAnyLabel for wildcard edges, which
// match every symbol including those outside the support.

struct Nfa {
    static constexpr std::int32_t kAnyLabel = -1;

    struct Edge {
        std::int32_t label = kAnyLabel;  // support index, or kAnyLabel
        std::uint32_t to = 0;
    };

    std::uint32_t state_count = 0;
    std::uint32_t start = 0;
    std::vector<std::uint32_t> finals;
    std::vector<SymbolSet> support;
    std::vector<std::vector<std::uint32_t>> eps;  // per-state epsilon edges
    std::vector<std::vector<Edge>> edges;         // per-state symbol edges
};

// ── Dfa ─────────────────────────────────────────────────────────────────────
// Deterministic machine over Σ′ ∪ {OTHER}.  Partial until complete(): a
// kNoState entry means the machine halts on that input.

struct Dfa {
    static constexpr std::int32_t kNoState = -1;

    std::uint32_t state_count = 0;
    std::uint32_t start = 0;
    std::vector<char> finals;                      // size state_count
    std::vector<SymbolSet> support;                // Σ′
    std::vector<std::vector<std::int32_t>> trans;  // [state][support index]
    std::vector<std::int32_t> defaults;            // [state], all OTHER symbols
    std::optional<std::uint32_t> reject;           // set by complete() when added

    // Index of w in Σ′, or kNoState when w is an OTHER symbol.
    std::int32_t support_index(const SymbolSet& w) const;

    // Successor on a support index (or kNoState meaning OTHER).
    std::int32_t step(std::uint32_t from, std::int32_t support_idx) const;
    std::int32_t step_symbol(std::uint32_t from, const SymbolSet& w) const;

    bool is_final(std::uint32_t state) const { return finals[state] != 0; }
    bool is_total() const;

    // Run the sequence from the start state; true iff it ends in a final
    // state (an undefined transition rejects).
    bool accepts(std::span<const SymbolSet> sequence) const;

    bool operator==(const Dfa& o) const;
};

// ── DistanceMaps ────────────────────────────────────────────────────────────
// Label-free hop counts on the transition digraph; default edges count as
// ordinary edges.  kInfinity marks unreachable.

struct DistanceMaps {
    static constexpr std::uint32_t kInfinity = UINT32_MAX;

    std::vector<std::uint32_t> from_start;
    std::vector<std::uint32_t> to_final;
};

// ── Pipeline operations ─────────────────────────────────────────────────────

// Thompson construction.  Requires a desugared pattern (no Plus nodes).
Nfa to_nfa(const Pattern& p);

// Subset construction over Σ′ ∪ {OTHER}; wildcard edges fire for every
// letter including OTHER.  Result is partial; states are numbered in
// discovery (BFS) order.
Dfa determinize(const Nfa& n);

// Hopcroft partition refinement over Σ′ ∪ {OTHER}.  Missing transitions are
// treated as edges into an implicit dead class, and states equivalent to it
// are trimmed from the result, so the output is again partial.
Dfa minimize(const Dfa& d);

// Add an absorbing non-final reject state and point every undefined
// transition at it.  If the machine is already total it is returned
// unchanged (no reject state added).
Dfa complete(const Dfa& d);

// BFS hop counts forward from the start state and backward to the set of
// final states.
DistanceMaps distances(const Dfa& d);

// DOT text: finals as double circles, the reject state as a box, one edge
// per support symbol plus one OTHER edge per state.
std::string export_dot(const Dfa& d, const Vocabulary& vocab);

// Machine dump (states, finals, Σ′ as arrays of action names, explicit
// transition table, defaults) for inspection and cross-implementation diffs.
nlohmann::json dump_json(const Dfa& d, const Vocabulary& vocab);

// ── Compiled ────────────────────────────────────────────────────────────────
// Whole-pipeline convenience: desugars, compiles, and precomputes distance
// maps on the completed machine.  `partial` and `completed` share state
// numbering (the reject state, when present, is the last state).

struct Compiled {
    Dfa partial;    // minimized, pre-completion: halting is observable
    Dfa completed;  // total machine for the probabilistic model
    DistanceMaps dist;  // computed on `completed`; valid for `partial` too
};

Compiled compile_pattern(const Pattern& p);

}  // namespace actre
