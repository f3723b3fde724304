// ============================================================================
// actre/detscore.hpp: deterministic scoring
// ============================================================================
//
// Frames are thresholded into symbols, the DFA is simulated until it halts
// (an undefined transition, or a transition into the reject state on a
// completed machine), and the video is scored by how far along the shortest
// accepting path the run got:
//
//     score = dist(q0, q̂) / (dist(q0, q̂) + min_{f in F} dist(q̂, f))
//
// with q̂ the halting state.  A run halting in a final state scores 1 even
// when dist(q0, q̂) = 0; a halting state from which no final state is
// reachable scores 0.  Distances are label-free graph distances, not steps
// taken, so loops cannot push the score above 1.
//
// ============================================================================

#pragma once

#include <cstdint>
#include <span>

#include "actre/automata.hpp"
#include "actre/video.hpp"

namespace actre {

// Indices whose probability is >= tau (inclusive).
SymbolSet threshold_frame(const FrameProbs& frame, double tau);

struct HaltReport {
    std::uint32_t halted_state = 0;  // last state with a defined transition
    std::size_t steps_taken = 0;     // frames consumed before halting
};

// Run the symbol sequence until an undefined / reject transition or end of
// input.  Works on partial and completed machines alike.
HaltReport simulate(const Dfa& d, std::span<const SymbolSet> symbols);
HaltReport simulate(const Dfa& d, const Video& v, double tau);

// Progress score in [0, 1]; `dist` must come from the same machine
// (or its completion, which shares state numbering).
double det_score(const Dfa& d, const DistanceMaps& dist, std::span<const SymbolSet> symbols);
double det_score(const Dfa& d, const DistanceMaps& dist, const Video& v, double tau);

}  // namespace actre
