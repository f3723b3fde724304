// ============================================================================
// actre/probscore.hpp: probabilistic automaton scoring
// ============================================================================
//
// The completed DFA is smoothed into a probabilistic automaton: for every
// support symbol w, a row-stochastic matrix
//
//     [T_w]_{ij} = (1[delta(i,w)=j] + alpha) / (1 + alpha |Q|)
//
// plus one shared residual matrix t_bar built the same way from the default
// transitions, and a start distribution rho smoothed identically.  Per-frame
// classifier outputs are fused into a symbol distribution
//
//     p(w|x) ∝ ( prod_a p_a^[a in w] (1-p_a)^[a not in w] )^gamma
//
// whose normalizer factorizes as prod_a (p_a^gamma + (1-p_a)^gamma), so
// exact normalization costs O(M) instead of O(2^M).  The induced transition
// matrix marginalizes the symbol away without enumerating the alphabet:
//
//     I(x) = sum_{w in Σ′} T_w p(w|x)  +  t_bar (1 - sum_{w in Σ′} p(w|x))
//
// and a video is scored by the length-normalized mass on final states,
//
//     score = sum_{q in F} ( [rho^T prod_i I(x_i)]_q )^(1/n),
//
// computed with running renormalization so long videos cannot underflow.
// The 1/n power is applied to the state distribution entrywise, before the
// reduction over final states; with a single final state the score is always
// in [0, 1], and with |F| finals it is bounded by |F|.
//
// naive_* variants enumerate the power set / all symbol sequences outright
// and exist as brute-force cross-checks for small instances.
//
// ============================================================================

#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "actre/automata.hpp"
#include "actre/video.hpp"

namespace actre {

// ── EmissionParams ──────────────────────────────────────────────────────────

struct EmissionParams {
    double gamma = 1.0;       // independence-violation correction exponent, > 0
    double clamp_eps = 1e-6;  // probability floor/ceiling before exponentiation

    void validate() const;  // throws std::invalid_argument
};

// ── Pa ──────────────────────────────────────────────────────────────────────

struct Pa {
    Eigen::RowVectorXd rho;                   // start distribution
    std::vector<Eigen::MatrixXd> t_support;   // one matrix per support symbol
    Eigen::MatrixXd t_bar;                    // shared matrix for all OTHER symbols
    std::vector<SymbolSet> support;           // Σ′, aligned with t_support
    Eigen::VectorXd finals;                   // 0/1 indicator over states
    double alpha = 0.0;

    Eigen::Index states() const { return rho.size(); }
};

// Smooth a completed (total) DFA into a PA.  Throws if the machine is not
// total or alpha <= 0.
Pa build_pa(const Dfa& d, double alpha);

// ── Emission model ──────────────────────────────────────────────────────────

// p(w|x) under the factorized-normalizer emission model.
double emission_prob(const FrameProbs& frame, const SymbolSet& w, const EmissionParams& params);

// All p(w|x) for a list of symbols, sharing the per-action log terms.
std::vector<double> emission_probs(const FrameProbs& frame, std::span<const SymbolSet> symbols,
                                   const EmissionParams& params);

// sum_{w in support} p(w|x); the residual mass is one minus this.
double support_mass(const FrameProbs& frame, std::span<const SymbolSet> support,
                    const EmissionParams& params);

// ── Induced transitions and matching ────────────────────────────────────────

Eigen::MatrixXd induced_matrix(const Pa& pa, const FrameProbs& frame,
                               const EmissionParams& params);

// Full power-set enumeration of the marginalization; refuses M > 16.
Eigen::MatrixXd naive_induced_matrix(const Pa& pa, const FrameProbs& frame,
                                     const EmissionParams& params);

// Length-normalized matching probability of the video.  Throws on an empty
// video or frames inconsistent with the support indices.
double match_prob(const Pa& pa, const Video& v, const EmissionParams& params);

// Explicit enumeration over all (2^M)^n symbol sequences; refuses videos
// longer than 6 frames or M > 3.
double naive_match_prob(const Pa& pa, const Video& v, const EmissionParams& params);

}  // namespace actre
