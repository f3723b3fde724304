// ============================================================================
// actre/eval.hpp: retrieval metrics and hyperparameter selection
// ============================================================================

#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "actre/synth.hpp"
#include "actre/video.hpp"

namespace actre {

// ── Query results ───────────────────────────────────────────────────────────

struct ScoredItem {
    std::string id;
    double score = 0.0;
    bool positive = false;
};

struct QueryResult {
    std::uint32_t expr_id = 0;
    std::vector<ScoredItem> scored;
};

// ── Metrics ─────────────────────────────────────────────────────────────────

// Mann-Whitney statistic: fraction of (positive, negative) pairs where the
// positive outscores the negative; ties count 0.5.  Throws when either class
// is missing.
double auc(std::span<const ScoredItem> scored);

// Mean precision at the rank of each positive, ranking by descending score
// with ties broken by stable input order.
double average_precision(std::span<const ScoredItem> scored);

double mean_auc(std::span<const QueryResult> results);
double map_over_queries(std::span<const QueryResult> results);

// ── Hyperparameter selection ────────────────────────────────────────────────

enum class ScorerKind { Deterministic, Probabilistic };

struct HyperGrid {
    std::vector<double> taus{0.5};
    std::vector<double> alphas{1e-3};
    std::vector<double> gammas{1.0};

    void validate() const;  // throws std::invalid_argument
};

struct HyperPoint {
    double tau = 0.5;
    double alpha = 1e-3;
    double gamma = 1.0;
};

// Argmax of `map_of` over the grid (only the dimensions relevant to the
// scorer kind).  MAP ties resolve toward smaller alpha, then gamma nearest
// one, then smaller tau.
HyperPoint grid_search(const HyperGrid& grid, ScorerKind kind,
                       const std::function<double(const HyperPoint&)>& map_of);

// ── Dataset scoring ─────────────────────────────────────────────────────────

// How query labels are assigned:
//   Paired: a query ranks only its own clips (positives vs explicit
//            negatives);
//   Cross : a query ranks every clip; other expressions' clips count as
//            negatives (the evaluation style when no explicit negatives are
//            generated);
//   Auto  : Paired when the dataset has explicit negatives, else Cross.
enum class Protocol { Auto, Paired, Cross };

// Score every (expression, video) pair of a dataset.  `videos` must align
// with `ds.clips` (same order); pass `ds.videos` for the dataset's own
// emissions or a re-emitted vector for repetitions.
std::vector<QueryResult> score_dataset(const Dataset& ds, std::span<const Video> videos,
                                       ScorerKind kind, const HyperPoint& hp,
                                       Protocol protocol);

}  // namespace actre
