// ============================================================================
// eval.cpp: AUC, average precision, grid search, dataset scoring
// ============================================================================

#include "actre/eval.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "actre/detscore.hpp"
#include "actre/probscore.hpp"

namespace actre {

// ── metrics ─────────────────────────────────────────────────────────────────

namespace {

void require_both_classes(std::span<const ScoredItem> scored) {
    bool has_pos = false, has_neg = false;
    for (const ScoredItem& s : scored) {
        (s.positive ? has_pos : has_neg) = true;
    }
    if (!has_pos || !has_neg) {
        throw std::invalid_argument("metric undefined: need at least one positive and one negative");
    }
}

}  // namespace

double auc(std::span<const ScoredItem> scored) {
    require_both_classes(scored);
    double wins = 0.0;
    std::size_t pairs = 0;
    for (const ScoredItem& p : scored) {
        if (!p.positive) continue;
        for (const ScoredItem& n : scored) {
            if (n.positive) continue;
            ++pairs;
            if (p.score > n.score) {
                wins += 1.0;
            } else if (p.score == n.score) {
                wins += 0.5;
            }
        }
    }
    return wins / static_cast<double>(pairs);
}

double average_precision(std::span<const ScoredItem> scored) {
    require_both_classes(scored);
    std::vector<std::size_t> order(scored.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return scored[a].score > scored[b].score;
    });
    double sum = 0.0;
    std::size_t positives_seen = 0;
    for (std::size_t rank = 0; rank < order.size(); ++rank) {
        if (scored[order[rank]].positive) {
            ++positives_seen;
            sum += static_cast<double>(positives_seen) / static_cast<double>(rank + 1);
        }
    }
    return sum / static_cast<double>(positives_seen);
}

double mean_auc(std::span<const QueryResult> results) {
    if (results.empty()) throw std::invalid_argument("no queries");
    double sum = 0.0;
    for (const QueryResult& q : results) sum += auc(q.scored);
    return sum / static_cast<double>(results.size());
}

double map_over_queries(std::span<const QueryResult> results) {
    if (results.empty()) throw std::invalid_argument("no queries");
    double sum = 0.0;
    for (const QueryResult& q : results) sum += average_precision(q.scored);
    return sum / static_cast<double>(results.size());
}

// ── grid search ─────────────────────────────────────────────────────────────

void HyperGrid::validate() const {
    if (taus.empty() || alphas.empty() || gammas.empty()) {
        throw std::invalid_argument("hyperparameter grid lists must be non-empty");
    }
    for (double t : taus) {
        if (!(t >= 0.0 && t <= 1.0)) throw std::invalid_argument("tau must be in [0,1]");
    }
    for (double a : alphas) {
        if (!(a > 0.0)) throw std::invalid_argument("alpha must be > 0");
    }
    for (double g : gammas) {
        if (!(g > 0.0)) throw std::invalid_argument("gamma must be > 0");
    }
}

HyperPoint grid_search(const HyperGrid& grid, ScorerKind kind,
                       const std::function<double(const HyperPoint&)>& map_of) {
    grid.validate();

    std::vector<HyperPoint> candidates;
    if (kind == ScorerKind::Deterministic) {
        for (double t : grid.taus) candidates.push_back({t, grid.alphas.front(), grid.gammas.front()});
        std::sort(candidates.begin(), candidates.end(),
                  [](const HyperPoint& a, const HyperPoint& b) { return a.tau < b.tau; });
    } else {
        for (double a : grid.alphas) {
            for (double g : grid.gammas) candidates.push_back({grid.taus.front(), a, g});
        }
        // Tie preference: smaller alpha, then gamma nearest 1, then smaller gamma.
        std::sort(candidates.begin(), candidates.end(), [](const HyperPoint& a, const HyperPoint& b) {
            if (a.alpha != b.alpha) return a.alpha < b.alpha;
            const double da = std::abs(a.gamma - 1.0), db = std::abs(b.gamma - 1.0);
            if (da != db) return da < db;
            return a.gamma < b.gamma;
        });
    }

    HyperPoint best = candidates.front();
    double best_map = map_of(best);
    for (std::size_t i = 1; i < candidates.size(); ++i) {
        const double score = map_of(candidates[i]);
        if (score > best_map) {
            best_map = score;
            best = candidates[i];
        }
    }
    return best;
}

// ── dataset scoring ─────────────────────────────────────────────────────────

std::vector<QueryResult> score_dataset(const Dataset& ds, std::span<const Video> videos,
                                       ScorerKind kind, const HyperPoint& hp,
                                       Protocol protocol) {
    if (videos.size() != ds.clips.size()) {
        throw std::invalid_argument("videos are not aligned with the dataset clips");
    }
    if (protocol == Protocol::Auto) {
        const bool has_negatives = std::any_of(ds.clips.begin(), ds.clips.end(),
                                               [](const LabeledClip& c) { return !c.positive; });
        protocol = has_negatives ? Protocol::Paired : Protocol::Cross;
    }

    // Thresholded symbols are machine-independent; share them across queries.
    std::vector<std::vector<SymbolSet>> thresholded;
    if (kind == ScorerKind::Deterministic) {
        thresholded.reserve(videos.size());
        for (const Video& v : videos) {
            std::vector<SymbolSet> symbols;
            symbols.reserve(v.frames.size());
            for (const FrameProbs& f : v.frames) symbols.push_back(threshold_frame(f, hp.tau));
            thresholded.push_back(std::move(symbols));
        }
    }

    const EmissionParams emission{hp.gamma, 1e-6};
    std::vector<QueryResult> results;
    results.reserve(ds.expressions.size());
    for (const Expression& expr : ds.expressions) {
        QueryResult qr;
        qr.expr_id = expr.id;

        Pa pa;
        if (kind == ScorerKind::Probabilistic) {
            pa = build_pa(expr.machine.completed, hp.alpha);
        }
        for (std::size_t i = 0; i < videos.size(); ++i) {
            const LabeledClip& clip = ds.clips[i];
            if (protocol == Protocol::Paired && clip.expr_id != expr.id) continue;
            ScoredItem item;
            item.id = videos[i].id;
            item.positive = clip.positive && clip.expr_id == expr.id;
            item.score = kind == ScorerKind::Deterministic
                             ? det_score(expr.machine.partial, expr.machine.dist, thresholded[i])
                             : match_prob(pa, videos[i], emission);
            qr.scored.push_back(std::move(item));
        }
        results.push_back(std::move(qr));
    }
    return results;
}

}  // namespace actre
