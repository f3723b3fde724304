#include <doctest.h>

#include <cmath>

#include "actre/eval.hpp"
#include "support/oracles.hpp"

using namespace actre;

namespace {

std::vector<ScoredItem> scored(std::initializer_list<std::pair<double, bool>> items) {
    std::vector<ScoredItem> out;
    int i = 0;
    for (const auto& [score, positive] : items) {
        out.push_back({"v" + std::to_string(i++), score, positive});
    }
    return out;
}

}  // namespace

TEST_SUITE("eval") {

TEST_CASE("auc counts pairwise wins with half-weight ties") {
    CHECK(auc(scored({{0.9, true}, {0.4, false}, {0.6, true}, {0.2, false}})) == 1.0);
    CHECK(auc(scored({{0.5, true}, {0.5, false}, {0.5, true}, {0.5, false}})) == 0.5);

    // Hand pairwise counts: {0.9,0.6} vs {0.95,0.2} wins exactly 2 of 4
    // pairs; {0.9,0.6} vs {0.7,0.2} wins 3 of 4.
    CHECK(auc(scored({{0.9, true}, {0.95, false}, {0.6, true}, {0.2, false}})) == 0.5);
    CHECK(auc(scored({{0.9, true}, {0.7, false}, {0.6, true}, {0.2, false}})) == 0.75);
}

TEST_CASE("metrics are undefined without both classes") {
    CHECK_THROWS_AS(auc(scored({{0.9, true}, {0.8, true}})), std::invalid_argument);
    CHECK_THROWS_AS(auc(scored({{0.9, false}})), std::invalid_argument);
    CHECK_THROWS_AS(average_precision(scored({{0.9, true}})), std::invalid_argument);
}

TEST_CASE("average precision follows descending rank precision") {
    CHECK(average_precision(scored({{0.9, true}, {0.5, false}})) == 1.0);
    CHECK(average_precision(scored({{0.9, false}, {0.5, true}})) == 0.5);
    // Two positives at ranks 1 and 3: (1/1 + 2/3) / 2.
    CHECK(average_precision(scored({{0.9, true}, {0.8, false}, {0.7, true}})) ==
          doctest::Approx((1.0 + 2.0 / 3.0) / 2.0));
}

TEST_CASE("score ties keep stable input order in the AP ranking") {
    // neg(1.0), then pos and neg tied at 0.5: stable order keeps the positive
    // at rank 2, so AP = 1/2 (an unstable swap would give 1/3).
    CHECK(average_precision(scored({{1.0, false}, {0.5, true}, {0.5, false}})) == 0.5);
}

TEST_CASE("auc is invariant under strictly monotone transforms") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> score(0.0, 1.0);
    std::bernoulli_distribution label(0.3);
    for (int iter = 0; iter < 20; ++iter) {
        std::vector<ScoredItem> items;
        for (int i = 0; i < 30; ++i) items.push_back({"v", score(rng), label(rng)});
        items.push_back({"p", score(rng), true});
        items.push_back({"n", score(rng), false});

        const double base = auc(items);
        std::vector<ScoredItem> transformed = items;
        for (ScoredItem& s : transformed) s.score = std::exp(3.0 * s.score) + 7.0;
        CHECK(auc(transformed) == doctest::Approx(base).epsilon(1e-12));

        // Reversing all scores flips the statistic.
        std::vector<ScoredItem> reversed = items;
        for (ScoredItem& s : reversed) s.score = -s.score;
        CHECK(auc(reversed) == doctest::Approx(1.0 - base).epsilon(1e-12));
    }
}

TEST_CASE("ap is 1 exactly when every positive outranks every negative") {
    CHECK(average_precision(scored({{0.9, true}, {0.8, true}, {0.5, false}})) == 1.0);
    CHECK(average_precision(scored({{0.9, true}, {0.5, false}, {0.4, true}})) < 1.0);
}

TEST_CASE("map averages per-query ap and ignores query order") {
    std::vector<QueryResult> queries(2);
    queries[0].expr_id = 0;
    queries[0].scored = scored({{0.9, true}, {0.5, false}});   // AP 1
    queries[1].expr_id = 1;
    queries[1].scored = scored({{0.9, false}, {0.5, true}});   // AP 0.5
    CHECK(map_over_queries(queries) == doctest::Approx(0.75));
    std::swap(queries[0], queries[1]);
    CHECK(map_over_queries(queries) == doctest::Approx(0.75));
}

TEST_CASE("random scores on a two-percent-positive set sit at chance") {
    std::mt19937_64 rng(1031);
    std::uniform_real_distribution<double> score(0.0, 1.0);
    std::vector<QueryResult> queries;
    for (int q = 0; q < 100; ++q) {
        QueryResult qr;
        qr.expr_id = static_cast<std::uint32_t>(q);
        for (int i = 0; i < 200; ++i) {
            qr.scored.push_back({"v", score(rng), i < 4});  // 4 of 200 = 2%
        }
        queries.push_back(std::move(qr));
    }
    const double map = map_over_queries(queries);
    const double mean = mean_auc(queries);
    CHECK(map == doctest::Approx(0.02).epsilon(0.5));  // 0.02 +/- 0.01
    CHECK(mean == doctest::Approx(0.50).epsilon(0.06));
}

TEST_CASE("grid search returns the singleton and prefers the documented ties") {
    HyperGrid singleton;
    singleton.taus = {0.4};
    singleton.alphas = {0.2};
    singleton.gammas = {2.0};
    const HyperPoint det = grid_search(singleton, ScorerKind::Deterministic,
                                       [](const HyperPoint&) { return 1.0; });
    CHECK(det.tau == 0.4);
    const HyperPoint prob = grid_search(singleton, ScorerKind::Probabilistic,
                                        [](const HyperPoint&) { return 1.0; });
    CHECK(prob.alpha == 0.2);
    CHECK(prob.gamma == 2.0);

    // All-ties grid: smaller alpha wins, then gamma nearest one, then
    // smaller tau.
    HyperGrid grid;
    grid.taus = {0.7, 0.3};
    grid.alphas = {0.1, 0.001};
    grid.gammas = {2.0, 1.0, 0.5};
    const HyperPoint flat_prob = grid_search(grid, ScorerKind::Probabilistic,
                                             [](const HyperPoint&) { return 0.5; });
    CHECK(flat_prob.alpha == 0.001);
    CHECK(flat_prob.gamma == 1.0);
    const HyperPoint flat_det = grid_search(grid, ScorerKind::Deterministic,
                                            [](const HyperPoint&) { return 0.5; });
    CHECK(flat_det.tau == 0.3);
}

TEST_CASE("grid search on a noise-free dataset finds a perfect tau") {
    GenConfig config;
    config.params = ExprParams{3, 3, 2, 2, 12, 10};
    config.expression_count = 5;
    config.positives_per_expr = 3;
    config.negatives_per_expr = 3;
    config.noise = 0.0;
    config.seed = 77;
    Dataset ds = generate_dataset(config);

    HyperGrid grid;
    grid.taus = {0.2, 0.5, 0.8};
    const HyperPoint best =
        grid_search(grid, ScorerKind::Deterministic, [&](const HyperPoint& hp) {
            return map_over_queries(
                score_dataset(ds, ds.videos, ScorerKind::Deterministic, hp, Protocol::Paired));
        });
    const auto results =
        score_dataset(ds, ds.videos, ScorerKind::Deterministic, best, Protocol::Paired);
    CHECK(mean_auc(results) == 1.0);

    // Determinism of the whole selection.
    const HyperPoint again =
        grid_search(grid, ScorerKind::Deterministic, [&](const HyperPoint& hp) {
            return map_over_queries(
                score_dataset(ds, ds.videos, ScorerKind::Deterministic, hp, Protocol::Paired));
        });
    CHECK(again.tau == best.tau);
}

TEST_CASE("protocols carve queries out of the dataset as documented") {
    GenConfig config;
    config.params = ExprParams{2, 2, 1, 1, 6, 6};
    config.expression_count = 3;
    config.positives_per_expr = 2;
    config.negatives_per_expr = 2;
    config.noise = 0.0;
    config.seed = 5;
    Dataset ds = generate_dataset(config);

    const HyperPoint hp{0.5, 1e-3, 1.0};
    const auto paired =
        score_dataset(ds, ds.videos, ScorerKind::Deterministic, hp, Protocol::Paired);
    REQUIRE(paired.size() == 3);
    for (const QueryResult& q : paired) CHECK(q.scored.size() == 4);  // own clips only

    const auto cross =
        score_dataset(ds, ds.videos, ScorerKind::Deterministic, hp, Protocol::Cross);
    for (const QueryResult& q : cross) CHECK(q.scored.size() == ds.clips.size());

    // Auto resolves to Paired here because explicit negatives exist.
    const auto automatic =
        score_dataset(ds, ds.videos, ScorerKind::Deterministic, hp, Protocol::Auto);
    CHECK(automatic.front().scored.size() == paired.front().scored.size());
}

}  // TEST_SUITE
