#include <doctest.h>

#include <cmath>

#include "etuk/errors.hpp"
#include "etuk/failure_probs.hpp"
#include "etuk/inference.hpp"
#include "etuk/objective.hpp"
#include "etuk/oracle.hpp"
#include "etuk/running_stats.hpp"
#include "etuk/select_top_k.hpp"
#include "support.hpp"

using namespace etuk;
using etuk::testing::random_predictions;
using etuk::testing::random_probs;

namespace {

bool non_decreasing(const std::vector<double>& v, double tol = 1e-12) {
    for (std::size_t i = 1; i < v.size(); ++i)
        if (v[i] < v[i - 1] - tol) return false;
    return true;
}

std::vector<double> recall_weights(const SparseRowMatrix& probs) {
    auto q = column_means(probs);
    std::vector<double> w(q.size());
    for (std::size_t j = 0; j < q.size(); ++j)
        w[j] = q[j] > 0 ? 1.0 / (static_cast<double>(q.size()) * q[j]) : 0.0;
    return w;
}

}  // namespace

TEST_CASE("select_top_k ordering, ties and padding") {
    CHECK(select_top_k(std::vector<double>{0.1, 0.9, 0.5}, 2) == PredictionRow({1, 2}));
    CHECK(select_top_k(std::vector<double>{0.5, 0.5, 0.2}, 1) == PredictionRow({0}));
    std::vector<GainEntry> sparse{{7, 0.3}};
    CHECK(select_top_k(sparse, 2, 10) == PredictionRow({0, 7}));
    std::vector<GainEntry> padded{{0, 0.3}, {2, 0.1}};
    CHECK(select_top_k(padded, 3, 5) == PredictionRow({0, 1, 2}));
    CHECK_THROWS_AS(select_top_k(std::vector<double>{0.1}, 2), ConfigError);
    CHECK_THROWS_AS(select_top_k(sparse, 11, 10), ConfigError);
}

TEST_CASE("weighted top-k examples") {
    auto probs = SparseRowMatrix::from_dense({{0.9, 0.2}});
    InferenceConfig cfg;
    cfg.k = 1;
    auto r = weighted_topk_infer(probs, std::vector<double>{1, 10}, std::vector<double>{0, 0}, cfg);
    CHECK(r.predictions[0] == PredictionRow({1}));

    Rng rng(1);
    auto p = random_probs(rng, 20, 8, 0.6);
    cfg.k = 3;
    auto plain = topk_infer(p, cfg);
    for (std::size_t i = 0; i < p.rows(); ++i) {
        std::vector<double> row(8, 0.0);
        for (std::size_t e = 0; e < p.row(i).size(); ++e) row[p.row(i).indices[e]] = p.row(i).values[e];
        CHECK(plain.predictions[i] == select_top_k(row, 3));
    }
    CHECK_THROWS_AS(weighted_topk_infer(p, std::vector<double>(3, 1.0), std::vector<double>(8, 0.0), cfg),
                    DimensionError);
}

TEST_CASE("semi-empirical objective examples") {
    auto probs = SparseRowMatrix::from_dense({{0.9, 0.1}, {0.6, 0.4}});
    Predictions both0{PredictionRow({0}), PredictionRow({0})};
    CHECK(semi_etu_objective(probs, both0, MetricSpec::macro_recall()) == doctest::Approx(0.5));

    Rng rng(2);
    auto p = random_probs(rng, 10, 6, 0.7);
    auto preds = random_predictions(rng, 10, 6, 2);
    double direct = 0.0;
    for (std::size_t i = 0; i < 10; ++i)
        for (auto j : preds[i].labels()) direct += p.row(i).value_of(j);
    direct /= 10.0 * 2.0;
    CHECK(semi_etu_objective(p, preds, MetricSpec::instance_precision(2)) == doctest::Approx(direct).epsilon(1e-14));

    auto zeros = SparseRowMatrix(3, 4);
    auto zp = random_predictions(rng, 3, 4, 2);
    for (const auto& metric : {MetricSpec::macro_precision(), MetricSpec::macro_recall(),
                               MetricSpec::macro_fbeta(1.0), MetricSpec::coverage(), MetricSpec::instance_precision(2)})
        CHECK(semi_etu_objective(zeros, zp, metric) == 0.0);
}

TEST_CASE("exact expected utility examples") {
    auto probs = SparseRowMatrix::from_dense({{0.7, 0.2}});
    CHECK(etu_objective_exact(probs, {PredictionRow({0})}, MetricSpec::coverage()) == doctest::Approx(0.35));
    const etuk::testing::Dense dp{{0.7, 0.2}}, dy{{1.0, 0.0}};
    CHECK(etuk::testing::reference_expectation({etuk::testing::RefMetric::coverage}, dp, dy) == doctest::Approx(0.35));

    Rng rng(3);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t n = 1 + rng.below(8), m = 2 + rng.below(4), k = 1 + rng.below(m - 1);
        auto p = random_probs(rng, n, m, 0.8);
        auto preds = random_predictions(rng, n, m, k);
        CHECK(std::abs(etu_objective_exact(p, preds, MetricSpec::macro_precision()) -
                       semi_etu_objective(p, preds, MetricSpec::macro_precision())) < 1e-9);

        // deterministic probabilities reduce the expectation to the task utility
        std::vector<std::vector<double>> det(n, std::vector<double>(m, 0.0));
        for (auto& row : det)
            for (auto& v : row) v = rng.uniform() < 0.4 ? 1.0 : 0.0;
        auto dprobs = SparseRowMatrix::from_dense(det);
        for (const auto& metric : {MetricSpec::macro_fbeta(1.0), MetricSpec::macro_recall(), MetricSpec::coverage()})
            CHECK(etu_objective_exact(dprobs, preds, metric) == doctest::Approx(task_utility(metric, dprobs, preds)));
    }

    auto big = random_probs(rng, max_enumeration_rows + 1, 3);
    auto bp = random_predictions(rng, big.rows(), 3, 1);
    CHECK_THROWS_AS(etu_objective_exact(big, bp, MetricSpec::macro_fbeta(1.0)), CapabilityError);
    CHECK_NOTHROW(etu_objective_exact(big, bp, MetricSpec::coverage()));
}

TEST_CASE("exact expectation agrees with full label-matrix enumeration") {
    Rng rng(4);
    using etuk::testing::RefMetric;
    for (int trial = 0; trial < 25; ++trial) {
        const std::size_t n = 1 + rng.below(3), m = 2 + rng.below(2), k = 1 + rng.below(m - 1);
        auto p = random_probs(rng, n, m);
        auto preds = random_predictions(rng, n, m, k);
        const auto dp = p.to_dense();
        const auto dy = etuk::testing::dense_predictions(preds, m);
        RefMetric fb{RefMetric::fbeta};
        fb.beta = 1.0;
        RefMetric ip{RefMetric::instance_p};
        ip.k = k;
        CHECK(etu_objective_exact(p, preds, MetricSpec::macro_fbeta(1.0)) ==
              doctest::Approx(etuk::testing::reference_expectation(fb, dp, dy)).epsilon(1e-12));
        CHECK(etu_objective_exact(p, preds, MetricSpec::macro_recall()) ==
              doctest::Approx(etuk::testing::reference_expectation({RefMetric::recall}, dp, dy)).epsilon(1e-12));
        CHECK(etu_objective_exact(p, preds, MetricSpec::instance_precision(k)) ==
              doctest::Approx(etuk::testing::reference_expectation(ip, dp, dy)).epsilon(1e-12));
    }
}

TEST_CASE("macro-precision gain matches its closed form") {
    // t = 0.2, p = 0.4, eta = 0.8, n = 1
    const auto metric = MetricSpec::macro_precision();
    const double gain = psi_eval(metric, 0.2 + 0.8, 0.4 + 1.0, 0) - psi_eval(metric, 0.2, 0.4, 0);
    CHECK(gain == doctest::Approx(1.0 / 1.4 - 0.5));
    CHECK(gain == doctest::Approx(0.12 / 0.56));
}

TEST_CASE("BCA on instance precision converges in two passes to top-k") {
    Rng rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 5 + rng.below(30), m = 6 + rng.below(10), k = 1 + rng.below(3);
        auto p = random_probs(rng, n, m, 0.7);
        InferenceConfig cfg;
        cfg.k = k;
        cfg.seed = trial;
        auto bca = bca_infer(p, MetricSpec::instance_precision(k), cfg);
        auto top = topk_infer(p, cfg);
        CHECK(bca.predictions == top.predictions);
        CHECK(bca.passes == 2);
    }
}

TEST_CASE("BCA reaches a single-row local optimum") {
    Rng rng(6);
    for (int trial = 0; trial < 10; ++trial) {
        auto p = random_probs(rng, 5, 6);
        InferenceConfig cfg;
        cfg.k = 2;
        cfg.epsilon = 0.0;
        cfg.seed = trial;
        for (const auto& metric : {MetricSpec::macro_precision(), MetricSpec::macro_fbeta(1.0),
                                   MetricSpec::mixed(0.5, MetricSpec::instance_precision(2), MetricSpec::macro_fbeta(1.0))}) {
            auto r = bca_infer(p, metric, cfg);
            CHECK(non_decreasing(r.objective_trace));
            CHECK(local_opt_check(p, r.predictions, metric, 2));
            CHECK(r.objective_trace.back() == doctest::Approx(semi_etu_objective(p, r.predictions, metric)));
        }
    }
}

TEST_CASE("BCA rejects coverage and bad configurations") {
    auto p = SparseRowMatrix::from_dense({{0.5, 0.2, 0.1}});
    InferenceConfig cfg;
    CHECK_THROWS_AS(bca_infer(p, MetricSpec::coverage(), cfg), CapabilityError);
    cfg.k = 4;
    CHECK_THROWS_AS(bca_infer(p, MetricSpec::macro_precision(), cfg), ConfigError);
    cfg.k = 2;
    cfg.k_prime = 1;
    CHECK_THROWS_AS(bca_infer(p, MetricSpec::macro_precision(), cfg), ConfigError);
    cfg.k_prime = 0;
    cfg.epsilon = -1;
    CHECK_THROWS_AS(bca_infer(p, MetricSpec::macro_precision(), cfg), ConfigError);
    cfg.epsilon = 0;
    cfg.max_passes = 0;
    CHECK_THROWS_AS(bca_infer(p, MetricSpec::macro_precision(), cfg), ConfigError);
    cfg.max_passes = 5;
    CHECK_THROWS_AS(bca_infer(p, MetricSpec::weighted(InstanceWeights::true_positive_only({1.0})), cfg),
                    DimensionError);
}

TEST_CASE("BCA is deterministic and respects max_passes") {
    Rng rng(7);
    auto p = random_probs(rng, 40, 12, 0.5);
    InferenceConfig cfg;
    cfg.k = 3;
    cfg.seed = 99;
    auto a = bca_infer(p, MetricSpec::macro_fbeta(1.0), cfg);
    cfg.threads = 4;
    auto b = bca_infer(p, MetricSpec::macro_fbeta(1.0), cfg);
    CHECK(a.predictions == b.predictions);
    CHECK(a.objective_trace == b.objective_trace);
    CHECK(a.objective_trace.size() == a.passes + 1);
    cfg.max_passes = 1;
    auto c = bca_infer(p, MetricSpec::macro_fbeta(1.0), cfg);
    CHECK(c.passes == 1);
    CHECK(c.objective_trace[1] == a.objective_trace[1]);
}

TEST_CASE("linear metrics: BCA equals weighted top-k") {
    Rng rng(8);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 3 + rng.below(30), m = 4 + rng.below(15), k = 1 + rng.below(3);
        auto p = random_probs(rng, n, m, 0.6);
        InferenceConfig cfg;
        cfg.k = k;
        cfg.seed = trial;
        auto bca = bca_infer(p, MetricSpec::macro_recall(), cfg);
        auto wt = weighted_topk_infer(p, recall_weights(p), std::vector<double>(m, 0.0), cfg);
        CHECK(bca.predictions == wt.predictions);

        InstanceWeights w;
        for (std::size_t j = 0; j < m; ++j) {
            w.w00.push_back(rng.uniform());
            w.w01.push_back(rng.uniform() - 0.5);
            w.w10.push_back(rng.uniform() - 0.5);
            w.w11.push_back(rng.uniform());
        }
        std::vector<double> g11(m), g01(m);
        for (std::size_t j = 0; j < m; ++j) {
            g11[j] = w.w11[j] - w.w10[j];
            g01[j] = w.w01[j] - w.w00[j];
        }
        auto bw = bca_infer(p, MetricSpec::weighted(w), cfg);
        CHECK(bw.predictions == weighted_topk_infer(p, g11, g01, cfg).predictions);
    }
}

TEST_CASE("sparse BCA with a shortlist covering every label equals dense BCA") {
    Rng rng(9);
    for (int trial = 0; trial < 10; ++trial) {
        const std::size_t n = 5 + rng.below(20), m = 4 + rng.below(8);
        auto p = random_probs(rng, n, m);
        InferenceConfig cfg;
        cfg.k = 2;
        cfg.seed = 100 + trial;
        auto dense = bca_infer(p, MetricSpec::macro_fbeta(1.0), cfg);
        cfg.k_prime = m;
        auto sparse = bca_infer(p, MetricSpec::macro_fbeta(1.0), cfg);
        CHECK(dense.predictions == sparse.predictions);
        CHECK(dense.objective_trace == sparse.objective_trace);
    }
}

TEST_CASE("sparse BCA only predicts shortlisted or padded labels") {
    Rng rng(10);
    auto p = random_probs(rng, 30, 40, 0.5);
    InferenceConfig cfg;
    cfg.k = 2;
    cfg.k_prime = 5;
    cfg.init = InitStrategy::top_k;
    auto r = bca_infer(p, MetricSpec::macro_fbeta(1.0), cfg);
    auto t = truncate_rows(p, 5);
    for (std::size_t i = 0; i < p.rows(); ++i) {
        for (auto j : r.predictions[i].labels()) {
            const bool listed = t.row(i).value_of(j) > 0.0;
            const bool pad = t.row(i).size() < 2;
            CHECK((listed || pad));
        }
    }
    CHECK(non_decreasing(r.objective_trace));
}

TEST_CASE("greedy examples") {
    Rng rng(11);
    for (int trial = 0; trial < 15; ++trial) {
        const std::size_t n = 3 + rng.below(20), m = 4 + rng.below(10), k = 1 + rng.below(3);
        auto p = random_probs(rng, n, m, 0.6);
        InferenceConfig cfg;
        cfg.k = k;
        auto g = greedy_infer(p, MetricSpec::instance_precision(k), cfg);
        CHECK(g.predictions == topk_infer(p, cfg).predictions);
        auto gh = greedy_infer(p, MetricSpec::hamming(), cfg);
        std::vector<double> h11(m, 1.0 / m), h01(m, -1.0 / m);
        CHECK(gh.predictions == weighted_topk_infer(p, h11, h01, cfg).predictions);

        auto gf = greedy_infer(p, MetricSpec::macro_fbeta(1.0), cfg);
        cfg.epsilon = 0.0;
        auto polished = bca_infer(p, MetricSpec::macro_fbeta(1.0), cfg, gf.predictions);
        CHECK(polished.objective_trace.front() == doctest::Approx(gf.objective_trace.back()));
        CHECK(polished.objective_trace.back() >= gf.objective_trace.back() - 1e-12);
    }

    // the second row sees label 0 already covered by the first one
    auto p = SparseRowMatrix::from_dense({{0.9, 0.1}, {0.9, 0.8}});
    InferenceConfig cfg;
    cfg.k = 1;
    auto g = greedy_infer(p, MetricSpec::macro_precision(), cfg);
    CHECK(g.predictions[0] == PredictionRow({0}));
    CHECK(g.objective_trace.size() == 1);
    CHECK(g.objective_trace[0] == doctest::Approx(semi_etu_objective(p, g.predictions, MetricSpec::macro_precision())));
}

TEST_CASE("coverage BCA examples") {
    InferenceConfig cfg;
    cfg.k = 2;
    auto one = SparseRowMatrix::from_dense({{0.1, 0.7, 0.4, 0.05}});
    CHECK(bca_coverage_infer(one, cfg).predictions[0] == PredictionRow({1, 2}));
    CHECK(greedy_coverage_infer(one, cfg).predictions[0] == PredictionRow({1, 2}));

    cfg.k = 1;
    auto twins = SparseRowMatrix::from_dense({{0.6, 0.5}, {0.6, 0.5}});
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
        cfg.seed = seed;
        auto r = bca_coverage_infer(twins, cfg);
        CHECK(r.objective_trace.back() == doctest::Approx(0.55));
        CHECK(r.predictions[0] != r.predictions[1]);
    }
    auto g = greedy_coverage_infer(twins, cfg);
    CHECK(g.predictions == Predictions{PredictionRow({0}), PredictionRow({1})});
    CHECK(g.objective_trace.back() == doctest::Approx(0.55));

    cfg.k = 2;
    auto zero_row = SparseRowMatrix::from_dense({{0.0, 0.0, 0.0}, {0.3, 0.2, 0.1}});
    auto z = bca_coverage_infer(zero_row, cfg);
    CHECK(z.predictions[0].k() == 2);
    cfg.init = InitStrategy::top_k;
    auto zt = bca_coverage_infer(zero_row, cfg);
    CHECK(zt.predictions[0] == PredictionRow({0, 1}));
    CHECK(non_decreasing(z.objective_trace));

    auto certain = SparseRowMatrix::from_dense({{1.0, 0.0}});
    CHECK_THROWS_AS(bca_coverage_infer(certain, cfg), ValidationError);
}

TEST_CASE("coverage BCA trace tracks the closed form and stays locally optimal") {
    Rng rng(12);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 2 + rng.below(20), m = 3 + rng.below(8);
        auto p = random_probs(rng, n, m, 0.6, 0.0, 0.95);
        InferenceConfig cfg;
        cfg.k = 2;
        cfg.epsilon = 0.0;
        cfg.seed = trial;
        auto r = bca_coverage_infer(p, cfg);
        CHECK(non_decreasing(r.objective_trace));
        CHECK(std::abs(r.objective_trace.back() - expected_coverage(p, r.predictions)) < 1e-9);
        if (m <= 6) CHECK(local_opt_check(p, r.predictions, MetricSpec::coverage(), 2));

        cfg.k_prime = m;
        auto s = bca_coverage_infer(p, cfg);
        CHECK(s.predictions.size() == n);

        auto g = greedy_coverage_infer(p, cfg);
        CHECK(g.objective_trace.back() == doctest::Approx(expected_coverage(p, g.predictions)));
    }
}
