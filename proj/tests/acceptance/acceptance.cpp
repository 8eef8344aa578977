// Acceptance run: one PASS/FAIL line per criterion, non-zero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "etuk/astar.hpp"
#include "etuk/eval.hpp"
#include "etuk/inference.hpp"
#include "etuk/label_tree.hpp"
#include "etuk/lipschitz.hpp"
#include "etuk/matrix_io.hpp"
#include "etuk/objective.hpp"
#include "etuk/oracle.hpp"
#include "etuk/synthetic.hpp"
#include "etuk/weights.hpp"
#include "support.hpp"

using namespace etuk;
using etuk::testing::random_predictions;
using etuk::testing::random_probs;
using etuk::testing::RefMetric;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
    bool pass = true;
    std::string detail;
};

std::string fmt(const char* f, auto... args) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

bool non_decreasing(const std::vector<double>& v) {
    for (std::size_t i = 1; i < v.size(); ++i)
        if (v[i] < v[i - 1] - 1e-12) return false;
    return true;
}

InstanceWeights random_instance_weights(Rng& rng, std::size_t m) {
    InstanceWeights w;
    for (std::size_t j = 0; j < m; ++j) {
        w.w00.push_back(rng.uniform() - 0.5);
        w.w01.push_back(rng.uniform() - 0.5);
        w.w10.push_back(rng.uniform() - 0.5);
        w.w11.push_back(rng.uniform());
    }
    return w;
}

// ---------------------------------------------------------------------------

Outcome linear_optimality() {
    const auto t0 = Clock::now();
    Rng rng(101);
    int mismatches = 0, wrong_passes = 0;
    const std::size_t ks[] = {1, 3, 5};
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t k = ks[trial % 3];
        const std::size_t n = 5 + rng.below(46);
        const std::size_t m = k + 2 + rng.below(30 - k - 1);
        auto p = random_probs(rng, n, m, 0.5);
        InferenceConfig cfg;
        cfg.k = k;
        cfg.seed = static_cast<std::uint64_t>(trial);

        std::vector<double> w11(m), w01(m, 0.0), g11(m), g01(m);
        // Labels stored in a single row tie exactly, so q must be rounded the
        // same way as inside the solver for the tie-break to agree.
        const auto q = column_means(p);
        for (std::size_t j = 0; j < m; ++j) w11[j] = q[j] > 0 ? 1.0 / (static_cast<double>(m) * q[j]) : 0.0;
        auto recall = bca_infer(p, MetricSpec::macro_recall(), cfg);
        mismatches += recall.predictions != weighted_topk_infer(p, w11, w01, cfg).predictions;
        wrong_passes += recall.passes != 2;

        auto w = random_instance_weights(rng, m);
        for (std::size_t j = 0; j < m; ++j) {
            g11[j] = w.w11[j] - w.w10[j];
            g01[j] = w.w01[j] - w.w00[j];
        }
        auto weighted = bca_infer(p, MetricSpec::weighted(w), cfg);
        mismatches += weighted.predictions != weighted_topk_infer(p, g11, g01, cfg).predictions;
        wrong_passes += weighted.passes != 2;
    }
    const double secs = seconds_since(t0);
    return {mismatches == 0 && wrong_passes == 0 && secs < 10.0,
            fmt("400 runs, %d prediction mismatches, %d runs without exactly 2 passes, %.2fs", mismatches,
                wrong_passes, secs)};
}

Outcome monotone_ascent() {
    const auto t0 = Clock::now();
    Rng rng(202);
    int not_monotone = 0, not_local = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 2 + rng.below(19), m = 3 + rng.below(6), k = 1 + rng.below(std::min<std::size_t>(3, m - 1));
        auto p = random_probs(rng, n, m, 0.7);
        InferenceConfig cfg;
        cfg.k = k;
        cfg.epsilon = 0.0;
        cfg.seed = static_cast<std::uint64_t>(trial);
        for (const auto& metric : {MetricSpec::macro_fbeta(1.0), MetricSpec::macro_precision()}) {
            auto r = bca_infer(p, metric, cfg);
            not_monotone += !non_decreasing(r.objective_trace);
            not_local += !local_opt_check(p, r.predictions, metric, k);
        }
    }
    const double secs = seconds_since(t0);
    return {not_monotone == 0 && not_local == 0 && secs < 60.0,
            fmt("400 runs, %d non-monotone traces, %d not locally optimal, %.2fs", not_monotone, not_local, secs)};
}

Outcome semi_etu_exactness() {
    Rng rng(303);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 1 + rng.below(12), m = 2 + rng.below(6), k = 1 + rng.below(m - 1);
        auto p = random_probs(rng, n, m, 0.8);
        auto preds = random_predictions(rng, n, m, k);
        for (const auto& metric : {MetricSpec::macro_precision(), MetricSpec::weighted(random_instance_weights(rng, m))})
            worst = std::max(worst, std::abs(etu_objective_exact(p, preds, metric) - semi_etu_objective(p, preds, metric)));
    }
    return {worst < 1e-9, fmt("max |exact - semi| = %.3g over 200 evaluations", worst)};
}

Outcome approximation_bound_holds() {
    Rng rng(404);
    const std::size_t ns[] = {4, 8, 16};
    double max_gap[3] = {0, 0, 0};
    int violations = 0;
    for (int s = 0; s < 3; ++s) {
        for (int trial = 0; trial < 100; ++trial) {
            const std::size_t n = ns[s], m = 2 + rng.below(5), k = 1 + rng.below(m - 1);
            auto p = random_probs(rng, n, m);
            auto preds = random_predictions(rng, n, m, k);
            const auto metric = MetricSpec::macro_recall();
            const double gap = std::abs(etu_objective_exact(p, preds, metric) - semi_etu_objective(p, preds, metric));
            const double bound = approximation_bound(lipschitz_profile(metric, column_means(p)), n);
            violations += gap > bound;
            max_gap[s] = std::max(max_gap[s], gap);
        }
    }
    const bool shrinks = max_gap[0] > max_gap[1] && max_gap[1] > max_gap[2];
    return {violations == 0 && shrinks,
            fmt("%d bound violations; max gap n=4: %.4g, n=8: %.4g, n=16: %.4g", violations, max_gap[0], max_gap[1],
                max_gap[2])};
}

Outcome coverage_closed_form() {
    Rng rng(505);
    double worst_form = 0.0, worst_trace = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t k = 1 + rng.below(2);
        auto p = random_probs(rng, 3, 3, 1.0, 0.0, 0.99);
        auto preds = random_predictions(rng, 3, 3, k);
        const double ref = etuk::testing::reference_expectation({RefMetric::coverage}, p.to_dense(),
                                                                etuk::testing::dense_predictions(preds, 3));
        worst_form = std::max(worst_form, std::abs(expected_coverage(p, preds) - ref));

        InferenceConfig cfg;
        cfg.k = k;
        cfg.epsilon = 0.0;
        cfg.seed = static_cast<std::uint64_t>(trial);
        const auto full = bca_coverage_infer(p, cfg);
        Rng init_rng(cfg.seed);
        const auto init = initial_predictions(p, cfg, init_rng);
        worst_trace = std::max(worst_trace, std::abs(full.objective_trace[0] - expected_coverage(p, init)));
        for (std::size_t pass = 1; pass <= full.passes; ++pass) {
            cfg.max_passes = pass;
            const auto partial = bca_coverage_infer(p, cfg);
            worst_trace = std::max(worst_trace, std::abs(full.objective_trace[pass] - partial.objective_trace.back()));
            worst_trace = std::max(worst_trace,
                                   std::abs(partial.objective_trace.back() - expected_coverage(p, partial.predictions)));
        }
    }
    return {worst_form < 1e-9 && worst_trace < 1e-9,
            fmt("max closed-form error %.3g, max per-pass trace error %.3g", worst_form, worst_trace)};
}

Outcome oracle_proximity() {
    Rng rng(606);
    int close = 0;
    double worst = 1.0;
    for (int trial = 0; trial < 200; ++trial) {
        auto p = random_probs(rng, 4, 5);
        const auto metric = MetricSpec::macro_fbeta(1.0);
        InferenceConfig cfg;
        cfg.k = 2;
        cfg.seed = static_cast<std::uint64_t>(trial);
        const double got = semi_etu_objective(p, bca_infer(p, metric, cfg).predictions, metric);
        const double best = brute_force_semi_etu(p, metric, 2).best_value;
        const double ratio = best > 0 ? got / best : 1.0;
        close += ratio >= 0.95;
        worst = std::min(worst, ratio);
    }
    return {close >= 180, fmt("%d/200 instances within 0.95 of the optimum (worst ratio %.4f)", close, worst)};
}

std::string serialize(const InferenceReport& r, std::size_t m) {
    std::ostringstream out;
    write_sparse_matrix(out, predictions_to_matrix(r.predictions, m), MatrixKind::binary);
    for (double v : r.objective_trace) out << format_real(v) << '\n';
    return out.str();
}

Outcome sparse_equals_dense() {
    Rng rng(707);
    int differ = 0;
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 2 + rng.below(40), m = 3 + rng.below(15), k = 1 + rng.below(std::min<std::size_t>(4, m - 1));
        auto p = random_probs(rng, n, m);
        InferenceConfig cfg;
        cfg.k = k;
        cfg.seed = rng.next();
        const auto metric = trial % 2 ? MetricSpec::macro_fbeta(1.0) : MetricSpec::macro_precision();
        const auto dense = bca_infer(p, metric, cfg);
        cfg.k_prime = m + rng.below(3);
        const auto sparse = bca_infer(p, metric, cfg);
        differ += serialize(dense, m) != serialize(sparse, m);
    }
    return {differ == 0, fmt("%d/50 outputs differ", differ)};
}

struct RawTree {
    std::vector<std::int64_t> parents;
    std::vector<std::pair<node_t, label_t>> leaves;
};

RawTree random_tree(Rng& rng, std::size_t m) {
    RawTree t{{-1}, {}};
    std::vector<node_t> open{0};
    while (open.size() < m) {
        const auto pick = static_cast<std::size_t>(rng.below(open.size()));
        const node_t v = open[pick];
        open.erase(open.begin() + static_cast<std::ptrdiff_t>(pick));
        const std::size_t fan = std::min<std::size_t>(2 + rng.below(4), m - open.size());
        for (std::size_t c = 0; c < fan; ++c) {
            open.push_back(static_cast<node_t>(t.parents.size()));
            t.parents.push_back(v);
        }
    }
    std::vector<label_t> perm(m);
    std::iota(perm.begin(), perm.end(), label_t{0});
    rng.shuffle(std::span<label_t>(perm));
    for (std::size_t j = 0; j < m; ++j) t.leaves.emplace_back(open[j], perm[j]);
    return t;
}

Outcome astar_exactness() {
    const auto t0 = Clock::now();
    Rng rng(808);
    int wrong = 0, over = 0;
    for (int trial = 0; trial < 500; ++trial) {
        const std::size_t m = 2 + rng.below(63);
        const auto raw = random_tree(rng, m);
        const LabelTree tree(raw.parents, raw.leaves, m);
        std::vector<double> scores(tree.nodes());
        for (auto& s : scores) s = rng.uniform();
        scores[tree.root()] = 1.0;

        const std::size_t n = 1 + rng.below(100);
        std::vector<double> w(m), t(m), pp(m);
        for (std::size_t j = 0; j < m; ++j) {
            w[j] = rng.uniform();
            const auto cnt = rng.below(n + 1);
            pp[j] = static_cast<double>(cnt) / static_cast<double>(n);
            t[j] = cnt ? pp[j] * rng.uniform() : 0.0;
        }
        const auto gain = trial % 2 ? GainSpec::weighted(w) : GainSpec::macro_precision(t, pp, n);
        const std::size_t k = 1 + rng.below(std::min<std::size_t>(m, 8));

        // every leaf scored from the parent array
        std::vector<std::pair<double, label_t>> all;
        for (const auto& [leaf, label] : raw.leaves) {
            double prob = 1.0;
            for (std::int64_t v = leaf; v != -1; v = raw.parents[static_cast<std::size_t>(v)])
                prob *= scores[static_cast<std::size_t>(v)];
            all.emplace_back(gain.gain(label, prob), label);
        }
        std::sort(all.begin(), all.end(), [](const auto& a, const auto& b) {
            return a.first != b.first ? a.first > b.first : a.second < b.second;
        });
        std::vector<label_t> want;
        for (std::size_t i = 0; i < k; ++i) want.push_back(all[i].second);

        const auto r = astar_top_k(tree, scores, gain, k);
        wrong += !(r.labels == PredictionRow(want));
        over += r.expansions > tree.nodes();
    }
    const double secs = seconds_since(t0);
    return {wrong == 0 && over == 0 && secs < 30.0,
            fmt("500 trees, %d label sets differ, %d over the node count, %.2fs", wrong, over, secs)};
}

SyntheticData powerlaw_data() {
    SyntheticSpec spec;
    spec.n = 5000;
    spec.m = 500;
    spec.power = 1.5;
    spec.seed = 1;
    return generate_synthetic(spec);
}

Outcome strategy_diagonal(const SyntheticData& d) {
    const auto t0 = Clock::now();
    const std::size_t k = 5;
    InferenceConfig cfg;
    cfg.k = k;
    cfg.seed = 1;
    cfg.threads = 0;
    const auto top = evaluate(topk_infer(d.probs, cfg).predictions, d.labels, k);
    const auto f1 = evaluate(bca_infer(d.probs, MetricSpec::macro_fbeta(1.0), cfg).predictions, d.labels, k);
    const auto cov = evaluate(bca_coverage_infer(d.probs, cfg).predictions, d.labels, k);
    const auto gf1 = evaluate(greedy_infer(d.probs, MetricSpec::macro_fbeta(1.0), cfg).predictions, d.labels, k);
    const auto gcov = evaluate(greedy_coverage_infer(d.probs, cfg).predictions, d.labels, k);
    const auto mp = evaluate(bca_infer(d.probs, MetricSpec::macro_precision(), cfg).predictions, d.labels, k);
    const auto mr = evaluate(bca_infer(d.probs, MetricSpec::macro_recall(), cfg).predictions, d.labels, k);
    bool top_best = true;
    for (const auto* r : {&f1, &cov, &gf1, &gcov, &mp, &mr}) top_best &= top.instance_precision >= r->instance_precision;
    const double secs = seconds_since(t0);
    return {f1.macro_f1 > top.macro_f1 && cov.coverage > top.coverage && top_best && secs < 300.0,
            fmt("mF@5 %.4f vs top-k %.4f; mC@5 %.4f vs %.4f; iP@5 top-k %.4f, best other %.4f; %.1fs", f1.macro_f1,
                top.macro_f1, cov.coverage, top.coverage, top.instance_precision,
                std::max({f1.instance_precision, cov.instance_precision, gf1.instance_precision,
                          gcov.instance_precision, mp.instance_precision, mr.instance_precision}),
                secs)};
}

Outcome mixed_sweep(const SyntheticData& d) {
    const std::size_t k = 5;
    InferenceConfig cfg;
    cfg.k = k;
    cfg.seed = 1;
    cfg.threads = 0;
    double prev_f = -1.0, prev_p = 2.0, worst_f = 0.0, worst_p = 0.0;
    for (int step = 0; step <= 10; ++step) {
        const double alpha = step / 10.0;
        const auto metric = MetricSpec::mixed(alpha, MetricSpec::instance_precision(k), MetricSpec::macro_fbeta(1.0));
        const auto r = evaluate(bca_infer(d.probs, metric, cfg).predictions, d.labels, k);
        if (step > 0) {
            worst_f = std::max(worst_f, prev_f - r.macro_f1);
            worst_p = std::max(worst_p, r.instance_precision - prev_p);
        }
        prev_f = r.macro_f1;
        prev_p = r.instance_precision;
    }
    return {worst_f <= 0.002 && worst_p <= 0.002,
            fmt("largest mF@5 drop %.5f, largest iP@5 rise %.5f (tolerance 0.002)", worst_f, worst_p)};
}

Outcome propensity_value() {
    WeightScheme s;
    s.kind = WeightKind::propensity;
    s.a = 0.55;
    s.b = 1.5;
    s.n_train = 100;
    s.priors = {0.1};
    const double got = weight_compute(s, 1)[0];
    const double ref = etuk::testing::reference_propensity(0.55, 1.5, 100, 0.1, 1);
    return {std::abs(got - 2.5575) < 1e-3 && std::abs(got - ref) < 1e-12,
            fmt("weight %.6f, straight-line %.6f", got, ref)};
}

}  // namespace

int main() {
    int failed = 0;
    auto report = [&](int id, const char* name, const std::function<Outcome()>& fn) {
        Outcome o;
        try {
            o = fn();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failed += !o.pass;
        std::printf("%s  %2d %-28s %s\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str());
        std::fflush(stdout);
    };
    report(1, "linear-metric optimality", linear_optimality);
    report(2, "monotone ascent", monotone_ascent);
    report(3, "semi-empirical exactness", semi_etu_exactness);
    report(4, "approximation bound", approximation_bound_holds);
    report(5, "coverage closed form", coverage_closed_form);
    report(6, "oracle proximity", oracle_proximity);
    report(7, "sparse equals dense", sparse_equals_dense);
    report(8, "A* exactness", astar_exactness);
    SyntheticData data;
    try {
        data = powerlaw_data();
    } catch (...) {
    }
    report(9, "strategy diagonal", [&] { return strategy_diagonal(data); });
    report(10, "mixed-objective sweep", [&] { return mixed_sweep(data); });
    report(11, "propensity weight", propensity_value);
    std::printf("%d/11 criteria passed\n", 11 - failed);
    return failed == 0 ? 0 : 1;
}
