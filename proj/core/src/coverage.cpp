#include <algorithm>
#include <chrono>
#include <limits>
#include <numeric>
#include <string>

#include "etuk/errors.hpp"
#include "etuk/failure_probs.hpp"
#include "etuk/inference.hpp"
#include "etuk/select_top_k.hpp"

namespace etuk {
namespace {

using Clock = std::chrono::steady_clock;

void check_below_one(const SparseRowMatrix& probs) {
    for (std::size_t i = 0; i < probs.rows(); ++i) {
        const auto row = probs.row(i);
        for (std::size_t e = 0; e < row.size(); ++e)
            if (!(row.values[e] < 1.0))
                throw ValidationError("coverage inference needs probabilities below 1 (row " + std::to_string(i) +
                                      ", label " + std::to_string(row.indices[e]) + ")");
    }
}

// Gain of predicting j: eta * f_j, where f_j excludes this row's own factor.
PredictionRow best_row(RowView row, const PredictionRow& cur, const FailureProbVector& fv, std::size_t k,
                       std::size_t m, bool sparse, std::vector<double>& dense_gain, std::vector<GainEntry>& cand) {
    const auto& f = fv.f;
    if (!sparse) {
        std::fill(dense_gain.begin(), dense_gain.end(), 0.0);
        for (std::size_t e = 0; e < row.size(); ++e) {
            const label_t j = row.indices[e];
            const double eta = row.values[e];
            const double fj = cur.contains(j) ? std::min(1.0, f[j] / (1.0 - eta)) : f[j];
            dense_gain[j] = eta * fj;
        }
        return select_top_k(std::span<const double>(dense_gain), k);
    }
    cand.clear();
    const auto labels = cur.labels();
    std::size_t e = 0, c = 0;
    while (e < row.size() || c < labels.size()) {
        if (c == labels.size() || (e < row.size() && row.indices[e] < labels[c])) {
            const label_t j = row.indices[e];
            cand.push_back({j, row.values[e] * f[j]});
            ++e;
        } else if (e == row.size() || labels[c] < row.indices[e]) {
            cand.push_back({labels[c], 0.0});
            ++c;
        } else {
            const label_t j = row.indices[e];
            const double eta = row.values[e];
            cand.push_back({j, eta * std::min(1.0, f[j] / (1.0 - eta))});
            ++e;
            ++c;
        }
    }
    return select_top_k(std::span<const GainEntry>(cand), k, m);
}

}  // namespace

InferenceReport bca_coverage_infer(const SparseRowMatrix& probs_in, const InferenceConfig& cfg) {
    const auto start = Clock::now();
    validate_config(cfg, probs_in.cols());
    check_below_one(probs_in);
    const bool sparse = cfg.k_prime > 0;
    const SparseRowMatrix truncated = sparse ? truncate_rows(probs_in, cfg.k_prime) : SparseRowMatrix();
    const SparseRowMatrix& probs = sparse ? truncated : probs_in;
    const std::size_t n = probs.rows();
    const std::size_t m = probs.cols();

    Rng rng(cfg.seed);
    Predictions preds = initial_predictions(probs, cfg, rng);
    FailureProbVector fv = failure_from_scratch(probs, preds);

    InferenceReport report;
    double u_new = fv.expected_coverage();
    double u_old = -std::numeric_limits<double>::infinity();
    report.objective_trace.push_back(u_new);

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::vector<double> dense_gain(sparse ? 0 : m);
    std::vector<GainEntry> cand;
    while (u_new > u_old + cfg.epsilon && report.passes < cfg.max_passes) {
        rng.shuffle(std::span<std::size_t>(order));
        for (std::size_t s : order) {
            const RowView row = probs.row(s);
            PredictionRow next = best_row(row, preds[s], fv, cfg.k, m, sparse, dense_gain, cand);
            if (next != preds[s]) {
                fv.swap_row(row, preds[s], next);
                preds[s] = std::move(next);
            }
        }
        ++report.passes;
        u_old = u_new;
        u_new = fv.expected_coverage();
        report.objective_trace.push_back(u_new);
    }
    report.predictions = std::move(preds);
    report.wall_time = std::chrono::duration<double>(Clock::now() - start).count();
    return report;
}

InferenceReport greedy_coverage_infer(const SparseRowMatrix& probs_in, const InferenceConfig& cfg) {
    const auto start = Clock::now();
    validate_config(cfg, probs_in.cols());
    check_below_one(probs_in);
    const bool sparse = cfg.k_prime > 0;
    const SparseRowMatrix truncated = sparse ? truncate_rows(probs_in, cfg.k_prime) : SparseRowMatrix();
    const SparseRowMatrix& probs = sparse ? truncated : probs_in;
    const std::size_t n = probs.rows();
    const std::size_t m = probs.cols();

    FailureProbVector fv;
    fv.f.assign(m, 1.0);
    InferenceReport report;
    report.predictions.resize(n);
    std::vector<double> gains(sparse ? 0 : m, 0.0);
    std::vector<GainEntry> cand;
    for (std::size_t i = 0; i < n; ++i) {
        const RowView row = probs.row(i);
        PredictionRow pred;
        if (sparse) {
            cand.resize(row.size());
            for (std::size_t e = 0; e < row.size(); ++e)
                cand[e] = {row.indices[e], row.values[e] * fv.f[row.indices[e]]};
            pred = select_top_k(std::span<const GainEntry>(cand), cfg.k, m);
        } else {
            for (std::size_t e = 0; e < row.size(); ++e) gains[row.indices[e]] = row.values[e] * fv.f[row.indices[e]];
            pred = select_top_k(std::span<const double>(gains), cfg.k);
            for (std::size_t e = 0; e < row.size(); ++e) gains[row.indices[e]] = 0.0;
        }
        fv.add_row(row, pred);
        report.predictions[i] = std::move(pred);
    }
    report.objective_trace.push_back(fv.expected_coverage());
    report.passes = 1;
    report.wall_time = std::chrono::duration<double>(Clock::now() - start).count();
    return report;
}

}  // namespace etuk
