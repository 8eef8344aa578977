#include "etuk/oracle.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "etuk/errors.hpp"
#include "etuk/objective.hpp"
#include "etuk/running_stats.hpp"

namespace etuk {
namespace {

void check_budget(std::size_t m, std::size_t k) {
    if (k < 1 || k > m)
        throw ConfigError("k = " + std::to_string(k) + " is not in [1, " + std::to_string(m) + "]");
}

double binomial(std::size_t m, std::size_t k) {
    double r = 1.0;
    for (std::size_t i = 1; i <= k; ++i) r = r * static_cast<double>(m - k + i) / static_cast<double>(i);
    return std::round(r);
}

double candidate_count(std::size_t n, std::size_t m, std::size_t k) {
    return std::pow(binomial(m, k), static_cast<double>(n));
}

// Visits every prediction matrix in odometer order. visit(i, rows) is told
// the smallest row index that changed since the previous call.
template <class Visit>
void enumerate(std::size_t n, const std::vector<PredictionRow>& rows, Visit&& visit) {
    std::vector<std::size_t> idx(n, 0);
    visit(std::size_t{0}, idx);
    if (n == 0) return;
    while (true) {
        std::size_t i = n;
        while (i > 0) {
            --i;
            if (++idx[i] < rows.size()) break;
            idx[i] = 0;
            if (i == 0) return;
        }
        visit(i, idx);
    }
}

Predictions assemble(const std::vector<PredictionRow>& rows, const std::vector<std::size_t>& idx) {
    Predictions p;
    p.reserve(idx.size());
    for (std::size_t c : idx) p.push_back(rows[c]);
    return p;
}

}  // namespace

std::vector<PredictionRow> all_prediction_rows(std::size_t m, std::size_t k) {
    check_budget(m, k);
    std::vector<PredictionRow> out;
    std::vector<label_t> comb(k);
    for (std::size_t i = 0; i < k; ++i) comb[i] = static_cast<label_t>(i);
    while (true) {
        out.emplace_back(comb);
        std::size_t i = k;
        while (i > 0 && comb[i - 1] == static_cast<label_t>(m - k + i - 1)) --i;
        if (i == 0) break;
        ++comb[i - 1];
        for (std::size_t j = i; j < k; ++j) comb[j] = comb[j - 1] + 1;
    }
    return out;
}

OracleResult brute_force_semi_etu(const SparseRowMatrix& probs, const MetricSpec& metric, std::size_t k) {
    const std::size_t n = probs.rows();
    const std::size_t m = probs.cols();
    check_budget(m, k);
    check_metric_labels(metric, m);
    const double count = candidate_count(n, m, k);
    if (count > max_semi_etu_candidates)
        throw CapabilityError("semi-empirical oracle would enumerate " + std::to_string(count) +
                              " prediction matrices (limit 1e7)");

    const auto rows = all_prediction_rows(m, k);
    std::vector<std::size_t> current(n, 0);
    RunningStats stats = stats_from_scratch(probs, Predictions(n, rows[0]));
    OracleResult best;
    best.best_value = -std::numeric_limits<double>::infinity();
    std::vector<std::size_t> best_idx(n, 0);
    enumerate(n, rows, [&](std::size_t first, const std::vector<std::size_t>& idx) {
        for (std::size_t i = first; i < n; ++i) {
            if (idx[i] != current[i]) {
                stats.swap_row(probs.row(i), rows[current[i]], rows[idx[i]]);
                current[i] = idx[i];
            }
        }
        const double v = utility(metric, stats);
        ++best.candidates_evaluated;
        if (v > best.best_value) {
            best.best_value = v;
            best_idx = idx;
        }
    });
    best.best_preds = assemble(rows, best_idx);
    // Report the value of the winner free of incremental rounding.
    best.best_value = semi_etu_objective(probs, best.best_preds, metric);
    return best;
}

OracleResult brute_force_etu(const SparseRowMatrix& probs, const MetricSpec& metric, std::size_t k) {
    const std::size_t n = probs.rows();
    const std::size_t m = probs.cols();
    check_budget(m, k);
    check_metric_labels(metric, m);
    const double count = candidate_count(n, m, k);
    if (count > max_etu_candidates || n > max_etu_rows)
        throw CapabilityError("exact oracle needs C(m,k)^n <= 1e5 and n <= 12; got " + std::to_string(count) +
                              " matrices with n = " + std::to_string(n));

    const auto rows = all_prediction_rows(m, k);
    OracleResult best;
    best.best_value = -std::numeric_limits<double>::infinity();
    Predictions preds(n, rows[0]);
    enumerate(n, rows, [&](std::size_t first, const std::vector<std::size_t>& idx) {
        for (std::size_t i = first; i < n; ++i) preds[i] = rows[idx[i]];
        const double v = etu_objective_exact(probs, preds, metric);
        ++best.candidates_evaluated;
        if (v > best.best_value) {
            best.best_value = v;
            best.best_preds = preds;
        }
    });
    return best;
}

bool local_opt_check(const SparseRowMatrix& probs, const Predictions& preds, const MetricSpec& metric,
                     std::size_t k) {
    constexpr double tolerance = 1e-12;
    const std::size_t m = probs.cols();
    validate_predictions(preds, probs.rows(), m, k);
    check_metric_labels(metric, m);
    const auto rows = all_prediction_rows(m, k);
    const bool coverage = metric.family() == MetricFamily::coverage;
    Predictions work = preds;
    const double base = coverage ? expected_coverage(probs, work) : semi_etu_objective(probs, work, metric);
    for (std::size_t i = 0; i < work.size(); ++i) {
        for (const auto& r : rows) {
            if (r == preds[i]) continue;
            work[i] = r;
            const double v = coverage ? expected_coverage(probs, work) : semi_etu_objective(probs, work, metric);
            if (v > base + tolerance) return false;
        }
        work[i] = preds[i];
    }
    return true;
}

}  // namespace etuk
