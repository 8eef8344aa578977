#include "etuk/objective.hpp"

#include <string>
#include <vector>

#include "etuk/errors.hpp"
#include "etuk/failure_probs.hpp"
#include "etuk/running_stats.hpp"

namespace etuk {

double semi_etu_objective(const SparseRowMatrix& probs, const Predictions& preds, const MetricSpec& metric) {
    return utility(metric, stats_from_scratch(probs, preds));
}

double expected_coverage(const SparseRowMatrix& probs, const Predictions& preds) {
    return failure_from_scratch(probs, preds).expected_coverage();
}

namespace {

struct ColumnEnumerator {
    const MetricSpec& metric;
    label_t label;
    std::size_t m;
    const std::vector<double>& eta;
    const std::vector<char>& predicted;
    std::size_t predicted_total;
    double inv_n;
    double sum = 0.0;

    void run(std::size_t i, double prob, std::size_t tp, std::size_t pos) {
        if (prob == 0.0) return;
        if (i == eta.size()) {
            sum += prob * label_utility(metric, label, m, static_cast<double>(tp) * inv_n,
                                        static_cast<double>(predicted_total) * inv_n,
                                        static_cast<double>(pos) * inv_n);
            return;
        }
        run(i + 1, prob * (1.0 - eta[i]), tp, pos);
        run(i + 1, prob * eta[i], tp + (predicted[i] ? 1 : 0), pos + 1);
    }
};

}  // namespace

double etu_objective_exact(const SparseRowMatrix& probs, const Predictions& preds, const MetricSpec& metric) {
    if (preds.size() != probs.rows())
        throw DimensionError("predictions have " + std::to_string(preds.size()) + " rows, probabilities " +
                             std::to_string(probs.rows()));
    const std::size_t n = probs.rows();
    const std::size_t m = probs.cols();
    check_metric_labels(metric, m);

    if (metric.family() == MetricFamily::coverage) return expected_coverage(probs, preds);
    if (metric.family() == MetricFamily::mixed)
        return (1.0 - metric.alpha()) * etu_objective_exact(probs, preds, metric.first()) +
               metric.alpha() * etu_objective_exact(probs, preds, metric.second());
    if (n > max_enumeration_rows)
        throw CapabilityError("exact expectation enumerates 2^n outcomes; n = " + std::to_string(n) +
                              " exceeds the limit of " + std::to_string(max_enumeration_rows));
    if (n == 0) return utility(metric, stats_from_scratch(probs, preds));

    const auto dense = probs.to_dense();
    std::vector<double> eta(n);
    std::vector<char> predicted(n);
    double total = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
        std::size_t predicted_total = 0;
        for (std::size_t i = 0; i < n; ++i) {
            eta[i] = dense[i][j];
            predicted[i] = preds[i].contains(static_cast<label_t>(j)) ? 1 : 0;
            predicted_total += static_cast<std::size_t>(predicted[i]);
        }
        ColumnEnumerator e{metric, static_cast<label_t>(j), m, eta, predicted, predicted_total,
                           1.0 / static_cast<double>(n)};
        e.run(0, 1.0, 0, 0);
        total += e.sum;
    }
    return total;
}

}  // namespace etuk
