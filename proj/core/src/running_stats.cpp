#include "etuk/running_stats.hpp"

#include <string>

#include "etuk/errors.hpp"

namespace etuk {

void RunningStats::remove_row(RowView eta, const PredictionRow& pred) {
    const double w = inv_n();
    for_each_predicted(eta, pred.labels(), [&](label_t j, double v) {
        t_hat[j] -= w * v;
        set_count(j, predicted[j] - 1);
    });
}

void RunningStats::add_row(RowView eta, const PredictionRow& pred) {
    const double w = inv_n();
    for_each_predicted(eta, pred.labels(), [&](label_t j, double v) {
        t_hat[j] += w * v;
        set_count(j, predicted[j] + 1);
    });
}

void RunningStats::swap_row(RowView eta, const PredictionRow& old_pred, const PredictionRow& new_pred) {
    const double w = inv_n();
    for_each_predicted(eta, old_pred.labels(), [&](label_t j, double v) {
        if (!new_pred.contains(j)) {
            t_hat[j] -= w * v;
            set_count(j, predicted[j] - 1);
        }
    });
    for_each_predicted(eta, new_pred.labels(), [&](label_t j, double v) {
        if (!old_pred.contains(j)) {
            t_hat[j] += w * v;
            set_count(j, predicted[j] + 1);
        }
    });
}

RunningStats stats_from_scratch(const SparseRowMatrix& probs, const Predictions& preds) {
    if (preds.size() != probs.rows())
        throw DimensionError("predictions have " + std::to_string(preds.size()) + " rows, probabilities " +
                             std::to_string(probs.rows()));
    const std::size_t m = probs.cols();
    RunningStats s;
    s.n = probs.rows();
    s.t_hat.assign(m, 0.0);
    s.p.assign(m, 0.0);
    s.q_hat.assign(m, 0.0);
    s.predicted.assign(m, 0);
    const double w = s.inv_n();
    for (std::size_t i = 0; i < probs.rows(); ++i) {
        const auto row = probs.row(i);
        for (std::size_t e = 0; e < row.size(); ++e) s.q_hat[row.indices[e]] += w * row.values[e];
        const auto labels = preds[i].labels();
        if (!labels.empty() && labels.back() >= m)
            throw DimensionError("predicted label " + std::to_string(labels.back()) + " out of range");
        for_each_predicted(row, labels, [&](label_t j, double v) {
            s.t_hat[j] += w * v;
            ++s.predicted[j];
        });
    }
    for (label_t j = 0; j < m; ++j) s.set_count(j, s.predicted[j]);
    return s;
}

RunningStats stats_swap_row(RunningStats stats, RowView eta, const PredictionRow& old_pred,
                            const PredictionRow& new_pred) {
    stats.swap_row(eta, old_pred, new_pred);
    return stats;
}

}  // namespace etuk
