#pragma once

#include <cstddef>
#include <vector>

#include "etuk/prediction.hpp"
#include "etuk/sparse_matrix.hpp"

namespace etuk {

// Semi-empirical per-label quantities, all in 1/n units:
//   t_hat[j] = (1/n) sum_i eta_ij * yhat_ij   expected true positives
//   p[j]     = (1/n) sum_i yhat_ij            predicted positives
//   q_hat[j] = (1/n) sum_i eta_ij             expected positives
// p is derived from an integer count of predictions so that it is exactly 0
// when no instance predicts the label; t_hat is snapped to 0 in that case too.
struct RunningStats {
    std::size_t n = 0;
    std::vector<double> t_hat;
    std::vector<double> p;
    std::vector<double> q_hat;
    std::vector<std::size_t> predicted;

    std::size_t labels() const noexcept { return p.size(); }
    double inv_n() const noexcept { return n == 0 ? 0.0 : 1.0 / static_cast<double>(n); }

    void set_count(label_t j, std::size_t count) noexcept {
        predicted[j] = count;
        p[j] = n == 0 ? 0.0 : static_cast<double>(count) / static_cast<double>(n);
        if (count == 0) t_hat[j] = 0.0;
    }

    // Subtract / add one instance's contribution to t_hat and p (q_hat is untouched).
    void remove_row(RowView eta, const PredictionRow& pred);
    void add_row(RowView eta, const PredictionRow& pred);

    // Replace `old_pred` by `new_pred` for one instance. Only labels in the
    // symmetric difference of the two rows are modified.
    void swap_row(RowView eta, const PredictionRow& old_pred, const PredictionRow& new_pred);
};

// Throws DimensionError if preds and probs disagree in size or a label is out of range.
RunningStats stats_from_scratch(const SparseRowMatrix& probs, const Predictions& preds);

RunningStats stats_swap_row(RunningStats stats, RowView eta, const PredictionRow& old_pred,
                            const PredictionRow& new_pred);

}  // namespace etuk
