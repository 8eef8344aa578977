#pragma once

#include <vector>

#include "etuk/prediction.hpp"
#include "etuk/sparse_matrix.hpp"

namespace etuk {

// f[j] = prod_i (1 - eta_ij * yhat_ij): probability that label j is relevant
// for none of the instances it is predicted for. Expected coverage is
// 1 - mean(f).
struct FailureProbVector {
    std::vector<double> f;

    // Divide out / multiply in one instance's factors. Division results are
    // clamped to 1 so that rounding never pushes f above its range.
    void remove_row(RowView eta, const PredictionRow& pred);
    void add_row(RowView eta, const PredictionRow& pred);
    // Touches only labels in the symmetric difference of the two rows.
    void swap_row(RowView eta, const PredictionRow& old_pred, const PredictionRow& new_pred);

    double expected_coverage() const noexcept;
};

FailureProbVector failure_from_scratch(const SparseRowMatrix& probs, const Predictions& preds);

}  // namespace etuk
