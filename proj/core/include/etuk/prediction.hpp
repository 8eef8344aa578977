#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <vector>

#include "etuk/sparse_matrix.hpp"

namespace etuk {

// A k-hot prediction for one instance: exactly k distinct labels, kept sorted.
class PredictionRow {
public:
    PredictionRow() = default;
    // Sorts the labels; throws ValidationError on duplicates.
    explicit PredictionRow(std::vector<label_t> labels);

    std::size_t k() const noexcept { return labels_.size(); }
    std::span<const label_t> labels() const noexcept { return labels_; }
    bool contains(label_t label) const noexcept {
        return std::binary_search(labels_.begin(), labels_.end(), label);
    }

    friend bool operator==(const PredictionRow&, const PredictionRow&) = default;

private:
    std::vector<label_t> labels_;
};

using Predictions = std::vector<PredictionRow>;

// Every row has exactly k labels, all < n_cols, and there are n_rows rows.
void validate_predictions(const Predictions& preds, std::size_t n_rows, std::size_t n_cols, std::size_t k);

SparseRowMatrix predictions_to_matrix(const Predictions& preds, std::size_t n_cols);

// Rows must all hold exactly k entries; k == 0 takes k from the first row.
Predictions predictions_from_matrix(const SparseRowMatrix& matrix, std::size_t k = 0);

// Calls fn(label, value) for every predicted label, with the row's stored
// value or 0. Both sequences are sorted, so this is a linear merge.
template <class Fn>
void for_each_predicted(RowView row, std::span<const label_t> labels, Fn&& fn) {
    std::size_t e = 0;
    for (label_t j : labels) {
        while (e < row.size() && row.indices[e] < j) ++e;
        const double v = (e < row.size() && row.indices[e] == j) ? row.values[e] : 0.0;
        fn(j, v);
    }
}

}  // namespace etuk
