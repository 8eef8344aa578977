#include "etuk/prediction.hpp"

#include <string>

#include "etuk/errors.hpp"

namespace etuk {

PredictionRow::PredictionRow(std::vector<label_t> labels) : labels_(std::move(labels)) {
    std::sort(labels_.begin(), labels_.end());
    if (std::adjacent_find(labels_.begin(), labels_.end()) != labels_.end())
        throw ValidationError("prediction row contains duplicate labels");
}

void validate_predictions(const Predictions& preds, std::size_t n_rows, std::size_t n_cols, std::size_t k) {
    if (preds.size() != n_rows)
        throw ValidationError("expected " + std::to_string(n_rows) + " prediction rows, got " +
                              std::to_string(preds.size()));
    for (std::size_t i = 0; i < preds.size(); ++i) {
        if (preds[i].k() != k)
            throw ValidationError("prediction row " + std::to_string(i) + " has " + std::to_string(preds[i].k()) +
                                  " labels, expected exactly " + std::to_string(k));
        const auto labels = preds[i].labels();
        if (!labels.empty() && labels.back() >= n_cols)
            throw ValidationError("prediction row " + std::to_string(i) + " has label " +
                                  std::to_string(labels.back()) + " >= " + std::to_string(n_cols));
    }
}

SparseRowMatrix predictions_to_matrix(const Predictions& preds, std::size_t n_cols) {
    SparseRowMatrix::Builder b(n_cols);
    std::vector<double> ones;
    for (const auto& p : preds) {
        ones.assign(p.k(), 1.0);
        b.add_row(p.labels(), ones);
    }
    return std::move(b).build();
}

Predictions predictions_from_matrix(const SparseRowMatrix& matrix, std::size_t k) {
    Predictions out;
    out.reserve(matrix.rows());
    if (k == 0 && matrix.rows() > 0) k = matrix.row(0).size();
    for (std::size_t i = 0; i < matrix.rows(); ++i) {
        const auto r = matrix.row(i);
        out.emplace_back(std::vector<label_t>(r.indices.begin(), r.indices.end()));
    }
    validate_predictions(out, matrix.rows(), matrix.cols(), k);
    return out;
}

}  // namespace etuk
