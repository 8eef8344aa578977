#include "etuk/failure_probs.hpp"

#include <algorithm>
#include <string>

#include "etuk/errors.hpp"

namespace etuk {
namespace {

void divide_out(double& f, double eta) { f = std::min(1.0, f / (1.0 - eta)); }

}  // namespace

void FailureProbVector::remove_row(RowView eta, const PredictionRow& pred) {
    for_each_predicted(eta, pred.labels(), [&](label_t j, double v) { divide_out(f[j], v); });
}

void FailureProbVector::add_row(RowView eta, const PredictionRow& pred) {
    for_each_predicted(eta, pred.labels(), [&](label_t j, double v) { f[j] *= 1.0 - v; });
}

void FailureProbVector::swap_row(RowView eta, const PredictionRow& old_pred, const PredictionRow& new_pred) {
    for_each_predicted(eta, old_pred.labels(), [&](label_t j, double v) {
        if (!new_pred.contains(j)) divide_out(f[j], v);
    });
    for_each_predicted(eta, new_pred.labels(), [&](label_t j, double v) {
        if (!old_pred.contains(j)) f[j] *= 1.0 - v;
    });
}

double FailureProbVector::expected_coverage() const noexcept {
    if (f.empty()) return 0.0;
    double s = 0.0;
    for (double v : f) s += v;
    return 1.0 - s / static_cast<double>(f.size());
}

FailureProbVector failure_from_scratch(const SparseRowMatrix& probs, const Predictions& preds) {
    if (preds.size() != probs.rows())
        throw DimensionError("predictions have " + std::to_string(preds.size()) + " rows, probabilities " +
                             std::to_string(probs.rows()));
    FailureProbVector out;
    out.f.assign(probs.cols(), 1.0);
    for (std::size_t i = 0; i < probs.rows(); ++i) {
        const auto labels = preds[i].labels();
        if (!labels.empty() && labels.back() >= probs.cols())
            throw DimensionError("predicted label " + std::to_string(labels.back()) + " out of range");
        out.add_row(probs.row(i), preds[i]);
    }
    return out;
}

}  // namespace etuk
