#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "etuk/prediction.hpp"
#include "etuk/sparse_matrix.hpp"

namespace etuk {

struct EvalReport {
    std::size_t k = 0;
    double instance_precision = 0.0;
    double instance_recall = 0.0;
    double macro_precision = 0.0;
    double macro_recall = 0.0;
    double macro_f1 = 0.0;
    double coverage = 0.0;
    std::optional<double> ps_precision;

    // ("iP@5", value) ... in a fixed order; psP only when present.
    std::vector<std::pair<std::string, double>> entries() const;
    std::string to_text() const;  // key=value lines
    std::string to_json() const;
};

// @k metrics of k-hot predictions against binary labels. Instance metrics
// average over instances (recall of a row without labels is 0); macro
// metrics average over all m labels with 0/0 := 0; coverage is the fraction
// of labels with at least one true positive. psP@k is
// (1/n) sum_i sum_{j in predicted and relevant} w_j, with w_j already
// including any 1/k factor.
// ValidationError when a row does not hold exactly k labels or labels are
// not binary; DimensionError on size mismatches.
EvalReport evaluate(const Predictions& preds, const SparseRowMatrix& labels, std::size_t k,
                    std::optional<std::span<const double>> ps_weights = std::nullopt);

}  // namespace etuk
