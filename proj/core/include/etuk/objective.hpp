#pragma once

#include <cstddef>

#include "etuk/metric.hpp"
#include "etuk/prediction.hpp"
#include "etuk/sparse_matrix.hpp"

namespace etuk {

// Largest n for which the exact expectation enumerates label outcomes.
inline constexpr std::size_t max_enumeration_rows = 20;

// Utility evaluated at the semi-empirical quantities (expectation moved
// inside the utility).
double semi_etu_objective(const SparseRowMatrix& probs, const Predictions& preds, const MetricSpec& metric);

// Exact expected utility under independent Bernoulli(eta_ij) labels. Each
// label's column is enumerated over its 2^n outcomes (zero-probability
// branches skipped); coverage uses 1 - (1/m) sum_j prod_i (1 - eta_ij yhat_ij)
// and has no size limit. CapabilityError if n > max_enumeration_rows for an
// enumerated family.
double etu_objective_exact(const SparseRowMatrix& probs, const Predictions& preds, const MetricSpec& metric);

// Closed-form expected coverage of the predictions.
double expected_coverage(const SparseRowMatrix& probs, const Predictions& preds);

}  // namespace etuk
