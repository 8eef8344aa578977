#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "etuk/metric.hpp"
#include "etuk/prediction.hpp"
#include "etuk/sparse_matrix.hpp"

namespace etuk {

// Size limits of the exhaustive searches (number of prediction matrices).
inline constexpr double max_semi_etu_candidates = 1e7;
inline constexpr double max_etu_candidates = 1e5;
inline constexpr std::size_t max_etu_rows = 12;

struct OracleResult {
    Predictions best_preds;
    double best_value = 0.0;
    std::uint64_t candidates_evaluated = 0;
};

// All k-subsets of [0, m) in lexicographic order.
std::vector<PredictionRow> all_prediction_rows(std::size_t m, std::size_t k);

// Exhaustive maximization over every matrix of k-hot rows. Rows are
// enumerated lexicographically with the last row varying fastest; the first
// maximum wins. CapabilityError when the instance exceeds the size limits.
OracleResult brute_force_semi_etu(const SparseRowMatrix& probs, const MetricSpec& metric, std::size_t k);
OracleResult brute_force_etu(const SparseRowMatrix& probs, const MetricSpec& metric, std::size_t k);

// True iff no single-row replacement increases the objective by more than
// 1e-12. The objective is the semi-empirical one, except for coverage where
// the exact expected coverage is used.
bool local_opt_check(const SparseRowMatrix& probs, const Predictions& preds, const MetricSpec& metric,
                     std::size_t k);

}  // namespace etuk
