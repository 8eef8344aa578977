#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "etuk/metric.hpp"
#include "etuk/prediction.hpp"
#include "etuk/rng.hpp"
#include "etuk/sparse_matrix.hpp"

namespace etuk {

enum class InitStrategy { random_k, top_k };

struct InferenceConfig {
    std::size_t k = 1;
    std::size_t k_prime = 0;  // 0: use every stored probability
    double epsilon = 1e-7;
    std::uint64_t seed = 0;
    InitStrategy init = InitStrategy::random_k;
    std::size_t max_passes = 100;
    unsigned threads = 1;  // 0: all hardware threads
};

// objective_trace[0] is the objective of the initial predictions; each
// completed pass appends one value. Single-pass strategies report the final
// objective only.
struct InferenceReport {
    Predictions predictions;
    std::vector<double> objective_trace;
    std::size_t passes = 0;
    double wall_time = 0.0;
};

// ConfigError unless 1 <= k <= m, k_prime == 0 or k_prime >= k, epsilon >= 0
// and max_passes >= 1.
void validate_config(const InferenceConfig& cfg, std::size_t m);

// Per instance, the k labels with the largest eta * w11 + (1 - eta) * w01.
// With k_prime > 0 only the row's k_prime largest probabilities are scored;
// short rows are padded with the smallest remaining labels.
InferenceReport weighted_topk_infer(const SparseRowMatrix& probs, std::span<const double> w11,
                                    std::span<const double> w01, const InferenceConfig& cfg);
InferenceReport topk_infer(const SparseRowMatrix& probs, const InferenceConfig& cfg);

// Block coordinate ascent on the semi-empirical objective. Each pass visits
// the instances in a shuffled order and replaces the row by the best
// response given all other rows. Stops once a pass improves by at most
// epsilon or after max_passes. With k_prime > 0 every row is truncated to its
// k_prime largest probabilities (the rest count as zero) and only those
// labels plus the current prediction are scored.
// Coverage is not supported here (CapabilityError); see bca_coverage_infer.
InferenceReport bca_infer(const SparseRowMatrix& probs, const MetricSpec& metric, const InferenceConfig& cfg);
// Starts from the given predictions instead of cfg.init.
InferenceReport bca_infer(const SparseRowMatrix& probs, const MetricSpec& metric, const InferenceConfig& cfg,
                          const Predictions& initial);

// One pass in row order; row i only sees the statistics of rows before it.
InferenceReport greedy_infer(const SparseRowMatrix& probs, const MetricSpec& metric, const InferenceConfig& cfg);

// Coordinate ascent on the exact expected coverage. Probabilities must be
// below 1 (ValidationError otherwise).
InferenceReport bca_coverage_infer(const SparseRowMatrix& probs, const InferenceConfig& cfg);
InferenceReport greedy_coverage_infer(const SparseRowMatrix& probs, const InferenceConfig& cfg);

// Initial predictions as the ascent strategies draw them.
Predictions initial_predictions(const SparseRowMatrix& probs, const InferenceConfig& cfg, Rng& rng);

}  // namespace etuk
