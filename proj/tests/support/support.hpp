#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "etuk/prediction.hpp"
#include "etuk/rng.hpp"
#include "etuk/sparse_matrix.hpp"

namespace etuk::testing {

using Dense = std::vector<std::vector<double>>;

// Probabilities uniform in (lo, hi); entries are kept with probability
// `density` (every entry is stored when density == 1).
SparseRowMatrix random_probs(Rng& rng, std::size_t n, std::size_t m, double density = 1.0, double lo = 0.0,
                             double hi = 1.0);

Predictions random_predictions(Rng& rng, std::size_t n, std::size_t m, std::size_t k);

// Metric description for the reference evaluator below, kept apart from
// MetricSpec so the two computations share no code.
struct RefMetric {
    enum Kind { precision, recall, fbeta, coverage, instance_p, hamming, weighted } kind;
    double beta = 1.0;
    std::size_t k = 1;
    std::vector<double> w00, w01, w10, w11;
};

// Utility of binary predictions against binary labels, written straight
// from confusion counts.
double reference_utility(const RefMetric& metric, const Dense& labels, const Dense& preds);

// Exact expectation of reference_utility by walking all 2^(n*m) label
// matrices under independent Bernoulli(probs). Small instances only.
double reference_expectation(const RefMetric& metric, const Dense& probs, const Dense& preds);

// Straight-line propensity weight: (1/k)(1 + (ln N - 1)(b + 1)^a (N p + b)^-a).
double reference_propensity(double a, double b, double n_train, double prior, std::size_t k);

Dense dense_predictions(const Predictions& preds, std::size_t m);

}  // namespace etuk::testing
