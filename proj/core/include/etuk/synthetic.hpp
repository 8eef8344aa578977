#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "etuk/sparse_matrix.hpp"

namespace etuk {

struct SyntheticSpec {
    std::size_t n = 1000;
    std::size_t m = 100;
    double power = 1.0;         // label j is drawn with weight (j + 1)^-power
    double avg_labels = 3.0;    // expected relevant labels per instance
    std::size_t candidates = 20;  // labels with non-zero probability per instance
    std::uint64_t seed = 0;
};

struct SyntheticData {
    SparseRowMatrix probs;       // the true marginals
    SparseRowMatrix labels;      // y_ij ~ Bernoulli(probs_ij)
    std::vector<double> priors;  // empirical label frequencies of `labels`
};

// Long-tailed multi-label data. Each instance draws its candidate labels
// without replacement with probability proportional to the power-law
// weights, then spreads avg_labels of probability mass over them with
// heavy-tailed random shares (each capped at 0.99). ConfigError on invalid
// parameters.
SyntheticData generate_synthetic(const SyntheticSpec& spec);

}  // namespace etuk
