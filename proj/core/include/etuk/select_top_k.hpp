#pragma once

#include <cstddef>
#include <span>

#include "etuk/prediction.hpp"
#include "etuk/sparse_matrix.hpp"

namespace etuk {

struct GainEntry {
    label_t label;
    double gain;
};

// The k labels with the largest gains; ties go to the smaller label index.
// ConfigError if k exceeds the number of labels.
PredictionRow select_top_k(std::span<const double> gains, std::size_t k);

// Sparse variant over candidate labels of an m-label space. When fewer than
// k candidates exist, the row is padded with the smallest non-candidate
// labels (treated as zero gain).
PredictionRow select_top_k(std::span<const GainEntry> gains, std::size_t k, std::size_t m);

}  // namespace etuk
