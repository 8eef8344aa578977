#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

namespace etuk {

enum class WeightKind { propensity, power_law, log };

// Per-label true-positive weight schemes derived from empirical label priors.
struct WeightScheme {
    WeightKind kind = WeightKind::propensity;
    double a = 0.55;          // propensity exponent
    double b = 1.5;           // propensity offset
    double beta_exp = 0.5;    // power-law exponent
    std::size_t n_train = 0;  // training-set size N'
    std::vector<double> priors;
};

// Propensity: (1/k) * (1 + (ln N' - 1) (b + 1)^a (N' prior + b)^-a).
// Power law: prior^-beta; log: -ln(prior). Both are normalized to a maximum
// of 1 after flooring priors at 1/N' (when N' > 0).
// ConfigError on invalid parameters or priors outside [0, 1].
std::vector<double> weight_compute(const WeightScheme& scheme, std::size_t k);

// `propensity[:a:b]`, `power[:beta]`, `log`.
WeightScheme parse_weight_scheme(std::string_view text, std::size_t n_train, std::vector<double> priors);

}  // namespace etuk
