#include "etuk/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "etuk/errors.hpp"
#include "etuk/rng.hpp"

namespace etuk {

SyntheticData generate_synthetic(const SyntheticSpec& spec) {
    if (spec.n == 0 || spec.m == 0) throw ConfigError("synthetic data needs n >= 1 and m >= 1");
    if (!(spec.power > 0.0)) throw ConfigError("power exponent must be positive");
    if (!(spec.avg_labels > 0.0)) throw ConfigError("average labels per instance must be positive");
    if (spec.candidates == 0) throw ConfigError("candidates per instance must be at least 1");
    const std::size_t c = std::min(spec.candidates, spec.m);
    if (spec.avg_labels > 0.99 * static_cast<double>(c))
        throw ConfigError("average labels per instance exceeds what " + std::to_string(c) +
                          " candidates can carry");

    std::vector<double> log_weight(spec.m);
    for (std::size_t j = 0; j < spec.m; ++j) log_weight[j] = -spec.power * std::log(static_cast<double>(j + 1));

    Rng rng(spec.seed);
    SparseRowMatrix::Builder probs(spec.m), labels(spec.m);
    std::vector<std::pair<double, label_t>> keys(spec.m);
    std::vector<double> share(c);
    std::vector<SparseRowMatrix::Entry> prow, yrow;
    for (std::size_t i = 0; i < spec.n; ++i) {
        // Weighted sampling without replacement: the c largest log(u) / w_j.
        for (std::size_t j = 0; j < spec.m; ++j) {
            const double u = 1.0 - rng.uniform();  // (0, 1]
            keys[j] = {std::log(u) * std::exp(-log_weight[j]), static_cast<label_t>(j)};
        }
        std::partial_sort(keys.begin(), keys.begin() + static_cast<std::ptrdiff_t>(c), keys.end(),
                          [](const auto& a, const auto& b) { return a.first > b.first || (a.first == b.first && a.second < b.second); });
        double total = 0.0;
        for (std::size_t e = 0; e < c; ++e) {
            const double g = -std::log(1.0 - rng.uniform());
            share[e] = g * g * g;
            total += share[e];
        }
        prow.clear();
        yrow.clear();
        for (std::size_t e = 0; e < c; ++e) {
            const double eta = total > 0.0 ? std::min(0.99, spec.avg_labels * share[e] / total) : 0.0;
            if (eta <= 0.0) continue;
            prow.emplace_back(keys[e].second, eta);
        }
        std::sort(prow.begin(), prow.end());
        for (const auto& [j, eta] : prow)
            if (rng.uniform() < eta) yrow.emplace_back(j, 1.0);
        probs.add_row(prow);
        labels.add_row(yrow);
    }
    SyntheticData out{std::move(probs).build(), std::move(labels).build(), {}};
    out.priors = column_means(out.labels);
    return out;
}

}  // namespace etuk
