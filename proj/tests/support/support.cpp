#include "support.hpp"

#include <cmath>

namespace etuk::testing {

SparseRowMatrix random_probs(Rng& rng, std::size_t n, std::size_t m, double density, double lo, double hi) {
    SparseRowMatrix::Builder b(m);
    std::vector<SparseRowMatrix::Entry> row;
    for (std::size_t i = 0; i < n; ++i) {
        row.clear();
        for (std::size_t j = 0; j < m; ++j) {
            if (density < 1.0 && rng.uniform() >= density) continue;
            double v = lo + (hi - lo) * rng.uniform();
            if (v <= 0.0) v = 1e-6;
            row.emplace_back(static_cast<label_t>(j), v);
        }
        b.add_row(row);
    }
    return std::move(b).build();
}

Predictions random_predictions(Rng& rng, std::size_t n, std::size_t m, std::size_t k) {
    Predictions out;
    for (std::size_t i = 0; i < n; ++i) out.emplace_back(rng.sample_distinct(m, k));
    return out;
}

double reference_utility(const RefMetric& metric, const Dense& labels, const Dense& preds) {
    const std::size_t n = labels.size();
    const std::size_t m = n ? labels[0].size() : 0;
    double total = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
        double tp = 0, fp = 0, fn = 0, tn = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const bool y = labels[i][j] != 0.0, yh = preds[i][j] != 0.0;
            if (y && yh) tp += 1;
            else if (!y && yh) fp += 1;
            else if (y && !yh) fn += 1;
            else tn += 1;
        }
        const double dn = static_cast<double>(n), dm = static_cast<double>(m);
        switch (metric.kind) {
            case RefMetric::precision: total += (tp + fp > 0 ? tp / (tp + fp) : 0.0) / dm; break;
            case RefMetric::recall: total += (tp + fn > 0 ? tp / (tp + fn) : 0.0) / dm; break;
            case RefMetric::fbeta: {
                const double b2 = metric.beta * metric.beta;
                const double den = (1 + b2) * tp + b2 * fn + fp;
                total += (den > 0 ? (1 + b2) * tp / den : 0.0) / dm;
                break;
            }
            case RefMetric::coverage: total += (tp > 0 ? 1.0 : 0.0) / dm; break;
            case RefMetric::instance_p: total += tp / (dn * static_cast<double>(metric.k)); break;
            case RefMetric::hamming: total += (tp + tn) / (dn * dm); break;
            case RefMetric::weighted:
                total += (metric.w00[j] * tn + metric.w01[j] * fp + metric.w10[j] * fn + metric.w11[j] * tp) / dn;
                break;
        }
    }
    return total;
}

double reference_expectation(const RefMetric& metric, const Dense& probs, const Dense& preds) {
    const std::size_t n = probs.size();
    const std::size_t m = n ? probs[0].size() : 0;
    const std::size_t cells = n * m;
    Dense y(n, std::vector<double>(m, 0.0));
    double total = 0.0;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << cells); ++mask) {
        double p = 1.0;
        for (std::size_t c = 0; c < cells; ++c) {
            const std::size_t i = c / m, j = c % m;
            const bool on = (mask >> c) & 1u;
            y[i][j] = on ? 1.0 : 0.0;
            p *= on ? probs[i][j] : 1.0 - probs[i][j];
        }
        if (p > 0.0) total += p * reference_utility(metric, y, preds);
    }
    return total;
}

double reference_propensity(double a, double b, double n_train, double prior, std::size_t k) {
    const double c = (std::log(n_train) - 1.0) * std::pow(b + 1.0, a);
    return (1.0 + c * std::pow(n_train * prior + b, -a)) / static_cast<double>(k);
}

Dense dense_predictions(const Predictions& preds, std::size_t m) {
    Dense out(preds.size(), std::vector<double>(m, 0.0));
    for (std::size_t i = 0; i < preds.size(); ++i)
        for (auto j : preds[i].labels()) out[i][j] = 1.0;
    return out;
}

}  // namespace etuk::testing
