#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "etuk/prediction.hpp"
#include "etuk/running_stats.hpp"
#include "etuk/sparse_matrix.hpp"

namespace etuk {

enum class MetricFamily {
    macro_precision,
    macro_recall,
    macro_fbeta,
    coverage,
    instance_precision,
    hamming,
    weighted_instance,
    mixed,
};

// Per-label 2x2 utilities of an instance-wise weighted metric: true negative,
// false positive, false negative, true positive.
struct InstanceWeights {
    std::vector<double> w00, w01, w10, w11;

    std::size_t labels() const noexcept { return w11.size(); }
    // w11 given, all other entries zero.
    static InstanceWeights true_positive_only(std::vector<double> w11);
};

// A utility psi(t, p, q) over per-label semi-empirical quantities, summed
// over labels. Macro families and hamming carry a 1/m factor per label,
// instance precision a 1/k factor; weighted metrics use their weights as is.
// Immutable; copies share their parameters.
class MetricSpec {
public:
    static MetricSpec macro_precision();
    static MetricSpec macro_recall();
    static MetricSpec macro_fbeta(double beta);
    static MetricSpec coverage();
    static MetricSpec instance_precision(std::size_t k);
    static MetricSpec hamming();
    static MetricSpec weighted(InstanceWeights weights);
    // (1 - alpha) * a + alpha * b; a and b must not be mixed themselves.
    static MetricSpec mixed(double alpha, MetricSpec a, MetricSpec b);

    MetricFamily family() const noexcept { return family_; }
    double beta() const noexcept { return beta_; }
    double alpha() const noexcept { return alpha_; }
    std::size_t k() const noexcept { return k_; }
    const InstanceWeights& weights() const { return *weights_; }
    const MetricSpec& first() const;
    const MetricSpec& second() const;

    // Linear in (t, p) once q is fixed; the semi-empirical objective then
    // decomposes over instances and closed-form top-k selection is optimal.
    bool is_linear() const noexcept;

    // Exact semi-empirical approximation (linear in the label-dependent t and q).
    bool semi_etu_exact() const noexcept;

    std::string name() const;

private:
    struct Parts;
    explicit MetricSpec(MetricFamily f) : family_(f) {}

    MetricFamily family_;
    double beta_ = 1.0;
    double alpha_ = 0.0;
    std::size_t k_ = 1;
    std::shared_ptr<const InstanceWeights> weights_;
    std::shared_ptr<const Parts> parts_;
};

struct MetricSpec::Parts {
    std::shared_ptr<const MetricSpec> first, second;
};

inline const MetricSpec& MetricSpec::first() const { return *parts_->first; }
inline const MetricSpec& MetricSpec::second() const { return *parts_->second; }

// Binary utility of one label before any per-label scaling, with 0/0 := 0:
// t/p, t/q, (1+b^2)t/(b^2 q + p), 1[t > 0], t/k, 1 - p - q + 2t, or the
// weighted confusion sum for `label`. Mixed combines its parts' values.
double psi_eval(const MetricSpec& metric, double t, double p, double q, label_t label = 0);

// Contribution of label j to the utility, including 1/m or weight scaling.
double label_utility(const MetricSpec& metric, label_t j, std::size_t m, double t, double p, double q);

// Sum of label_utility over all labels.
double utility(const MetricSpec& metric, std::span<const double> t, std::span<const double> p,
               std::span<const double> q);
double utility(const MetricSpec& metric, const RunningStats& stats);

// Utility of predictions against realized binary labels.
double task_utility(const MetricSpec& metric, const SparseRowMatrix& labels, const Predictions& preds);

// Per-label weights such that the per-instance gain of predicting label j is
// eta_j * w11[j] + (1 - eta_j) * w01[j]. CapabilityError for non-linear metrics.
struct LinearGainWeights {
    std::vector<double> w11, w01;
};
LinearGainWeights linear_gain_weights(const MetricSpec& metric, std::span<const double> q_hat);

// The same two coefficients for a single label of an m-label problem.
struct LinearCoefficients {
    double w11 = 0.0;
    double w01 = 0.0;
};
LinearCoefficients linear_coefficients(const MetricSpec& metric, label_t j, std::size_t m, double q);

// Weighted metrics must carry m weights (DimensionError otherwise).
void check_metric_labels(const MetricSpec& metric, std::size_t m);

// `macro-p`, `macro-r`, `macro-f:<beta>`, `coverage`, `instance-p`, `hamming`,
// `weighted:<path>` (one w11 weight per line), `mixed:<alpha>:<A>:<B>`.
// `k` parameterizes instance-p. Throws ConfigError on malformed text.
MetricSpec parse_metric(std::string_view text, std::size_t k);

}  // namespace etuk
