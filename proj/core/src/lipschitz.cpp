#include "etuk/lipschitz.hpp"

#include <cmath>
#include <string>

#include "etuk/errors.hpp"

namespace etuk {
namespace {

void require_positive(std::span<const double> q_hat, const MetricSpec& metric) {
    for (std::size_t j = 0; j < q_hat.size(); ++j)
        if (!(q_hat[j] > 0.0))
            throw CapabilityError("bound for '" + metric.name() + "' undefined: q_hat[" + std::to_string(j) +
                                  "] is not positive");
}

}  // namespace

LipschitzProfile lipschitz_profile(const MetricSpec& metric, std::span<const double> q_hat) {
    const std::size_t m = q_hat.size();
    const double md = static_cast<double>(m);
    check_metric_labels(metric, m);
    LipschitzProfile out{std::vector<double>(m, 0.0), std::vector<double>(m, 0.0)};

    switch (metric.family()) {
        case MetricFamily::macro_recall:
            require_positive(q_hat, metric);
            for (std::size_t j = 0; j < m; ++j) {
                out.t_const[j] = 1.0 / (md * q_hat[j]);
                out.p_const[j] = 1.0 / (md * q_hat[j]);
            }
            break;
        case MetricFamily::macro_fbeta: {
            require_positive(q_hat, metric);
            const double b2 = metric.beta() * metric.beta();
            for (std::size_t j = 0; j < m; ++j) {
                out.t_const[j] = (1.0 + b2) / (md * b2 * q_hat[j]);
                out.p_const[j] = 1.0 / (md * q_hat[j]);
            }
            break;
        }
        case MetricFamily::instance_precision:
            out.t_const.assign(m, 1.0 / static_cast<double>(metric.k()));
            break;
        case MetricFamily::hamming:
            out.t_const.assign(m, 2.0 / md);
            out.p_const.assign(m, 1.0 / md);
            break;
        case MetricFamily::weighted_instance: {
            const auto& w = metric.weights();
            for (std::size_t j = 0; j < m; ++j) {
                out.t_const[j] = std::abs(w.w00[j] - w.w01[j] - w.w10[j] + w.w11[j]);
                out.p_const[j] = std::abs(w.w10[j] - w.w00[j]);
            }
            break;
        }
        case MetricFamily::mixed: {
            const auto a = lipschitz_profile(metric.first(), q_hat);
            const auto b = lipschitz_profile(metric.second(), q_hat);
            const double al = metric.alpha();
            for (std::size_t j = 0; j < m; ++j) {
                out.t_const[j] = (1.0 - al) * a.t_const[j] + al * b.t_const[j];
                out.p_const[j] = (1.0 - al) * a.p_const[j] + al * b.p_const[j];
            }
            break;
        }
        case MetricFamily::macro_precision:
        case MetricFamily::coverage:
            throw CapabilityError("metric '" + metric.name() + "' has no q-dependent Lipschitz constants");
    }
    return out;
}

double approximation_bound(const LipschitzProfile& profile, std::size_t n) {
    if (n == 0) throw ConfigError("bound requires n >= 1");
    double sum = 0.0;
    for (std::size_t j = 0; j < profile.t_const.size(); ++j) sum += profile.t_const[j] + profile.p_const[j];
    return sum / (2.0 * std::sqrt(static_cast<double>(n)));
}

}  // namespace etuk
