#include "etuk/metric.hpp"

#include <charconv>
#include <cmath>
#include <string>

#include "etuk/errors.hpp"
#include "etuk/matrix_io.hpp"

namespace etuk {

InstanceWeights InstanceWeights::true_positive_only(std::vector<double> w11) {
    InstanceWeights w;
    w.w00.assign(w11.size(), 0.0);
    w.w01.assign(w11.size(), 0.0);
    w.w10.assign(w11.size(), 0.0);
    w.w11 = std::move(w11);
    return w;
}

MetricSpec MetricSpec::macro_precision() { return MetricSpec(MetricFamily::macro_precision); }
MetricSpec MetricSpec::macro_recall() { return MetricSpec(MetricFamily::macro_recall); }
MetricSpec MetricSpec::coverage() { return MetricSpec(MetricFamily::coverage); }
MetricSpec MetricSpec::hamming() { return MetricSpec(MetricFamily::hamming); }

MetricSpec MetricSpec::macro_fbeta(double beta) {
    if (!(beta > 0.0) || !std::isfinite(beta)) throw ConfigError("F-beta requires beta > 0");
    MetricSpec m(MetricFamily::macro_fbeta);
    m.beta_ = beta;
    return m;
}

MetricSpec MetricSpec::instance_precision(std::size_t k) {
    if (k == 0) throw ConfigError("instance precision requires k >= 1");
    MetricSpec m(MetricFamily::instance_precision);
    m.k_ = k;
    return m;
}

MetricSpec MetricSpec::weighted(InstanceWeights weights) {
    const auto n = weights.w11.size();
    if (weights.w00.size() != n || weights.w01.size() != n || weights.w10.size() != n)
        throw DimensionError("instance weights must all have the same length");
    MetricSpec m(MetricFamily::weighted_instance);
    m.weights_ = std::make_shared<const InstanceWeights>(std::move(weights));
    return m;
}

MetricSpec MetricSpec::mixed(double alpha, MetricSpec a, MetricSpec b) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw ConfigError("mixing weight alpha must lie in [0, 1]");
    if (a.family() == MetricFamily::mixed || b.family() == MetricFamily::mixed)
        throw ConfigError("mixed metrics cannot be nested");
    MetricSpec m(MetricFamily::mixed);
    m.alpha_ = alpha;
    m.parts_ = std::make_shared<const Parts>(
        Parts{std::make_shared<const MetricSpec>(std::move(a)), std::make_shared<const MetricSpec>(std::move(b))});
    return m;
}

bool MetricSpec::is_linear() const noexcept {
    switch (family_) {
        case MetricFamily::macro_recall:
        case MetricFamily::instance_precision:
        case MetricFamily::hamming:
        case MetricFamily::weighted_instance:
            return true;
        case MetricFamily::mixed:
            return first().is_linear() && second().is_linear();
        default:
            return false;
    }
}

bool MetricSpec::semi_etu_exact() const noexcept {
    switch (family_) {
        case MetricFamily::macro_precision:
        case MetricFamily::instance_precision:
        case MetricFamily::hamming:
        case MetricFamily::weighted_instance:
            return true;
        case MetricFamily::mixed:
            return first().semi_etu_exact() && second().semi_etu_exact();
        default:
            return false;
    }
}

std::string MetricSpec::name() const {
    switch (family_) {
        case MetricFamily::macro_precision: return "macro-p";
        case MetricFamily::macro_recall: return "macro-r";
        case MetricFamily::macro_fbeta: return "macro-f:" + format_real(beta_);
        case MetricFamily::coverage: return "coverage";
        case MetricFamily::instance_precision: return "instance-p";
        case MetricFamily::hamming: return "hamming";
        case MetricFamily::weighted_instance: return "weighted";
        case MetricFamily::mixed:
            return "mixed:" + format_real(alpha_) + ":" + first().name() + ":" + second().name();
    }
    return "unknown";
}

namespace {

double ratio(double num, double den) { return den == 0.0 ? 0.0 : num / den; }

double weighted_psi(const InstanceWeights& w, label_t j, double t, double p, double q) {
    return w.w00[j] * (1.0 - p - q + t) + w.w01[j] * (p - t) + w.w10[j] * (q - t) + w.w11[j] * t;
}

}  // namespace

double psi_eval(const MetricSpec& metric, double t, double p, double q, label_t label) {
    switch (metric.family()) {
        case MetricFamily::macro_precision: return ratio(t, p);
        case MetricFamily::macro_recall: return ratio(t, q);
        case MetricFamily::macro_fbeta: {
            const double b2 = metric.beta() * metric.beta();
            return ratio((1.0 + b2) * t, b2 * q + p);
        }
        case MetricFamily::coverage: return t > 0.0 ? 1.0 : 0.0;
        case MetricFamily::instance_precision: return t / static_cast<double>(metric.k());
        case MetricFamily::hamming: return 1.0 - p - q + 2.0 * t;
        case MetricFamily::weighted_instance: return weighted_psi(metric.weights(), label, t, p, q);
        case MetricFamily::mixed:
            return (1.0 - metric.alpha()) * psi_eval(metric.first(), t, p, q, label) +
                   metric.alpha() * psi_eval(metric.second(), t, p, q, label);
    }
    return 0.0;
}

double label_utility(const MetricSpec& metric, label_t j, std::size_t m, double t, double p, double q) {
    switch (metric.family()) {
        case MetricFamily::macro_precision:
        case MetricFamily::macro_recall:
        case MetricFamily::macro_fbeta:
        case MetricFamily::coverage:
        case MetricFamily::hamming:
            return psi_eval(metric, t, p, q, j) / static_cast<double>(m);
        case MetricFamily::instance_precision:
        case MetricFamily::weighted_instance:
            return psi_eval(metric, t, p, q, j);
        case MetricFamily::mixed:
            return (1.0 - metric.alpha()) * label_utility(metric.first(), j, m, t, p, q) +
                   metric.alpha() * label_utility(metric.second(), j, m, t, p, q);
    }
    return 0.0;
}

double utility(const MetricSpec& metric, std::span<const double> t, std::span<const double> p,
               std::span<const double> q) {
    const std::size_t m = t.size();
    if (p.size() != m || q.size() != m) throw DimensionError("t, p and q must have equal length");
    check_metric_labels(metric, m);
    double sum = 0.0;
    for (std::size_t j = 0; j < m; ++j) sum += label_utility(metric, static_cast<label_t>(j), m, t[j], p[j], q[j]);
    return sum;
}

double utility(const MetricSpec& metric, const RunningStats& stats) {
    return utility(metric, stats.t_hat, stats.p, stats.q_hat);
}

double task_utility(const MetricSpec& metric, const SparseRowMatrix& labels, const Predictions& preds) {
    if (!labels.satisfies(MatrixKind::binary)) throw ValidationError("task utility requires binary labels");
    return utility(metric, stats_from_scratch(labels, preds));
}

void check_metric_labels(const MetricSpec& metric, std::size_t m) {
    if (metric.family() == MetricFamily::weighted_instance && metric.weights().labels() != m)
        throw DimensionError("weighted metric has " + std::to_string(metric.weights().labels()) +
                             " weights for " + std::to_string(m) + " labels");
    if (metric.family() == MetricFamily::mixed) {
        check_metric_labels(metric.first(), m);
        check_metric_labels(metric.second(), m);
    }
}

LinearCoefficients linear_coefficients(const MetricSpec& metric, label_t j, std::size_t m, double q) {
    const double md = static_cast<double>(m);
    switch (metric.family()) {
        case MetricFamily::macro_recall:
            return {q > 0.0 ? 1.0 / (md * q) : 0.0, 0.0};
        case MetricFamily::instance_precision:
            return {1.0 / static_cast<double>(metric.k()), 0.0};
        case MetricFamily::hamming:
            return {1.0 / md, -1.0 / md};
        case MetricFamily::weighted_instance: {
            const auto& w = metric.weights();
            return {w.w11[j] - w.w10[j], w.w01[j] - w.w00[j]};
        }
        case MetricFamily::mixed: {
            if (!metric.is_linear()) break;
            const auto a = linear_coefficients(metric.first(), j, m, q);
            const auto b = linear_coefficients(metric.second(), j, m, q);
            const double al = metric.alpha();
            return {(1.0 - al) * a.w11 + al * b.w11, (1.0 - al) * a.w01 + al * b.w01};
        }
        default:
            break;
    }
    throw CapabilityError("metric '" + metric.name() + "' is not linear");
}

LinearGainWeights linear_gain_weights(const MetricSpec& metric, std::span<const double> q_hat) {
    const std::size_t m = q_hat.size();
    check_metric_labels(metric, m);
    if (!metric.is_linear()) throw CapabilityError("metric '" + metric.name() + "' is not linear");
    LinearGainWeights out{std::vector<double>(m, 0.0), std::vector<double>(m, 0.0)};
    for (std::size_t j = 0; j < m; ++j) {
        const auto c = linear_coefficients(metric, static_cast<label_t>(j), m, q_hat[j]);
        out.w11[j] = c.w11;
        out.w01[j] = c.w01;
    }
    return out;
}

namespace {

double parse_real(std::string_view s, const char* what) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
        throw ConfigError(std::string("malformed ") + what + " '" + std::string(s) + "'");
    return v;
}

// Parses one non-mixed metric at the front of `text`, stopping at the first
// ':' that is not part of the metric itself. Advances `text` past it.
MetricSpec parse_simple(std::string_view& text, std::size_t k) {
    auto take_field = [&]() {
        const auto colon = text.find(':');
        auto field = text.substr(0, colon);
        text.remove_prefix(colon == std::string_view::npos ? text.size() : colon);
        return field;
    };
    const auto head = take_field();
    if (head == "macro-p") return MetricSpec::macro_precision();
    if (head == "macro-r") return MetricSpec::macro_recall();
    if (head == "coverage") return MetricSpec::coverage();
    if (head == "instance-p") return MetricSpec::instance_precision(k);
    if (head == "hamming") return MetricSpec::hamming();
    if (head == "macro-f" || head == "weighted") {
        if (text.empty()) throw ConfigError("'" + std::string(head) + "' needs a parameter");
        text.remove_prefix(1);
        const auto arg = take_field();
        if (head == "macro-f") return MetricSpec::macro_fbeta(parse_real(arg, "beta"));
        return MetricSpec::weighted(InstanceWeights::true_positive_only(load_vector(std::string(arg))));
    }
    throw ConfigError("unknown metric '" + std::string(head) + "'");
}

}  // namespace

MetricSpec parse_metric(std::string_view text, std::size_t k) {
    constexpr std::string_view mixed_prefix = "mixed:";
    if (text.substr(0, mixed_prefix.size()) == mixed_prefix) {
        text.remove_prefix(mixed_prefix.size());
        const auto colon = text.find(':');
        if (colon == std::string_view::npos) throw ConfigError("mixed metric needs 'mixed:<alpha>:<A>:<B>'");
        const double alpha = parse_real(text.substr(0, colon), "alpha");
        text.remove_prefix(colon + 1);
        auto a = parse_simple(text, k);
        if (text.empty()) throw ConfigError("mixed metric needs two component metrics");
        text.remove_prefix(1);
        auto b = parse_simple(text, k);
        if (!text.empty()) throw ConfigError("trailing text after mixed metric");
        return MetricSpec::mixed(alpha, std::move(a), std::move(b));
    }
    auto spec = parse_simple(text, k);
    if (!text.empty()) throw ConfigError("trailing text after metric");
    return spec;
}

}  // namespace etuk
