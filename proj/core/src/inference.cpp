#include "etuk/inference.hpp"

#include <algorithm>
#include <chrono>
#include <limits>
#include <numeric>
#include <string>

#include "etuk/errors.hpp"
#include "etuk/parallel.hpp"
#include "etuk/running_stats.hpp"
#include "etuk/select_top_k.hpp"

namespace etuk {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

void check_weights(std::span<const double> w, std::size_t m, const char* what) {
    if (w.size() != m)
        throw DimensionError(std::string(what) + " has " + std::to_string(w.size()) + " entries, expected " +
                             std::to_string(m));
}

// Scratch space for one row: the row's probabilities spread over all labels
// and a membership mask of the current prediction. Both are reset after use.
struct RowScratch {
    std::vector<double> eta;
    std::vector<char> current;

    explicit RowScratch(std::size_t m) : eta(m, 0.0), current(m, 0) {}

    void load(RowView row, const PredictionRow& pred) {
        for (std::size_t e = 0; e < row.size(); ++e) eta[row.indices[e]] = row.values[e];
        for (label_t j : pred.labels()) current[j] = 1;
    }
    void clear(RowView row, const PredictionRow& pred) {
        for (std::size_t e = 0; e < row.size(); ++e) eta[row.indices[e]] = 0.0;
        for (label_t j : pred.labels()) current[j] = 0;
    }
};

// Candidate labels of a row in sparse mode: the stored entries merged with
// the current prediction, in ascending label order.
void sparse_candidates(RowView row, const PredictionRow& pred, std::vector<GainEntry>& out,
                       std::vector<double>& eta_out) {
    out.clear();
    eta_out.clear();
    const auto labels = pred.labels();
    std::size_t e = 0, c = 0;
    while (e < row.size() || c < labels.size()) {
        label_t j;
        double v = 0.0;
        if (c == labels.size() || (e < row.size() && row.indices[e] < labels[c])) {
            j = row.indices[e];
            v = row.values[e++];
        } else if (e == row.size() || labels[c] < row.indices[e]) {
            j = labels[c++];
        } else {
            j = row.indices[e];
            v = row.values[e++];
            ++c;
        }
        out.push_back({j, 0.0});
        eta_out.push_back(v);
    }
}

PredictionRow top_k_of_row(RowView row, std::size_t k, std::size_t m) {
    std::vector<GainEntry> g(row.size());
    for (std::size_t e = 0; e < row.size(); ++e) g[e] = {row.indices[e], row.values[e]};
    return select_top_k(std::span<const GainEntry>(g), k, m);
}

// Gain of predicting label j for the row being re-decided, given the label's
// statistics with the row's own contribution (if any) still included.
class GainModel {
public:
    GainModel(const MetricSpec& metric, const RunningStats& stats)
        : metric_(metric), stats_(stats), m_(stats.labels()), linear_(metric.is_linear()) {}

    // Fixes the linear coefficients for the current q_hat.
    void refresh_linear() {
        if (!linear_) return;
        w11_.resize(m_);
        w01_.resize(m_);
        for (label_t j = 0; j < m_; ++j) {
            const auto c = linear_coefficients(metric_, j, m_, stats_.q_hat[j]);
            w11_[j] = c.w11;
            w01_[j] = c.w01;
        }
    }

    double gain(label_t j, double eta, bool in_row) const {
        if (linear_) return eta * w11_[j] + (1.0 - eta) * w01_[j];
        const double w = stats_.inv_n();
        const std::size_t own = in_row ? 1 : 0;
        const std::size_t count = stats_.predicted[j] - own;
        const double t = count == 0 ? 0.0 : stats_.t_hat[j] - (in_row ? eta * w : 0.0);
        const double q = stats_.q_hat[j];
        const double with = label_utility(metric_, j, m_, t + eta * w, static_cast<double>(count + 1) * w, q);
        const double without = label_utility(metric_, j, m_, t, static_cast<double>(count) * w, q);
        return with - without;
    }

private:
    const MetricSpec& metric_;
    const RunningStats& stats_;
    std::size_t m_;
    bool linear_;
    std::vector<double> w11_, w01_;
};

void check_bca_metric(const MetricSpec& metric) {
    auto unsupported = [](const MetricSpec& s) { return s.family() == MetricFamily::coverage; };
    if (unsupported(metric) ||
        (metric.family() == MetricFamily::mixed && (unsupported(metric.first()) || unsupported(metric.second()))))
        throw CapabilityError("coverage is optimized by the coverage-specific strategies, not by " +
                              metric.name());
}

void check_initial(const Predictions& initial, const SparseRowMatrix& probs, std::size_t k) {
    if (initial.size() != probs.rows())
        throw DimensionError("initial predictions have " + std::to_string(initial.size()) + " rows, expected " +
                             std::to_string(probs.rows()));
    validate_predictions(initial, probs.rows(), probs.cols(), k);
}

InferenceReport run_bca(const SparseRowMatrix& probs, const MetricSpec& metric, const InferenceConfig& cfg,
                        Rng& rng, Predictions preds, Clock::time_point start) {
    const std::size_t n = probs.rows();
    const std::size_t m = probs.cols();
    const bool sparse = cfg.k_prime > 0;

    RunningStats stats = stats_from_scratch(probs, preds);
    GainModel model(metric, stats);
    model.refresh_linear();

    InferenceReport report;
    double u_new = utility(metric, stats);
    report.objective_trace.push_back(u_new);
    double u_old = -std::numeric_limits<double>::infinity();

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    RowScratch scratch(sparse ? 0 : m);
    std::vector<double> gains(sparse ? 0 : m);
    std::vector<GainEntry> cand;
    std::vector<double> cand_eta;

    while (u_new > u_old + cfg.epsilon && report.passes < cfg.max_passes) {
        rng.shuffle(std::span<std::size_t>(order));
        for (std::size_t s : order) {
            const RowView row = probs.row(s);
            PredictionRow& cur = preds[s];
            PredictionRow next;
            if (sparse) {
                sparse_candidates(row, cur, cand, cand_eta);
                for (std::size_t c = 0; c < cand.size(); ++c)
                    cand[c].gain = model.gain(cand[c].label, cand_eta[c], cur.contains(cand[c].label));
                next = select_top_k(std::span<const GainEntry>(cand), cfg.k, m);
            } else {
                scratch.load(row, cur);
                for (label_t j = 0; j < m; ++j) gains[j] = model.gain(j, scratch.eta[j], scratch.current[j] != 0);
                scratch.clear(row, cur);
                next = select_top_k(std::span<const double>(gains), cfg.k);
            }
            if (next != cur) {
                stats.swap_row(row, cur, next);
                cur = std::move(next);
            }
        }
        ++report.passes;
        // Recomputed from scratch so that the trace carries no accumulated drift.
        stats = stats_from_scratch(probs, preds);
        u_old = u_new;
        u_new = utility(metric, stats);
        report.objective_trace.push_back(u_new);
    }
    report.predictions = std::move(preds);
    report.wall_time = seconds_since(start);
    return report;
}

}  // namespace

void validate_config(const InferenceConfig& cfg, std::size_t m) {
    if (cfg.k < 1) throw ConfigError("k must be at least 1");
    if (cfg.k > m)
        throw ConfigError("k = " + std::to_string(cfg.k) + " exceeds the number of labels " + std::to_string(m));
    if (cfg.k_prime != 0 && cfg.k_prime < cfg.k)
        throw ConfigError("k_prime = " + std::to_string(cfg.k_prime) + " is smaller than k = " +
                          std::to_string(cfg.k));
    if (!(cfg.epsilon >= 0.0)) throw ConfigError("epsilon must be non-negative");
    if (cfg.max_passes < 1) throw ConfigError("max_passes must be at least 1");
}

Predictions initial_predictions(const SparseRowMatrix& probs, const InferenceConfig& cfg, Rng& rng) {
    Predictions preds;
    preds.reserve(probs.rows());
    for (std::size_t i = 0; i < probs.rows(); ++i) {
        if (cfg.init == InitStrategy::random_k)
            preds.emplace_back(rng.sample_distinct(probs.cols(), cfg.k));
        else
            preds.push_back(top_k_of_row(probs.row(i), cfg.k, probs.cols()));
    }
    return preds;
}

InferenceReport weighted_topk_infer(const SparseRowMatrix& probs, std::span<const double> w11,
                                    std::span<const double> w01, const InferenceConfig& cfg) {
    const auto start = Clock::now();
    const std::size_t m = probs.cols();
    validate_config(cfg, m);
    check_weights(w11, m, "w11");
    check_weights(w01, m, "w01");
    const std::size_t n = probs.rows();

    const SparseRowMatrix truncated = cfg.k_prime > 0 ? truncate_rows(probs, cfg.k_prime) : SparseRowMatrix();
    const SparseRowMatrix& source = cfg.k_prime > 0 ? truncated : probs;

    InferenceReport report;
    report.predictions.resize(n);
    std::vector<double> row_gain(n, 0.0);
    parallel_for(n, cfg.threads, [&](std::size_t i) {
        const RowView row = source.row(i);
        PredictionRow pred;
        if (cfg.k_prime > 0) {
            std::vector<GainEntry> g(row.size());
            for (std::size_t e = 0; e < row.size(); ++e) {
                const label_t j = row.indices[e];
                g[e] = {j, row.values[e] * w11[j] + (1.0 - row.values[e]) * w01[j]};
            }
            pred = select_top_k(std::span<const GainEntry>(g), cfg.k, m);
        } else {
            std::vector<double> g(w01.begin(), w01.end());
            for (std::size_t e = 0; e < row.size(); ++e) {
                const label_t j = row.indices[e];
                g[j] = row.values[e] * w11[j] + (1.0 - row.values[e]) * w01[j];
            }
            pred = select_top_k(std::span<const double>(g), cfg.k);
        }
        double total = 0.0;
        for_each_predicted(row, pred.labels(),
                           [&](label_t j, double v) { total += v * w11[j] + (1.0 - v) * w01[j]; });
        row_gain[i] = total;
        report.predictions[i] = std::move(pred);
    });
    const double sum = std::accumulate(row_gain.begin(), row_gain.end(), 0.0);
    report.objective_trace.push_back(n == 0 ? 0.0 : sum / static_cast<double>(n));
    report.passes = 1;
    report.wall_time = seconds_since(start);
    return report;
}

InferenceReport topk_infer(const SparseRowMatrix& probs, const InferenceConfig& cfg) {
    const std::vector<double> ones(probs.cols(), 1.0);
    const std::vector<double> zeros(probs.cols(), 0.0);
    return weighted_topk_infer(probs, ones, zeros, cfg);
}

InferenceReport bca_infer(const SparseRowMatrix& probs, const MetricSpec& metric, const InferenceConfig& cfg) {
    const auto start = Clock::now();
    validate_config(cfg, probs.cols());
    check_metric_labels(metric, probs.cols());
    check_bca_metric(metric);
    Rng rng(cfg.seed);
    if (cfg.k_prime > 0) {
        const SparseRowMatrix truncated = truncate_rows(probs, cfg.k_prime);
        return run_bca(truncated, metric, cfg, rng, initial_predictions(truncated, cfg, rng), start);
    }
    return run_bca(probs, metric, cfg, rng, initial_predictions(probs, cfg, rng), start);
}

InferenceReport bca_infer(const SparseRowMatrix& probs, const MetricSpec& metric, const InferenceConfig& cfg,
                          const Predictions& initial) {
    const auto start = Clock::now();
    validate_config(cfg, probs.cols());
    check_metric_labels(metric, probs.cols());
    check_bca_metric(metric);
    check_initial(initial, probs, cfg.k);
    Rng rng(cfg.seed);
    if (cfg.k_prime > 0) return run_bca(truncate_rows(probs, cfg.k_prime), metric, cfg, rng, initial, start);
    return run_bca(probs, metric, cfg, rng, initial, start);
}

InferenceReport greedy_infer(const SparseRowMatrix& probs, const MetricSpec& metric, const InferenceConfig& cfg) {
    const auto start = Clock::now();
    const std::size_t m = probs.cols();
    validate_config(cfg, m);
    check_metric_labels(metric, m);
    check_bca_metric(metric);

    const SparseRowMatrix truncated = cfg.k_prime > 0 ? truncate_rows(probs, cfg.k_prime) : SparseRowMatrix();
    const SparseRowMatrix& source = cfg.k_prime > 0 ? truncated : probs;
    const std::size_t n = source.rows();

    RunningStats stats;
    stats.n = n;
    stats.t_hat.assign(m, 0.0);
    stats.p.assign(m, 0.0);
    stats.q_hat.assign(m, 0.0);
    stats.predicted.assign(m, 0);
    const double w = stats.inv_n();
    const bool linear = metric.is_linear();

    auto gain = [&](label_t j, double eta) {
        if (linear) {
            const auto c = linear_coefficients(metric, j, m, stats.q_hat[j]);
            return eta * c.w11 + (1.0 - eta) * c.w01;
        }
        const std::size_t count = stats.predicted[j];
        const double t = stats.t_hat[j];
        const double q = stats.q_hat[j];
        return label_utility(metric, j, m, t + eta * w, static_cast<double>(count + 1) * w, q) -
               label_utility(metric, j, m, t, static_cast<double>(count) * w, q);
    };

    InferenceReport report;
    report.predictions.resize(n);
    std::vector<double> gains(cfg.k_prime > 0 ? 0 : m);
    std::vector<double> eta(cfg.k_prime > 0 ? 0 : m, 0.0);
    std::vector<GainEntry> cand;
    for (std::size_t i = 0; i < n; ++i) {
        const RowView row = source.row(i);
        for (std::size_t e = 0; e < row.size(); ++e) stats.q_hat[row.indices[e]] += w * row.values[e];
        PredictionRow pred;
        if (cfg.k_prime > 0) {
            cand.resize(row.size());
            for (std::size_t e = 0; e < row.size(); ++e) cand[e] = {row.indices[e], gain(row.indices[e], row.values[e])};
            pred = select_top_k(std::span<const GainEntry>(cand), cfg.k, m);
        } else {
            for (std::size_t e = 0; e < row.size(); ++e) eta[row.indices[e]] = row.values[e];
            for (label_t j = 0; j < m; ++j) gains[j] = gain(j, eta[j]);
            for (std::size_t e = 0; e < row.size(); ++e) eta[row.indices[e]] = 0.0;
            pred = select_top_k(std::span<const double>(gains), cfg.k);
        }
        stats.add_row(row, pred);
        report.predictions[i] = std::move(pred);
    }
    report.objective_trace.push_back(utility(metric, stats_from_scratch(source, report.predictions)));
    report.passes = 1;
    report.wall_time = seconds_since(start);
    return report;
}

}  // namespace etuk
