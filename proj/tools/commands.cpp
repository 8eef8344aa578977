#include "commands.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "etuk/astar.hpp"
#include "etuk/errors.hpp"
#include "etuk/eval.hpp"
#include "etuk/inference.hpp"
#include "etuk/label_tree.hpp"
#include "etuk/matrix_io.hpp"
#include "etuk/metric.hpp"
#include "etuk/oracle.hpp"
#include "etuk/parallel.hpp"
#include "etuk/synthetic.hpp"
#include "etuk/weights.hpp"

namespace etuk::cli {
namespace {

namespace fs = std::filesystem;

std::ofstream open_output(const fs::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    return out;
}

void write_text(const fs::path& path, const std::string& text) {
    auto out = open_output(path);
    out << text;
    if (!out) throw IoError("failed writing '" + path.string() + "'");
}

void save_predictions(const fs::path& path, const Predictions& preds, std::size_t m) {
    save_sparse_matrix(path, predictions_to_matrix(preds, m), MatrixKind::binary);
}

std::string trace_text(const InferenceReport& r) {
    std::ostringstream out;
    for (std::size_t i = 0; i < r.objective_trace.size(); ++i)
        out << i << ' ' << format_real(r.objective_trace[i]) << '\n';
    return out.str();
}

// ---------------------------------------------------------------- infer

struct InferArgs {
    std::string strategy = "topk";
    std::string metric = "macro-f:1.0";
    std::string probs, out, trace;
    std::string weights_path, priors_path, labels_path, sweep, sweep_out;
    std::size_t n_train = 0;
    double ps_a = 0.55, ps_b = 1.5, power_beta = 0.5;
    std::string init = "random";
    InferenceConfig cfg{.threads = 0};
};

std::vector<double> scheme_weights(const InferArgs& a, WeightKind kind, std::size_t m) {
    if (a.priors_path.empty()) throw ConfigError("--priors is required for strategy " + a.strategy);
    WeightScheme scheme;
    scheme.kind = kind;
    scheme.a = a.ps_a;
    scheme.b = a.ps_b;
    scheme.beta_exp = a.power_beta;
    scheme.n_train = a.n_train;
    scheme.priors = load_vector(a.priors_path);
    if (scheme.priors.size() != m)
        throw DimensionError("priors have " + std::to_string(scheme.priors.size()) + " entries, expected " +
                             std::to_string(m));
    return weight_compute(scheme, a.cfg.k);
}

InferenceReport run_strategy(const InferArgs& a, const SparseRowMatrix& probs, const std::string& metric_text) {
    const std::size_t m = probs.cols();
    const std::vector<double> zeros(m, 0.0);
    const auto& s = a.strategy;
    if (s == "topk") return topk_infer(probs, a.cfg);
    if (s == "weighted-topk") {
        if (a.weights_path.empty()) throw ConfigError("--weights is required for strategy weighted-topk");
        const auto w = load_vector(a.weights_path);
        return weighted_topk_infer(probs, w, zeros, a.cfg);
    }
    if (s == "ps-topk") return weighted_topk_infer(probs, scheme_weights(a, WeightKind::propensity, m), zeros, a.cfg);
    if (s == "power-topk") return weighted_topk_infer(probs, scheme_weights(a, WeightKind::power_law, m), zeros, a.cfg);
    if (s == "log-topk") return weighted_topk_infer(probs, scheme_weights(a, WeightKind::log, m), zeros, a.cfg);
    if (s == "bca-cov") return bca_coverage_infer(probs, a.cfg);
    if (s == "greedy-cov") return greedy_coverage_infer(probs, a.cfg);
    if (s == "bca" || s == "greedy") {
        const MetricSpec metric = parse_metric(metric_text, a.cfg.k);
        if (metric.family() == MetricFamily::coverage)
            return s == "bca" ? bca_coverage_infer(probs, a.cfg) : greedy_coverage_infer(probs, a.cfg);
        return s == "bca" ? bca_infer(probs, metric, a.cfg) : greedy_infer(probs, metric, a.cfg);
    }
    throw ConfigError("unknown strategy '" + s + "'");
}

std::vector<double> parse_sweep(const std::string& text) {
    std::vector<double> parts;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ':')) {
        try {
            std::size_t used = 0;
            parts.push_back(std::stod(tok, &used));
            if (used != tok.size()) throw std::invalid_argument(tok);
        } catch (const std::exception&) {
            throw ConfigError("bad --alpha-sweep '" + text + "', expected <from>:<to>:<step>");
        }
    }
    if (parts.size() != 3 || !(parts[2] > 0.0) || parts[0] > parts[1] || parts[0] < 0.0 || parts[1] > 1.0)
        throw ConfigError("bad --alpha-sweep '" + text + "', expected <from>:<to>:<step> within [0, 1]");
    std::vector<double> alphas;
    for (std::size_t i = 0;; ++i) {
        const double a = std::round((parts[0] + static_cast<double>(i) * parts[2]) * 1e9) / 1e9;
        if (a > parts[1] + 1e-12) break;
        alphas.push_back(std::min(a, 1.0));
    }
    return alphas;
}

void run_sweep(const InferArgs& a, const SparseRowMatrix& probs) {
    if (a.strategy != "bca" && a.strategy != "greedy")
        throw ConfigError("--alpha-sweep needs strategy bca or greedy");
    if (a.labels_path.empty()) throw ConfigError("--alpha-sweep needs --labels");
    const auto labels = load_sparse_matrix(a.labels_path, MatrixKind::binary);
    const std::string tsv_path = a.sweep_out.empty() ? a.out + ".sweep.tsv" : a.sweep_out;
    std::ostringstream tsv;
    bool header = false;
    for (double alpha : parse_sweep(a.sweep)) {
        const std::string metric = "mixed:" + format_real(alpha) + ":instance-p:" + a.metric;
        const InferenceReport r = run_strategy(a, probs, metric);
        const std::string path = a.out + ".alpha-" + format_real(alpha);
        save_predictions(path, r.predictions, probs.cols());
        const EvalReport e = evaluate(r.predictions, labels, a.cfg.k);
        if (!header) {
            tsv << "alpha";
            for (const auto& [key, value] : e.entries()) tsv << '\t' << key;
            tsv << '\n';
            header = true;
        }
        tsv << format_real(alpha);
        for (const auto& [key, value] : e.entries()) tsv << '\t' << format_real(value);
        tsv << '\n';
        std::cout << "alpha=" << format_real(alpha) << " passes=" << r.passes << " wall_time=" << r.wall_time
                  << "s\n";
    }
    write_text(tsv_path, tsv.str());
}

void cmd_infer(const InferArgs& a) {
    const auto probs = load_sparse_matrix(a.probs, MatrixKind::probabilities);
    if (!a.sweep.empty()) {
        run_sweep(a, probs);
        return;
    }
    const InferenceReport r = run_strategy(a, probs, a.metric);
    save_predictions(a.out, r.predictions, probs.cols());
    write_text(a.trace.empty() ? a.out + ".trace" : a.trace, trace_text(r));
    std::cout << "passes=" << r.passes << " objective=" << format_real(r.objective_trace.back())
              << " wall_time=" << r.wall_time << "s\n";
}

// ----------------------------------------------------------------- eval

struct EvalArgs {
    std::string preds, labels, ps_weights, out;
    std::size_t k = 1;
    bool json = false;
};

void cmd_eval(const EvalArgs& a) {
    const auto labels = load_sparse_matrix(a.labels, MatrixKind::binary);
    const auto pm = load_sparse_matrix(a.preds, MatrixKind::binary);
    if (pm.cols() != labels.cols())
        throw DimensionError("predictions have " + std::to_string(pm.cols()) + " columns, labels " +
                             std::to_string(labels.cols()));
    Predictions preds;
    preds.reserve(pm.rows());
    for (std::size_t i = 0; i < pm.rows(); ++i) {
        const auto row = pm.row(i);
        preds.emplace_back(std::vector<label_t>(row.indices.begin(), row.indices.end()));
    }
    std::optional<std::vector<double>> w;
    if (!a.ps_weights.empty()) w = load_vector(a.ps_weights);
    const EvalReport r = w ? evaluate(preds, labels, a.k, std::span<const double>(*w)) : evaluate(preds, labels, a.k);
    const std::string text = a.json ? r.to_json() : r.to_text();
    if (a.out.empty())
        std::cout << text;
    else
        write_text(a.out, text);
}

// --------------------------------------------------------------- oracle

struct OracleArgs {
    std::string metric, probs, out, value_out;
    std::size_t k = 1;
    bool exact = false;
};

void cmd_oracle(const OracleArgs& a) {
    const auto probs = load_sparse_matrix(a.probs, MatrixKind::probabilities);
    const MetricSpec metric = parse_metric(a.metric, a.k);
    const OracleResult r = a.exact ? brute_force_etu(probs, metric, a.k) : brute_force_semi_etu(probs, metric, a.k);
    save_predictions(a.out, r.best_preds, probs.cols());
    write_text(a.value_out.empty() ? a.out + ".value" : a.value_out, format_real(r.best_value) + "\n");
    std::cout << "value=" << format_real(r.best_value) << " candidates=" << r.candidates_evaluated << '\n';
}

// -------------------------------------------------------------- weights

struct WeightsArgs {
    std::string scheme = "propensity", priors, out;
    std::size_t n_train = 0;
    std::size_t k = 1;
};

void cmd_weights(const WeightsArgs& a) {
    const WeightScheme scheme = parse_weight_scheme(a.scheme, a.n_train, load_vector(a.priors));
    const auto w = weight_compute(scheme, a.k);
    if (a.out.empty())
        write_vector(std::cout, w);
    else
        save_vector(a.out, w);
}

// ------------------------------------------------------------------ plt

struct PltArgs {
    std::string tree, scores, out, gain = "weighted", weights, t_hat, p;
    std::size_t n = 0;
    std::size_t k = 1;
    bool check_bounds = false;
    unsigned threads = 0;
};

void cmd_plt(const PltArgs& a) {
    const LabelTree tree = load_label_tree(a.tree);
    const auto scores = load_node_scores(a.scores, tree.nodes());
    GainSpec gain;
    if (a.gain == "weighted") {
        std::vector<double> w = a.weights.empty() ? std::vector<double>(tree.labels(), 1.0) : load_vector(a.weights);
        gain = GainSpec::weighted(std::move(w));
    } else if (a.gain == "macro-p") {
        if (a.t_hat.empty() || a.p.empty() || a.n == 0)
            throw ConfigError("--gain macro-p needs --t-hat, --p and --n");
        gain = GainSpec::macro_precision(load_vector(a.t_hat), load_vector(a.p), a.n);
    } else {
        throw ConfigError("unknown gain '" + a.gain + "', expected weighted or macro-p");
    }
    const SubtreeBound bound(tree, gain);
    Predictions preds(scores.size());
    std::vector<std::size_t> expansions(scores.size(), 0);
    parallel_for(scores.size(), a.threads, [&](std::size_t i) {
        auto r = astar_top_k(tree, scores[i], bound, a.k, a.check_bounds);
        preds[i] = std::move(r.labels);
        expansions[i] = r.expansions;
    });
    save_predictions(a.out, preds, tree.labels());
    std::size_t total = 0;
    for (auto e : expansions) total += e;
    std::cout << "instances=" << scores.size() << " expansions=" << total
              << " nodes=" << tree.nodes() * scores.size() << '\n';
}

// ---------------------------------------------------------------- synth

struct SynthArgs {
    SyntheticSpec spec;
    std::string out_dir = ".";
};

void cmd_synth(const SynthArgs& a) {
    const SyntheticData d = generate_synthetic(a.spec);
    const fs::path dir(a.out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create directory '" + dir.string() + "': " + ec.message());
    save_sparse_matrix(dir / "probs.txt", d.probs, MatrixKind::probabilities);
    save_sparse_matrix(dir / "labels.txt", d.labels, MatrixKind::binary);
    save_vector(dir / "priors.txt", d.priors);
    std::cout << "wrote " << (dir / "probs.txt").string() << ", " << (dir / "labels.txt").string() << ", "
              << (dir / "priors.txt").string() << '\n';
}

}  // namespace

void register_infer(CLI::App& app) {
    auto a = std::make_shared<InferArgs>();
    auto* sub = app.add_subcommand("infer", "Predict k labels per instance");
    sub->add_option("--strategy", a->strategy,
                    "topk | weighted-topk | ps-topk | power-topk | log-topk | bca | bca-cov | greedy | greedy-cov")
        ->capture_default_str();
    sub->add_option("--metric", a->metric, "Metric for bca/greedy")->capture_default_str();
    sub->add_option("--probs", a->probs, "Label probability matrix")->required();
    sub->add_option("--out", a->out, "Prediction output file")->required();
    sub->add_option("--trace", a->trace, "Objective trace file (default <out>.trace)");
    sub->add_option("--k", a->cfg.k, "Labels per instance")->capture_default_str();
    sub->add_option("--k-prime", a->cfg.k_prime, "Shortlist size, 0 = none")->capture_default_str();
    sub->add_option("--epsilon", a->cfg.epsilon, "Convergence threshold")->capture_default_str();
    sub->add_option("--seed", a->cfg.seed, "Random seed")->capture_default_str();
    sub->add_option("--init", a->init, "random | topk")->capture_default_str();
    sub->add_option("--max-passes", a->cfg.max_passes, "Pass limit")->capture_default_str();
    sub->add_option("--threads", a->cfg.threads, "Worker threads, 0 = all cores")->capture_default_str();
    sub->add_option("--weights", a->weights_path, "Per-label weights for weighted-topk");
    sub->add_option("--priors", a->priors_path, "Label priors for ps/power/log-topk");
    sub->add_option("--n-train", a->n_train, "Training set size for propensity weights");
    sub->add_option("--ps-a", a->ps_a, "Propensity parameter a")->capture_default_str();
    sub->add_option("--ps-b", a->ps_b, "Propensity parameter b")->capture_default_str();
    sub->add_option("--power-beta", a->power_beta, "Power-law exponent")->capture_default_str();
    sub->add_option("--alpha-sweep", a->sweep, "<from>:<to>:<step>, mixes instance-p with --metric");
    sub->add_option("--labels", a->labels_path, "Ground truth for --alpha-sweep reports");
    sub->add_option("--sweep-out", a->sweep_out, "Sweep report (default <out>.sweep.tsv)");
    sub->callback([a] {
        if (a->init == "random")
            a->cfg.init = InitStrategy::random_k;
        else if (a->init == "topk")
            a->cfg.init = InitStrategy::top_k;
        else
            throw ConfigError("unknown --init '" + a->init + "', expected random or topk");
        cmd_infer(*a);
    });
}

void register_eval(CLI::App& app) {
    auto a = std::make_shared<EvalArgs>();
    auto* sub = app.add_subcommand("eval", "Evaluate predictions with @k metrics");
    sub->add_option("--preds", a->preds, "Prediction matrix")->required();
    sub->add_option("--labels", a->labels, "Ground-truth label matrix")->required();
    sub->add_option("--k", a->k, "Labels per instance")->required();
    sub->add_option("--ps-weights", a->ps_weights, "Propensity weights, adds psP@k");
    sub->add_flag("--json", a->json, "Write a JSON object instead of key=value lines");
    sub->add_option("--out", a->out, "Output file (default stdout)");
    sub->callback([a] { cmd_eval(*a); });
}

void register_oracle(CLI::App& app) {
    auto a = std::make_shared<OracleArgs>();
    auto* sub = app.add_subcommand("oracle", "Exhaustive optimum for tiny instances");
    sub->add_option("--metric", a->metric, "Metric")->required();
    sub->add_option("--k", a->k, "Labels per instance")->required();
    sub->add_option("--probs", a->probs, "Label probability matrix")->required();
    sub->add_option("--out", a->out, "Best prediction output file")->required();
    sub->add_option("--value-out", a->value_out, "Best value file (default <out>.value)");
    sub->add_flag("--exact", a->exact, "Maximize the exact expectation instead of the semi-empirical objective");
    sub->callback([a] { cmd_oracle(*a); });
}

void register_weights(CLI::App& app) {
    auto a = std::make_shared<WeightsArgs>();
    auto* sub = app.add_subcommand("weights", "Per-label weights from label priors");
    sub->add_option("--scheme", a->scheme, "propensity[:a:b] | power[:beta] | log")->capture_default_str();
    sub->add_option("--priors", a->priors, "Label priors, one per line")->required();
    sub->add_option("--n-train", a->n_train, "Training set size");
    sub->add_option("--k", a->k, "Labels per instance")->capture_default_str();
    sub->add_option("--out", a->out, "Output file (default stdout)");
    sub->callback([a] { cmd_weights(*a); });
}

void register_plt(CLI::App& app) {
    auto a = std::make_shared<PltArgs>();
    auto* sub = app.add_subcommand("plt", "Top-k search in a probabilistic label tree");
    sub->add_option("--tree", a->tree, "Tree file")->required();
    sub->add_option("--scores", a->scores, "Node score file")->required();
    sub->add_option("--k", a->k, "Labels per instance")->capture_default_str();
    sub->add_option("--out", a->out, "Prediction output file")->required();
    sub->add_option("--gain", a->gain, "weighted | macro-p")->capture_default_str();
    sub->add_option("--weights", a->weights, "Label weights for --gain weighted (default all 1)");
    sub->add_option("--t-hat", a->t_hat, "Expected true positives per label for --gain macro-p");
    sub->add_option("--p", a->p, "Predicted positive rate per label for --gain macro-p");
    sub->add_option("--n", a->n, "Number of instances for --gain macro-p");
    sub->add_flag("--check-bounds", a->check_bounds, "Verify every expanded node's priority");
    sub->add_option("--threads", a->threads, "Worker threads, 0 = all cores")->capture_default_str();
    sub->callback([a] { cmd_plt(*a); });
}

void register_synth(CLI::App& app) {
    auto a = std::make_shared<SynthArgs>();
    auto* sub = app.add_subcommand("synth", "Generate a long-tailed synthetic dataset");
    sub->add_option("--n", a->spec.n, "Instances")->capture_default_str();
    sub->add_option("--m", a->spec.m, "Labels")->capture_default_str();
    sub->add_option("--power", a->spec.power, "Power-law exponent of label frequencies")->capture_default_str();
    sub->add_option("--avg-labels", a->spec.avg_labels, "Expected labels per instance")->capture_default_str();
    sub->add_option("--candidates", a->spec.candidates, "Labels with non-zero probability per instance")
        ->capture_default_str();
    sub->add_option("--seed", a->spec.seed, "Random seed")->capture_default_str();
    sub->add_option("--out-dir", a->out_dir, "Directory for probs.txt, labels.txt, priors.txt")
        ->capture_default_str();
    sub->callback([a] { cmd_synth(*a); });
}

}  // namespace etuk::cli
