#include "etuk/astar.hpp"

#include <algorithm>
#include <queue>
#include <stdexcept>
#include <string>

#include "etuk/errors.hpp"
#include "etuk/select_top_k.hpp"

namespace etuk {
namespace {

struct QueueEntry {
    double priority;
    label_t min_label;
    node_t node;
    double prob;
};

// std::priority_queue pops the largest element; "less" means popped later.
struct PopsLater {
    bool operator()(const QueueEntry& a, const QueueEntry& b) const {
        if (a.priority != b.priority) return a.priority < b.priority;
        if (a.min_label != b.min_label) return a.min_label > b.min_label;
        return a.node > b.node;
    }
};

void check_inputs(const LabelTree& tree, std::span<const double> scores, const GainSpec& gain, std::size_t k) {
    if (scores.size() != tree.nodes())
        throw DimensionError("score row has " + std::to_string(scores.size()) + " entries for " +
                             std::to_string(tree.nodes()) + " nodes");
    if (gain.labels() != tree.labels())
        throw DimensionError("gain covers " + std::to_string(gain.labels()) + " labels, tree has " +
                             std::to_string(tree.labels()));
    if (k < 1 || k > tree.labels())
        throw ConfigError("k = " + std::to_string(k) + " is not in [1, " + std::to_string(tree.labels()) + "]");
}

double best_leaf_below(const LabelTree& tree, std::span<const double> scores, const GainSpec& gain, node_t v,
                       double prob) {
    if (tree.is_leaf(v)) return gain.gain(tree.label_of(v), prob);
    double best = -std::numeric_limits<double>::infinity();
    for (node_t c : tree.children(v)) best = std::max(best, best_leaf_below(tree, scores, gain, c, prob * scores[c]));
    return best;
}

}  // namespace

GainSpec GainSpec::weighted(std::vector<double> w) {
    for (double x : w)
        if (!(x >= 0.0)) throw ConfigError("tree search weights must be non-negative");
    GainSpec g;
    g.kind_ = Kind::weighted;
    g.size_ = w.size();
    g.w_ = std::move(w);
    return g;
}

GainSpec GainSpec::macro_precision(std::vector<double> t_hat, std::vector<double> p, std::size_t n) {
    if (t_hat.size() != p.size()) throw DimensionError("t_hat and p differ in length");
    if (n == 0) throw ConfigError("macro-precision gain needs n >= 1");
    GainSpec g;
    g.kind_ = Kind::macro_precision;
    g.size_ = p.size();
    g.t_ = std::move(t_hat);
    g.p_ = std::move(p);
    g.inv_n_ = 1.0 / static_cast<double>(n);
    return g;
}

double GainSpec::gain(label_t j, double eta) const {
    if (kind_ == Kind::weighted) return w_[j] * eta;
    const double t = t_[j];
    const double p = p_[j];
    const double before = p > 0.0 ? t / p : 0.0;
    return (t + eta * inv_n_) / (p + inv_n_) - before;
}

double GainSpec::weight(label_t j) const {
    if (kind_ != Kind::weighted) throw CapabilityError("gain has no per-label weight");
    return w_.at(j);
}

double GainSpec::max_gain(std::span<const label_t> labels, double eta) const {
    double best = -std::numeric_limits<double>::infinity();
    for (label_t j : labels) best = std::max(best, gain(j, eta));
    return best;
}

SubtreeBound::SubtreeBound(const LabelTree& tree, const GainSpec& gain) : tree_(&tree), gain_(&gain) {
    if (gain.labels() != tree.labels())
        throw DimensionError("gain covers " + std::to_string(gain.labels()) + " labels, tree has " +
                             std::to_string(tree.labels()));
    if (!gain.is_weighted()) return;
    max_weight_.assign(tree.nodes(), 0.0);
    for (node_t v = 0; v < tree.nodes(); ++v)
        for (label_t j : tree.labels_below(v)) max_weight_[v] = std::max(max_weight_[v], gain.weight(j));
}

double SubtreeBound::operator()(node_t v, double prob) const {
    if (tree_->is_leaf(v)) return gain_->gain(tree_->label_of(v), prob);
    if (!max_weight_.empty()) return max_weight_[v] * prob;
    return gain_->max_gain(tree_->labels_below(v), prob);
}

TreeSearchResult astar_top_k(const LabelTree& tree, std::span<const double> scores, const GainSpec& gain,
                             std::size_t k, bool check_bounds) {
    return astar_top_k(tree, scores, SubtreeBound(tree, gain), k, check_bounds);
}

TreeSearchResult astar_top_k(const LabelTree& tree, std::span<const double> scores, const SubtreeBound& bound,
                             std::size_t k, bool check_bounds) {
    const GainSpec& gain = bound.gain();
    check_inputs(tree, scores, gain, k);
    const auto& priority = bound;

    std::priority_queue<QueueEntry, std::vector<QueueEntry>, PopsLater> queue;
    const node_t root = tree.root();
    const double root_prob = scores[root];
    queue.push({priority(root, root_prob), tree.min_label_below(root), root, root_prob});

    TreeSearchResult result;
    std::vector<label_t> picked;
    picked.reserve(k);
    while (!queue.empty() && picked.size() < k) {
        const QueueEntry top = queue.top();
        queue.pop();
        ++result.expansions;
        if (tree.is_leaf(top.node)) {
            picked.push_back(tree.label_of(top.node));
            continue;
        }
        if (check_bounds) {
            const double truth = best_leaf_below(tree, scores, gain, top.node, top.prob);
            if (top.priority < truth)
                throw std::logic_error("priority of node " + std::to_string(top.node) +
                                       " underestimates its best leaf");
        }
        for (node_t c : tree.children(top.node)) {
            const double prob = top.prob * scores[c];
            queue.push({priority(c, prob), tree.min_label_below(c), c, prob});
        }
    }
    result.labels = PredictionRow(std::move(picked));
    return result;
}

TreeSearchResult exhaustive_top_k(const LabelTree& tree, std::span<const double> scores, const GainSpec& gain,
                                  std::size_t k) {
    check_inputs(tree, scores, gain, k);
    std::vector<double> gains(tree.labels());
    // Top-down products, in the same order as the search multiplies them.
    std::vector<double> prob(tree.nodes(), 0.0);
    std::vector<node_t> stack{tree.root()};
    prob[tree.root()] = scores[tree.root()];
    while (!stack.empty()) {
        const node_t v = stack.back();
        stack.pop_back();
        if (tree.is_leaf(v)) gains[tree.label_of(v)] = gain.gain(tree.label_of(v), prob[v]);
        for (node_t c : tree.children(v)) {
            prob[c] = prob[v] * scores[c];
            stack.push_back(c);
        }
    }
    TreeSearchResult result;
    result.labels = select_top_k(std::span<const double>(gains), k);
    result.expansions = tree.nodes();
    return result;
}

}  // namespace etuk
