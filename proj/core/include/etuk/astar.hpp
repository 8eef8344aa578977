#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "etuk/label_tree.hpp"
#include "etuk/prediction.hpp"

namespace etuk {

// Per-label gain g_j(eta) of predicting label j when its marginal probability
// is eta. Both kinds are non-decreasing in eta.
class GainSpec {
public:
    // g_j(eta) = w_j * eta, w_j >= 0.
    static GainSpec weighted(std::vector<double> w);
    // g_j(eta) = prec(t_j + eta/n, p_j + 1/n) - prec(t_j, p_j), prec(t, p) = t/p
    // with 0/0 := 0.
    static GainSpec macro_precision(std::vector<double> t_hat, std::vector<double> p, std::size_t n);

    double gain(label_t j, double eta) const;
    bool is_weighted() const noexcept { return kind_ == Kind::weighted; }
    double weight(label_t j) const;
    std::size_t labels() const noexcept { return size_; }

    // Largest gain over the given labels at probability eta.
    double max_gain(std::span<const label_t> labels, double eta) const;

private:
    enum class Kind { weighted, macro_precision };
    Kind kind_ = Kind::weighted;
    std::size_t size_ = 0;
    std::vector<double> w_;
    std::vector<double> t_, p_;
    double inv_n_ = 0.0;
};

// Upper bound on the gain of any label below a node at the node's path
// probability. Weighted gains use the largest weight of each subtree
// (precomputed); other gains scan the subtree's labels. Keeps references to
// the tree and the gain, which must outlive it.
class SubtreeBound {
public:
    SubtreeBound(const LabelTree& tree, const GainSpec& gain);
    double operator()(node_t v, double prob) const;
    const GainSpec& gain() const noexcept { return *gain_; }

private:
    const LabelTree* tree_;
    const GainSpec* gain_;
    std::vector<double> max_weight_;
};

struct TreeSearchResult {
    PredictionRow labels;
    std::size_t expansions = 0;
};

// Best-first search for the k labels with the largest g_j(path probability
// of leaf j). A node's priority is the best gain any label below it could
// reach at the node's path probability, which never underestimates. Ties
// go to the node whose subtree holds the smaller label, then to the smaller
// node id, so the result equals a full leaf scan with index tie-breaking.
// expansions counts queue pops. With check_bounds, every popped internal
// node's priority is compared against its true best leaf (std::logic_error).
TreeSearchResult astar_top_k(const LabelTree& tree, std::span<const double> scores, const GainSpec& gain,
                             std::size_t k, bool check_bounds = false);

// Reuses a bound across instances searched in the same tree.
TreeSearchResult astar_top_k(const LabelTree& tree, std::span<const double> scores, const SubtreeBound& bound,
                             std::size_t k, bool check_bounds = false);

// Reference: scores every leaf; expansions = number of nodes.
TreeSearchResult exhaustive_top_k(const LabelTree& tree, std::span<const double> scores, const GainSpec& gain,
                                  std::size_t k);

}  // namespace etuk
