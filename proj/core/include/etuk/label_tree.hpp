#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

#include "etuk/sparse_matrix.hpp"

namespace etuk {

using node_t = std::uint32_t;

// Rooted tree whose leaves are in one-to-one correspondence with the labels.
// Every internal node has at least two children.
class LabelTree {
public:
    // parents[v] is the parent of node v, -1 for the root. leaves holds
    // (leaf node, label) pairs. Throws ValidationError when the structure is
    // not a valid label tree.
    LabelTree(const std::vector<std::int64_t>& parents, const std::vector<std::pair<node_t, label_t>>& leaves,
              std::size_t num_labels);

    std::size_t nodes() const noexcept { return parent_.size(); }
    std::size_t labels() const noexcept { return leaf_of_label_.size(); }
    node_t root() const noexcept { return root_; }
    // The root is its own parent.
    node_t parent(node_t v) const { return parent_.at(v); }
    std::span<const node_t> children(node_t v) const;
    bool is_leaf(node_t v) const { return children(v).empty(); }
    label_t label_of(node_t leaf) const;
    node_t leaf_of(label_t label) const { return leaf_of_label_.at(label); }

    // Labels of the leaves below v, contiguous in a depth-first leaf order.
    std::span<const label_t> labels_below(node_t v) const;
    label_t min_label_below(node_t v) const { return min_label_.at(v); }

    // Root-to-node path, root first.
    std::vector<node_t> path(node_t v) const;

private:
    std::vector<node_t> parent_;
    std::vector<std::size_t> child_ptr_;
    std::vector<node_t> child_list_;
    std::vector<std::int64_t> label_of_node_;
    std::vector<node_t> leaf_of_label_;
    std::vector<label_t> leaf_order_;
    std::vector<std::size_t> leaf_begin_, leaf_end_;
    std::vector<label_t> min_label_;
    node_t root_ = 0;
};

// Line 1: `<num_nodes> <num_labels>`; line 2: parent per node (-1 for the
// root); line 3: `<leaf_node>:<label>` pairs. ParseError / ValidationError.
LabelTree read_label_tree(std::istream& in);
LabelTree load_label_tree(const std::filesystem::path& path);
void write_label_tree(std::ostream& out, const LabelTree& tree);

// One row per instance of `node:score` pairs covering every node exactly once
// (any order), scores in [0, 1]. Blank lines are skipped.
std::vector<std::vector<double>> read_node_scores(std::istream& in, std::size_t num_nodes);
std::vector<std::vector<double>> load_node_scores(const std::filesystem::path& path, std::size_t num_nodes);
void write_node_scores(std::ostream& out, const std::vector<std::vector<double>>& scores);

// Product of the conditional scores on the root-to-node path.
double path_prob(const LabelTree& tree, std::span<const double> scores, node_t node);

}  // namespace etuk
