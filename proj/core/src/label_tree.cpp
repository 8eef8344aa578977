#include "etuk/label_tree.hpp"

#include <algorithm>
#include <istream>
#include <limits>
#include <ostream>
#include <string>

#include "etuk/errors.hpp"
#include "etuk/matrix_io.hpp"
#include "text.hpp"

namespace etuk {

using detail::next_token;
using detail::parse_number;

LabelTree::LabelTree(const std::vector<std::int64_t>& parents,
                     const std::vector<std::pair<node_t, label_t>>& leaves, std::size_t num_labels) {
    const std::size_t n = parents.size();
    if (n == 0) throw ValidationError("tree has no nodes");

    bool have_root = false;
    parent_.resize(n);
    std::vector<std::size_t> child_count(n, 0);
    for (std::size_t v = 0; v < n; ++v) {
        const auto p = parents[v];
        if (p == -1) {
            if (have_root) throw ValidationError("tree has more than one root");
            have_root = true;
            root_ = static_cast<node_t>(v);
            parent_[v] = static_cast<node_t>(v);
        } else if (p < 0 || static_cast<std::size_t>(p) >= n || static_cast<std::size_t>(p) == v) {
            throw ValidationError("node " + std::to_string(v) + " has invalid parent " + std::to_string(p));
        } else {
            parent_[v] = static_cast<node_t>(p);
            ++child_count[static_cast<std::size_t>(p)];
        }
    }
    if (!have_root) throw ValidationError("tree has no root (parent -1)");

    child_ptr_.assign(n + 1, 0);
    for (std::size_t v = 0; v < n; ++v) child_ptr_[v + 1] = child_ptr_[v] + child_count[v];
    child_list_.resize(n - 1);
    std::vector<std::size_t> fill(child_ptr_.begin(), child_ptr_.end() - 1);
    for (std::size_t v = 0; v < n; ++v)
        if (v != root_) child_list_[fill[parent_[v]]++] = static_cast<node_t>(v);

    for (std::size_t v = 0; v < n; ++v)
        if (child_count[v] == 1)
            throw ValidationError("internal node " + std::to_string(v) + " has a single child");

    label_of_node_.assign(n, -1);
    leaf_of_label_.assign(num_labels, 0);
    std::vector<char> label_seen(num_labels, 0);
    for (const auto& [node, label] : leaves) {
        if (node >= n) throw ValidationError("leaf node " + std::to_string(node) + " out of range");
        if (label >= num_labels) throw ValidationError("label " + std::to_string(label) + " out of range");
        if (child_count[node] != 0)
            throw ValidationError("node " + std::to_string(node) + " has children and cannot hold a label");
        if (label_of_node_[node] != -1)
            throw ValidationError("leaf " + std::to_string(node) + " is assigned twice");
        if (label_seen[label]) throw ValidationError("label " + std::to_string(label) + " is assigned twice");
        label_seen[label] = 1;
        label_of_node_[node] = label;
        leaf_of_label_[label] = node;
    }
    for (std::size_t v = 0; v < n; ++v)
        if (child_count[v] == 0 && label_of_node_[v] == -1)
            throw ValidationError("leaf " + std::to_string(v) + " has no label");
    for (std::size_t j = 0; j < num_labels; ++j)
        if (!label_seen[j]) throw ValidationError("label " + std::to_string(j) + " has no leaf");

    // Depth-first traversal from the root; any node left unvisited lies on a cycle.
    leaf_begin_.assign(n, 0);
    leaf_end_.assign(n, 0);
    min_label_.assign(n, 0);
    std::vector<char> visited(n, 0);
    std::vector<std::pair<node_t, bool>> stack{{root_, false}};
    while (!stack.empty()) {
        auto [v, done] = stack.back();
        stack.pop_back();
        if (done) {
            leaf_end_[v] = leaf_order_.size();
            label_t lo = std::numeric_limits<label_t>::max();
            for (auto c : children(v)) lo = std::min(lo, min_label_[c]);
            if (is_leaf(v)) lo = static_cast<label_t>(label_of_node_[v]);
            min_label_[v] = lo;
            continue;
        }
        if (visited[v]) throw ValidationError("tree contains a cycle");
        visited[v] = 1;
        leaf_begin_[v] = leaf_order_.size();
        if (is_leaf(v)) leaf_order_.push_back(static_cast<label_t>(label_of_node_[v]));
        stack.push_back({v, true});
        const auto ch = children(v);
        for (auto it = ch.rbegin(); it != ch.rend(); ++it) stack.push_back({*it, false});
    }
    if (std::find(visited.begin(), visited.end(), 0) != visited.end())
        throw ValidationError("tree contains a cycle unreachable from the root");
}

std::span<const node_t> LabelTree::children(node_t v) const {
    if (v >= nodes()) throw ValidationError("node " + std::to_string(v) + " out of range");
    return std::span<const node_t>(child_list_).subspan(child_ptr_[v], child_ptr_[v + 1] - child_ptr_[v]);
}

label_t LabelTree::label_of(node_t leaf) const {
    if (leaf >= nodes() || label_of_node_[leaf] < 0)
        throw ValidationError("node " + std::to_string(leaf) + " is not a leaf");
    return static_cast<label_t>(label_of_node_[leaf]);
}

std::span<const label_t> LabelTree::labels_below(node_t v) const {
    if (v >= nodes()) throw ValidationError("node " + std::to_string(v) + " out of range");
    return std::span<const label_t>(leaf_order_).subspan(leaf_begin_[v], leaf_end_[v] - leaf_begin_[v]);
}

std::vector<node_t> LabelTree::path(node_t v) const {
    if (v >= nodes()) throw ValidationError("node " + std::to_string(v) + " out of range");
    std::vector<node_t> out{v};
    while (v != root_) {
        v = parent_[v];
        out.push_back(v);
    }
    std::reverse(out.begin(), out.end());
    return out;
}

double path_prob(const LabelTree& tree, std::span<const double> scores, node_t node) {
    if (scores.size() != tree.nodes())
        throw DimensionError("score row has " + std::to_string(scores.size()) + " entries for " +
                             std::to_string(tree.nodes()) + " nodes");
    double p = 1.0;
    for (node_t v : tree.path(node)) p *= scores[v];
    return p;
}

LabelTree read_label_tree(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw ParseError(1, "missing header '<num_nodes> <num_labels>'");
    std::string_view rest(line);
    std::size_t n = 0, m = 0;
    if (!parse_number(next_token(rest), n) || !parse_number(next_token(rest), m) || !next_token(rest).empty())
        throw ParseError(1, "malformed header, expected '<num_nodes> <num_labels>'");

    if (!std::getline(in, line)) throw ParseError(2, "missing parent line");
    rest = line;
    std::vector<std::int64_t> parents;
    parents.reserve(n);
    for (auto tok = next_token(rest); !tok.empty(); tok = next_token(rest)) {
        std::int64_t p = 0;
        if (!parse_number(tok, p)) throw ParseError(2, "bad parent '" + std::string(tok) + "'");
        parents.push_back(p);
    }
    if (parents.size() != n)
        throw ParseError(2, "expected " + std::to_string(n) + " parents, found " + std::to_string(parents.size()));

    if (!std::getline(in, line)) throw ParseError(3, "missing leaf line");
    rest = line;
    std::vector<std::pair<node_t, label_t>> leaves;
    for (auto tok = next_token(rest); !tok.empty(); tok = next_token(rest)) {
        const auto colon = tok.find(':');
        node_t node = 0;
        label_t label = 0;
        if (colon == std::string_view::npos || !parse_number(tok.substr(0, colon), node) ||
            !parse_number(tok.substr(colon + 1), label))
            throw ParseError(3, "bad leaf entry '" + std::string(tok) + "', expected <node>:<label>");
        leaves.emplace_back(node, label);
    }
    if (leaves.size() != m)
        throw ParseError(3, "expected " + std::to_string(m) + " leaves, found " + std::to_string(leaves.size()));
    std::size_t line_no = 3;
    while (std::getline(in, line)) {
        ++line_no;
        if (!detail::is_blank(line)) throw ParseError(line_no, "unexpected content after the leaf line");
    }
    return LabelTree(parents, leaves, m);
}

LabelTree load_label_tree(const std::filesystem::path& path) {
    auto in = detail::open_in(path);
    return read_label_tree(in);
}

void write_label_tree(std::ostream& out, const LabelTree& tree) {
    out << tree.nodes() << ' ' << tree.labels() << '\n';
    for (node_t v = 0; v < tree.nodes(); ++v) {
        if (v) out << ' ';
        if (v == tree.root())
            out << -1;
        else
            out << tree.parent(v);
    }
    out << '\n';
    for (label_t j = 0; j < tree.labels(); ++j) out << (j ? " " : "") << tree.leaf_of(j) << ':' << j;
    out << '\n';
}

std::vector<std::vector<double>> read_node_scores(std::istream& in, std::size_t num_nodes) {
    std::vector<std::vector<double>> out;
    std::string line;
    std::size_t line_no = 0;
    std::vector<char> seen;
    while (std::getline(in, line)) {
        ++line_no;
        if (detail::is_blank(line)) continue;
        std::vector<double> row(num_nodes, 0.0);
        seen.assign(num_nodes, 0);
        std::string_view rest(line);
        for (auto tok = next_token(rest); !tok.empty(); tok = next_token(rest)) {
            const auto colon = tok.find(':');
            std::size_t node = 0;
            double score = 0.0;
            if (colon == std::string_view::npos || !parse_number(tok.substr(0, colon), node) ||
                !parse_number(tok.substr(colon + 1), score))
                throw ParseError(line_no, "bad entry '" + std::string(tok) + "', expected <node>:<score>");
            if (node >= num_nodes) throw ParseError(line_no, "node " + std::to_string(node) + " out of range");
            if (seen[node]) throw ParseError(line_no, "node " + std::to_string(node) + " listed twice");
            if (!(score >= 0.0 && score <= 1.0))
                throw ParseError(line_no, "score " + std::string(tok.substr(colon + 1)) + " outside [0, 1]");
            seen[node] = 1;
            row[node] = score;
        }
        const auto missing = std::find(seen.begin(), seen.end(), 0);
        if (missing != seen.end())
            throw ParseError(line_no, "node " + std::to_string(missing - seen.begin()) + " has no score");
        out.push_back(std::move(row));
    }
    return out;
}

std::vector<std::vector<double>> load_node_scores(const std::filesystem::path& path, std::size_t num_nodes) {
    auto in = detail::open_in(path);
    return read_node_scores(in, num_nodes);
}

void write_node_scores(std::ostream& out, const std::vector<std::vector<double>>& scores) {
    for (const auto& row : scores) {
        for (std::size_t v = 0; v < row.size(); ++v) out << (v ? " " : "") << v << ':' << format_real(row[v]);
        out << '\n';
    }
}

}  // namespace etuk
