#include "etuk/sparse_matrix.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "etuk/errors.hpp"

namespace etuk {

double RowView::value_of(label_t label) const noexcept {
    const auto it = std::lower_bound(indices.begin(), indices.end(), label);
    if (it == indices.end() || *it != label) return 0.0;
    return values[static_cast<std::size_t>(it - indices.begin())];
}

SparseRowMatrix::SparseRowMatrix(std::size_t n_rows, std::size_t n_cols)
    : n_cols_(n_cols), indptr_(n_rows + 1, 0) {}

SparseRowMatrix::Builder::Builder(std::size_t n_cols) : n_cols_(n_cols) {}

void SparseRowMatrix::Builder::reserve(std::size_t rows, std::size_t nnz) {
    indptr_.reserve(rows + 1);
    indices_.reserve(nnz);
    values_.reserve(nnz);
}

void SparseRowMatrix::Builder::add_row(std::span<const label_t> indices, std::span<const double> values) {
    if (indices.size() != values.size())
        throw DimensionError("row has " + std::to_string(indices.size()) + " indices but " +
                             std::to_string(values.size()) + " values");
    for (std::size_t e = 0; e < indices.size(); ++e) {
        if (indices[e] >= n_cols_)
            throw DimensionError("column index " + std::to_string(indices[e]) + " out of range for " +
                                 std::to_string(n_cols_) + " columns");
        if (e > 0 && indices[e] <= indices[e - 1])
            throw DimensionError("column indices must be strictly ascending");
    }
    indices_.insert(indices_.end(), indices.begin(), indices.end());
    values_.insert(values_.end(), values.begin(), values.end());
    indptr_.push_back(indices_.size());
}

void SparseRowMatrix::Builder::add_row(const std::vector<Entry>& entries) {
    std::vector<label_t> idx;
    std::vector<double> val;
    idx.reserve(entries.size());
    val.reserve(entries.size());
    for (const auto& [j, v] : entries) {
        idx.push_back(j);
        val.push_back(v);
    }
    add_row(idx, val);
}

SparseRowMatrix SparseRowMatrix::Builder::build() && {
    SparseRowMatrix m;
    m.n_cols_ = n_cols_;
    m.indptr_ = std::move(indptr_);
    m.indices_ = std::move(indices_);
    m.values_ = std::move(values_);
    return m;
}

SparseRowMatrix SparseRowMatrix::from_rows(std::size_t n_cols, const std::vector<std::vector<Entry>>& rows) {
    Builder b(n_cols);
    for (const auto& r : rows) b.add_row(r);
    return std::move(b).build();
}

SparseRowMatrix SparseRowMatrix::from_dense(const std::vector<std::vector<double>>& dense, bool keep_zeros) {
    const std::size_t n_cols = dense.empty() ? 0 : dense.front().size();
    Builder b(n_cols);
    std::vector<label_t> idx;
    std::vector<double> val;
    for (const auto& r : dense) {
        if (r.size() != n_cols) throw DimensionError("ragged dense matrix");
        idx.clear();
        val.clear();
        for (std::size_t j = 0; j < r.size(); ++j) {
            if (keep_zeros || r[j] != 0.0) {
                idx.push_back(static_cast<label_t>(j));
                val.push_back(r[j]);
            }
        }
        b.add_row(idx, val);
    }
    return std::move(b).build();
}

std::vector<std::vector<double>> SparseRowMatrix::to_dense() const {
    std::vector<std::vector<double>> out(rows(), std::vector<double>(cols(), 0.0));
    for (std::size_t i = 0; i < rows(); ++i) {
        const auto r = row(i);
        for (std::size_t e = 0; e < r.size(); ++e) out[i][r.indices[e]] = r.values[e];
    }
    return out;
}

bool SparseRowMatrix::satisfies(MatrixKind kind) const noexcept {
    if (kind == MatrixKind::binary)
        return std::all_of(values_.begin(), values_.end(), [](double v) { return v == 1.0; });
    return std::all_of(values_.begin(), values_.end(), [](double v) { return v >= 0.0 && v <= 1.0; });
}

SparseRowMatrix truncate_rows(const SparseRowMatrix& matrix, std::size_t k_prime) {
    SparseRowMatrix::Builder b(matrix.cols());
    b.reserve(matrix.rows(), std::min(matrix.nnz(), matrix.rows() * k_prime));
    std::vector<std::size_t> order;
    std::vector<label_t> idx;
    std::vector<double> val;
    for (std::size_t i = 0; i < matrix.rows(); ++i) {
        const auto r = matrix.row(i);
        if (r.size() <= k_prime) {
            b.add_row(r.indices, r.values);
            continue;
        }
        order.resize(r.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k_prime), order.end(),
                          [&](std::size_t a, std::size_t c) {
                              if (r.values[a] != r.values[c]) return r.values[a] > r.values[c];
                              return r.indices[a] < r.indices[c];
                          });
        order.resize(k_prime);
        std::sort(order.begin(), order.end());
        idx.clear();
        val.clear();
        for (auto e : order) {
            idx.push_back(r.indices[e]);
            val.push_back(r.values[e]);
        }
        b.add_row(idx, val);
    }
    return std::move(b).build();
}

std::vector<double> column_means(const SparseRowMatrix& matrix) {
    std::vector<double> out(matrix.cols(), 0.0);
    if (matrix.rows() == 0) return out;
    const double inv_n = 1.0 / static_cast<double>(matrix.rows());
    for (std::size_t i = 0; i < matrix.rows(); ++i) {
        const auto r = matrix.row(i);
        for (std::size_t e = 0; e < r.size(); ++e) out[r.indices[e]] += inv_n * r.values[e];
    }
    return out;
}

}  // namespace etuk
