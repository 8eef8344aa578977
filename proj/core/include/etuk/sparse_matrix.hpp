#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace etuk {

using label_t = std::uint32_t;

// Non-owning view of one CSR row. Indices are strictly increasing.
struct RowView {
    std::span<const label_t> indices;
    std::span<const double> values;

    std::size_t size() const noexcept { return indices.size(); }
    bool empty() const noexcept { return indices.empty(); }

    // Stored value for `label`, or 0 when the label is not stored.
    double value_of(label_t label) const noexcept;
};

enum class MatrixKind { probabilities, binary };

// Row-major sparse matrix (CSR). Holds label probability estimates, ground
// truth labels or predictions; immutable once built.
class SparseRowMatrix {
public:
    using Entry = std::pair<label_t, double>;

    SparseRowMatrix() = default;

    // n_rows empty rows.
    SparseRowMatrix(std::size_t n_rows, std::size_t n_cols);

    // Throws DimensionError when a row has out-of-range or non-ascending indices.
    static SparseRowMatrix from_rows(std::size_t n_cols, const std::vector<std::vector<Entry>>& rows);

    // Keeps every entry whose value differs from zero, or every entry when keep_zeros.
    static SparseRowMatrix from_dense(const std::vector<std::vector<double>>& dense, bool keep_zeros = false);

    std::size_t rows() const noexcept { return indptr_.size() - 1; }
    std::size_t cols() const noexcept { return n_cols_; }
    std::size_t nnz() const noexcept { return indices_.size(); }

    RowView row(std::size_t i) const noexcept {
        const auto begin = indptr_[i];
        const auto len = indptr_[i + 1] - begin;
        return {std::span<const label_t>(indices_).subspan(begin, len),
                std::span<const double>(values_).subspan(begin, len)};
    }

    std::vector<std::vector<double>> to_dense() const;

    // Checks the value-domain invariant of `kind` ([0,1] or all ones).
    bool satisfies(MatrixKind kind) const noexcept;

    friend bool operator==(const SparseRowMatrix&, const SparseRowMatrix&) = default;

    // Incremental construction, used by the readers and generators.
    class Builder {
    public:
        explicit Builder(std::size_t n_cols);
        void reserve(std::size_t rows, std::size_t nnz);
        // Entries must be strictly ascending and < n_cols (DimensionError otherwise).
        void add_row(std::span<const label_t> indices, std::span<const double> values);
        void add_row(const std::vector<Entry>& entries);
        std::size_t rows() const noexcept { return indptr_.size() - 1; }
        SparseRowMatrix build() &&;

    private:
        std::size_t n_cols_;
        std::vector<std::size_t> indptr_{0};
        std::vector<label_t> indices_;
        std::vector<double> values_;
    };

private:
    std::size_t n_cols_ = 0;
    std::vector<std::size_t> indptr_{0};
    std::vector<label_t> indices_;
    std::vector<double> values_;
};

// Keeps, per row, the `k_prime` stored entries with the largest values
// (ties broken by smaller index). Rows with fewer entries are copied as is.
SparseRowMatrix truncate_rows(const SparseRowMatrix& matrix, std::size_t k_prime);

// Per-label sum of stored values divided by the number of rows.
std::vector<double> column_means(const SparseRowMatrix& matrix);

}  // namespace etuk
