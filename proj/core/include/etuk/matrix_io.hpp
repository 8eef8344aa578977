#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "etuk/sparse_matrix.hpp"

namespace etuk {

// Largest probability kept on load; keeps 1 - eta strictly positive for the
// coverage updates, which divide by it.
inline constexpr double probability_ceiling = 1.0 - 1e-9;

// Text format:
//   <n_rows> <n_cols>
//   one line per row of `index:value` pairs, strictly ascending indices.
// Binary matrices may omit `:value`. Probabilities must lie in [0, 1] and are
// clamped to probability_ceiling. Throws ParseError naming the line.
SparseRowMatrix read_sparse_matrix(std::istream& in, MatrixKind kind);
SparseRowMatrix load_sparse_matrix(const std::filesystem::path& path, MatrixKind kind);

// Values are written with 9 significant digits; binary matrices as bare indices.
void write_sparse_matrix(std::ostream& out, const SparseRowMatrix& matrix, MatrixKind kind);
void save_sparse_matrix(const std::filesystem::path& path, const SparseRowMatrix& matrix, MatrixKind kind);

// One real per line (weights, priors).
std::vector<double> read_vector(std::istream& in);
std::vector<double> load_vector(const std::filesystem::path& path);
void write_vector(std::ostream& out, std::span<const double> values);
void save_vector(const std::filesystem::path& path, std::span<const double> values);

// Shortest representation with 9 significant digits ("%.9g").
std::string format_real(double value);

}  // namespace etuk
