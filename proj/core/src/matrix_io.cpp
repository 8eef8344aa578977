#include "etuk/matrix_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>

#include "etuk/errors.hpp"
#include "text.hpp"

namespace etuk {
using detail::next_token;
using detail::open_in;
using detail::open_out;
using detail::parse_number;


std::string format_real(double value) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general, 9);
    (void)ec;
    return std::string(buf, ptr);
}

SparseRowMatrix read_sparse_matrix(std::istream& in, MatrixKind kind) {
    std::string line;
    std::size_t line_no = 0;
    if (!std::getline(in, line)) throw ParseError(1, "missing header '<n_rows> <n_cols>'");
    ++line_no;

    std::string_view header(line);
    std::size_t n_rows = 0, n_cols = 0;
    if (!parse_number(next_token(header), n_rows) || !parse_number(next_token(header), n_cols) ||
        !next_token(header).empty())
        throw ParseError(line_no, "malformed header, expected '<n_rows> <n_cols>'");

    SparseRowMatrix::Builder builder(n_cols);
    std::vector<label_t> idx;
    std::vector<double> val;
    while (builder.rows() < n_rows) {
        if (!std::getline(in, line))
            throw ParseError(line_no + 1, "expected " + std::to_string(n_rows) + " rows, found " +
                                              std::to_string(builder.rows()));
        ++line_no;
        idx.clear();
        val.clear();
        std::string_view rest(line);
        for (auto tok = next_token(rest); !tok.empty(); tok = next_token(rest)) {
            const auto colon = tok.find(':');
            std::uint64_t j = 0;
            if (!parse_number(tok.substr(0, colon), j))
                throw ParseError(line_no, "malformed index in '" + std::string(tok) + "'");
            if (j >= n_cols)
                throw ParseError(line_no, "index " + std::to_string(j) + " out of range for " +
                                              std::to_string(n_cols) + " columns");
            if (!idx.empty() && j <= idx.back())
                throw ParseError(line_no, "non-ascending indices");

            double v = 1.0;
            if (colon == std::string_view::npos) {
                if (kind == MatrixKind::probabilities)
                    throw ParseError(line_no, "missing value for index " + std::to_string(j));
            } else if (!parse_number(tok.substr(colon + 1), v) || !std::isfinite(v)) {
                throw ParseError(line_no, "malformed value in '" + std::string(tok) + "'");
            }
            if (kind == MatrixKind::binary) {
                if (v != 1.0) throw ParseError(line_no, "binary matrix value must be 1");
            } else {
                if (v < 0.0 || v > 1.0) throw ParseError(line_no, "probability out of [0, 1]");
                v = std::min(v, probability_ceiling);
            }
            idx.push_back(static_cast<label_t>(j));
            val.push_back(v);
        }
        builder.add_row(idx, val);
    }
    // Only blank lines may follow the last row.
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view rest(line);
        if (!next_token(rest).empty())
            throw ParseError(line_no, "more rows than declared in header (" + std::to_string(n_rows) + ")");
    }
    return std::move(builder).build();
}

SparseRowMatrix load_sparse_matrix(const std::filesystem::path& path, MatrixKind kind) {
    auto in = open_in(path);
    return read_sparse_matrix(in, kind);
}

void write_sparse_matrix(std::ostream& out, const SparseRowMatrix& matrix, MatrixKind kind) {
    out << matrix.rows() << ' ' << matrix.cols() << '\n';
    std::string line;
    for (std::size_t i = 0; i < matrix.rows(); ++i) {
        const auto r = matrix.row(i);
        line.clear();
        for (std::size_t e = 0; e < r.size(); ++e) {
            if (e) line += ' ';
            line += std::to_string(r.indices[e]);
            if (kind == MatrixKind::probabilities) {
                line += ':';
                line += format_real(r.values[e]);
            }
        }
        line += '\n';
        out << line;
    }
    if (!out) throw IoError("write failed");
}

void save_sparse_matrix(const std::filesystem::path& path, const SparseRowMatrix& matrix, MatrixKind kind) {
    auto out = open_out(path);
    write_sparse_matrix(out, matrix, kind);
}

std::vector<double> read_vector(std::istream& in) {
    std::vector<double> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view rest(line);
        const auto tok = next_token(rest);
        if (tok.empty()) continue;
        double v = 0.0;
        if (!parse_number(tok, v) || !std::isfinite(v) || !next_token(rest).empty())
            throw ParseError(line_no, "expected one real number per line");
        out.push_back(v);
    }
    return out;
}

std::vector<double> load_vector(const std::filesystem::path& path) {
    auto in = open_in(path);
    return read_vector(in);
}

void write_vector(std::ostream& out, std::span<const double> values) {
    for (double v : values) out << format_real(v) << '\n';
    if (!out) throw IoError("write failed");
}

void save_vector(const std::filesystem::path& path, std::span<const double> values) {
    auto out = open_out(path);
    write_vector(out, values);
}

}  // namespace etuk
