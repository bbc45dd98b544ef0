#pragma once

// Plain CSV plumbing: 17-significant-digit formatting (so parse(format(x))
// round-trips every finite double), dense matrix output, and a strict data
// reader whose errors name the offending row and column.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "seqglasso/data_matrix.hpp"
#include "seqglasso/errors.hpp"
#include "seqglasso/sym_matrix.hpp"

namespace seqglasso {

// malformed input file, as opposed to a bad flag or a solver failure; the
// command layer maps this to its own exit code
struct CsvParseError : InvalidInput {
    using InvalidInput::InvalidInput;
};

inline std::string format_g17(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline void write_matrix_csv(std::ostream& os, const SymMatrix& a) {
    for (int i = 0; i < a.dim(); ++i) {
        for (int j = 0; j < a.dim(); ++j) {
            if (j) os << ',';
            os << format_g17(a(i, j));
        }
        os << '\n';
    }
}

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur += ch;
        }
    }
    out.push_back(cur);
    return out;
}

// strict double: the whole (trimmed) token must be consumed
inline double parse_cell(const std::string& token, int row, int col) {
    size_t b = token.find_first_not_of(" \t");
    size_t e = token.find_last_not_of(" \t");
    if (b == std::string::npos)
        throw CsvParseError("empty cell at row " + std::to_string(row) + ", column " +
                            std::to_string(col));
    const std::string t = token.substr(b, e - b + 1);
    char* end = nullptr;
    const double v = std::strtod(t.c_str(), &end);
    if (end != t.c_str() + t.size())
        throw CsvParseError("cannot parse '" + t + "' at row " + std::to_string(row) +
                            ", column " + std::to_string(col));
    return v;
}

}  // namespace detail

// n x d numeric table; `skip_header` drops the first line unparsed.
// Rows and columns in error messages are 1-based file coordinates.
inline DataMatrix read_data_csv(std::istream& is, bool skip_header = false) {
    std::vector<std::vector<double>> rows;
    std::string line;
    int lineno = 0;
    size_t width = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (skip_header && lineno == 1) continue;
        if (line.empty() && is.peek() == EOF) break;  // trailing newline
        std::vector<std::string> cells = detail::split_csv_line(line);
        if (rows.empty()) {
            width = cells.size();
        } else if (cells.size() != width) {
            throw CsvParseError("row " + std::to_string(lineno) + " has " +
                                std::to_string(cells.size()) + " columns, expected " +
                                std::to_string(width));
        }
        std::vector<double> vals(cells.size());
        for (size_t c = 0; c < cells.size(); ++c)
            vals[c] = detail::parse_cell(cells[c], lineno, static_cast<int>(c) + 1);
        rows.push_back(std::move(vals));
    }
    if (rows.empty() || width == 0) throw CsvParseError("no data rows");

    DataMatrix x(static_cast<int>(rows.size()), static_cast<int>(width));
    for (size_t i = 0; i < rows.size(); ++i)
        for (size_t j = 0; j < width; ++j)
            x.at(static_cast<int>(i), static_cast<int>(j)) = rows[i][j];
    return x;
}

inline DataMatrix read_data_csv_file(const std::string& path, bool skip_header = false) {
    std::ifstream f(path);
    if (!f) throw CsvParseError("cannot open " + path);
    return read_data_csv(f, skip_header);
}

}  // namespace seqglasso
