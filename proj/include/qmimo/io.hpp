// Copyright 2026 The qmimo Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

/// @file
/// Text formats for matrices and result tables.
///
/// Matrix file, one or more records of
///   matrix <name>
///   layout <tensor-factor description>
///   dims <rows> <cols>
///   <re> <im> <re> <im> ...      (one line per row, row-major)
///   end
/// Lines starting with '#' are comments. Entries use 17 significant digits,
/// so a write/read round trip is exact.

#include <qmimo/linalg.hpp>

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace qmimo::io {

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shortest "%.<digits>g" rendering; non-finite values print as nan/inf/-inf.
inline std::string format_number(double v, int digits = 12) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

struct NamedMatrix {
  std::string name;
  std::string layout;
  Matrix value;
};

inline void write_matrix(std::ostream& os, const NamedMatrix& m) {
  if (m.name.empty() || m.name.find_first_of(" \t\n") != std::string::npos) {
    throw FormatError("write_matrix: name must be a single nonempty token");
  }
  os << "matrix " << m.name << '\n';
  os << "layout " << (m.layout.empty() ? "-" : m.layout) << '\n';
  os << "dims " << m.value.rows() << ' ' << m.value.cols() << '\n';
  for (Eigen::Index i = 0; i < m.value.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.value.cols(); ++j) {
      if (j > 0) os << ' ';
      os << format_number(m.value(i, j).real(), 17) << ' ' << format_number(m.value(i, j).imag(), 17);
    }
    os << '\n';
  }
  os << "end\n";
}

inline void write_matrices(std::ostream& os, const std::vector<NamedMatrix>& ms) {
  os << "# qmimo matrix file: row-major complex entries as 're im' pairs\n";
  for (const auto& m : ms) write_matrix(os, m);
}

namespace detail {

inline bool next_content_line(std::istream& is, std::string& line, int& lineno) {
  while (std::getline(is, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    return true;
  }
  return false;
}

inline std::string keyword_value(const std::string& line, int lineno, const std::string& key) {
  std::istringstream ls(line);
  std::string word;
  ls >> word;
  if (word != key) {
    throw FormatError("matrix file line " + std::to_string(lineno) + ": expected '" + key + "'");
  }
  std::string rest;
  std::getline(ls >> std::ws, rest);
  while (!rest.empty() && (rest.back() == '\r' || rest.back() == ' ')) rest.pop_back();
  return rest;
}

inline std::string expect_keyword(std::istream& is, std::string& line, int& lineno, const std::string& key) {
  if (!next_content_line(is, line, lineno)) {
    throw FormatError("matrix file: unexpected end of input, expected '" + key + "'");
  }
  return keyword_value(line, lineno, key);
}

inline double parse_number(const std::string& tok, int lineno) {
  if (tok == "nan") return std::nan("");
  if (tok == "inf") return INFINITY;
  if (tok == "-inf") return -INFINITY;
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(tok, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != tok.size()) {
    throw FormatError("matrix file line " + std::to_string(lineno) + ": bad number '" + tok + "'");
  }
  return v;
}

}  // namespace detail

/// Reads every record of a matrix file.
inline std::vector<NamedMatrix> read_matrices(std::istream& is) {
  std::vector<NamedMatrix> out;
  std::string line;
  int lineno = 0;
  while (detail::next_content_line(is, line, lineno)) {
    NamedMatrix m;
    m.name = detail::keyword_value(line, lineno, "matrix");
    m.layout = detail::expect_keyword(is, line, lineno, "layout");
    if (m.layout == "-") m.layout.clear();
    std::istringstream ds(detail::expect_keyword(is, line, lineno, "dims"));
    long rows = -1, cols = -1;
    if (!(ds >> rows >> cols) || rows < 0 || cols < 0) {
      throw FormatError("matrix file line " + std::to_string(lineno) + ": bad dims");
    }
    m.value = Matrix::Zero(rows, cols);
    for (long i = 0; i < rows; ++i) {
      if (!detail::next_content_line(is, line, lineno)) throw FormatError("matrix file: truncated matrix");
      std::istringstream rs(line);
      std::vector<std::string> toks;
      for (std::string t; rs >> t;) toks.push_back(t);
      if (static_cast<long>(toks.size()) != 2 * cols) {
        throw FormatError("matrix file line " + std::to_string(lineno) + ": expected " +
                          std::to_string(2 * cols) + " numbers");
      }
      for (long j = 0; j < cols; ++j) {
        m.value(i, j) = cplx(detail::parse_number(toks[2 * j], lineno),
                             detail::parse_number(toks[2 * j + 1], lineno));
      }
    }
    detail::expect_keyword(is, line, lineno, "end");
    out.push_back(std::move(m));
  }
  return out;
}

/// Comma-separated table with a fixed header; cells are written as given.
class CsvWriter {
 public:
  CsvWriter(std::ostream& os, std::vector<std::string> header) : os_(os), columns_(header.size()) {
    row(header);
  }

  void row(const std::vector<std::string>& cells) {
    if (cells.size() != columns_) throw FormatError("CsvWriter: row has the wrong number of cells");
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (cells[i].find_first_of(",\n\"") != std::string::npos) {
        throw FormatError("CsvWriter: cell '" + cells[i] + "' needs quoting");
      }
      os_ << (i ? "," : "") << cells[i];
    }
    os_ << '\n';
  }

 private:
  std::ostream& os_;
  std::size_t columns_;
};

/// Parses a CSV produced by CsvWriter (no quoting) into rows of cells.
inline std::vector<std::vector<std::string>> read_csv(std::istream& is) {
  std::vector<std::vector<std::string>> rows;
  for (std::string line; std::getline(is, line);) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
      const auto comma = line.find(',', start);
      cells.push_back(line.substr(start, comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    rows.push_back(std::move(cells));
  }
  return rows;
}

}  // namespace qmimo::io
