//
// Copyright 2026 The specanon Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

// Numeric CSV: comma delimiter, mandatory header row, '.' decimal point, no
// quoting. Doubles are written in the shortest form that reads back to the
// same value.

#ifndef SPECANON_CSV_HPP_
#define SPECANON_CSV_HPP_

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "specanon/errors.hpp"
#include "specanon/linalg.hpp"

namespace specanon::csv {

inline std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

inline std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    fields.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

inline double parse_double(std::string_view field, std::size_t row, std::size_t column) {
  if (!field.empty() && field.front() == '+') field.remove_prefix(1);
  double v = 0.0;
  const auto res = std::from_chars(field.data(), field.data() + field.size(), v);
  if (field.empty() || res.ec != std::errc() || res.ptr != field.data() + field.size()) {
    throw ParseError("non-numeric value '" + std::string(field) + "'", row, column);
  }
  if (!std::isfinite(v)) throw ParseError("non-finite value '" + std::string(field) + "'", row, column);
  return v;
}

// Reads a header row followed by numeric rows. Blank lines are skipped.
inline DataMatrix read(std::istream& in) {
  std::string line;
  std::size_t row = 0;
  std::vector<std::string> names;
  while (names.empty() && std::getline(in, line)) {
    ++row;
    if (trim(line).empty()) continue;
    for (auto f : split(line)) names.emplace_back(f);
  }
  if (names.empty()) throw ParseError("missing header row");
  if (names.front().rfind("\xEF\xBB\xBF", 0) == 0) names.front().erase(0, 3);

  std::vector<double> values;
  std::size_t records = 0;
  while (std::getline(in, line)) {
    ++row;
    if (trim(line).empty()) continue;
    const auto fields = split(line);
    if (fields.size() != names.size()) {
      throw ParseError("expected " + std::to_string(names.size()) + " fields, found " +
                           std::to_string(fields.size()),
                       row);
    }
    for (std::size_t c = 0; c < fields.size(); ++c) values.push_back(parse_double(fields[c], row, c + 1));
    ++records;
  }
  if (records == 0) throw ParseError("no data rows");
  const auto n = static_cast<Index>(records);
  const auto p = static_cast<Index>(names.size());
  Matrix m(n, p);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < p; ++j) m(i, j) = values[static_cast<std::size_t>(i * p + j)];
  }
  return DataMatrix(std::move(m), std::move(names));
}

inline DataMatrix read_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path.string() + "'");
  return read(in);
}

inline void write_rows(std::ostream& out, const Matrix& m) {
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      out << format_double(m(i, j));
    }
    out << '\n';
  }
}

// Columns without names get the header x1, ..., xp.
inline void write(std::ostream& out, const DataMatrix& x) {
  for (Index j = 0; j < x.cols(); ++j) {
    if (j) out << ',';
    out << (x.names().empty() ? "x" + std::to_string(j + 1)
                              : x.names()[static_cast<std::size_t>(j)]);
  }
  out << '\n';
  write_rows(out, x.values());
}

// Parses a small headerless numeric matrix: rows separated by newlines or
// ';', entries by commas.
inline Matrix parse_matrix(std::string_view text) {
  std::vector<std::vector<double>> rows;
  std::size_t row = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find_first_of(";\n", start);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = trim(text.substr(start, end - start));
    ++row;
    if (!line.empty()) {
      std::vector<double> r;
      std::size_t column = 0;
      for (auto f : split(line)) r.push_back(parse_double(f, row, ++column));
      if (!rows.empty() && r.size() != rows.front().size()) {
        throw ParseError("ragged matrix rows", row);
      }
      rows.push_back(std::move(r));
    }
    start = end + 1;
  }
  if (rows.empty()) throw ParseError("empty matrix");
  Matrix m(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      m(static_cast<Index>(i), static_cast<Index>(j)) = rows[i][j];
    }
  }
  return m;
}

}  // namespace specanon::csv

#endif  // SPECANON_CSV_HPP_
