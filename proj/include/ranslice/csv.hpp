#pragma once

#include <cstddef>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ranslice/text.hpp"

namespace ranslice {

// Column-labeled table of string cells. Numeric cells go through the
// shortest round-trip formatter so output is reproducible byte for byte.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  std::vector<std::string>& add_row() {
    rows.emplace_back();
    rows.back().reserve(columns.size());
    return rows.back();
  }

  std::size_t column_index(const std::string& name) const {
    for (std::size_t i = 0; i < columns.size(); ++i)
      if (columns[i] == name) return i;
    throw std::out_of_range("table has no column: " + name);
  }

  double value_at(std::size_t row, std::size_t col) const {
    double v = 0;
    if (!parse_double(rows.at(row).at(col), v))
      throw std::invalid_argument("table cell is not numeric: " + rows[row][col]);
    return v;
  }
};

inline void table_push(std::vector<std::string>& row, const std::string& s) {
  row.push_back(s);
}
inline void table_push(std::vector<std::string>& row, double v) {
  row.push_back(fmt_double(v));
}
inline void table_push(std::vector<std::string>& row, std::size_t v) {
  row.push_back(std::to_string(v));
}

namespace detail {

inline std::string csv_escape(const std::string& field) {
  bool needs_quote = false;
  for (char c : field)
    if (c == ',' || c == '"' || c == '\n' || c == '\r') {
      needs_quote = true;
      break;
    }
  if (!needs_quote) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += "\"";
  return out;
}

}  // namespace detail

// RFC-4180 serialization: comma-separated, CRLF line endings, quoting only
// where required.
inline void write_csv(std::ostream& os, const Table& table) {
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    if (c) os << ',';
    os << detail::csv_escape(table.columns[c]);
  }
  os << "\r\n";
  for (const auto& row : table.rows) {
    if (row.size() != table.columns.size())
      throw std::invalid_argument("csv row width does not match header");
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) os << ',';
      os << detail::csv_escape(row[c]);
    }
    os << "\r\n";
  }
}

}  // namespace ranslice
