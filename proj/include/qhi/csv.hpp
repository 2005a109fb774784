#pragma once

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "qhi/error.hpp"

namespace qhi::csv {

/// 17 significant digits, round-trips every double.
inline std::string format(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) return "0";  // also folds -0
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline double parse_number(const std::string& cell) {
  if (cell == "nan") return std::nan("");
  if (cell == "inf") return INFINITY;
  if (cell == "-inf") return -INFINITY;
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(cell, &used);
  } catch (const std::exception&) {
    throw InvalidArgument("csv: not a number: '" + cell + "'");
  }
  if (used != cell.size()) throw InvalidArgument("csv: trailing characters in '" + cell + "'");
  return v;
}

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void add_row(std::vector<std::string> row) {
    if (row.size() != header.size()) throw DimensionMismatch("csv: row width does not match header");
    rows.push_back(std::move(row));
  }
};

inline void write(std::ostream& os, const Table& t) {
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) os << ',';
      os << cells[i];
    }
    os << '\n';
  };
  line(t.header);
  for (const auto& r : t.rows) line(r);
}

inline std::string to_string(const Table& t) {
  std::ostringstream os;
  write(os, t);
  return os.str();
}

/// Reads what write() produces (no quoting).
inline Table read(std::istream& is) {
  auto split = [](const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
  };
  Table t;
  std::string line;
  if (!std::getline(is, line)) throw InvalidArgument("csv: missing header");
  t.header = split(line);
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    t.add_row(split(line));
  }
  return t;
}

}  // namespace qhi::csv
