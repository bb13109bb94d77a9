#pragma once
//
// Minimal CSV I/O for experiment artifacts. Numbers are written with 17
// significant digits so that values round-trip exactly; missing cells are empty.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "octnag/error.hpp"

namespace octnag::experiment {

inline std::string format_double(double v) {
  if (std::isnan(v)) return "";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header) : path_(path), out_(path) {
    if (!out_) throw Error(ErrorKind::IoError, "cannot open " + path.string() + " for writing");
    write_row(header);
  }

  void write_row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out_ << ',';
      out_ << cells[i];
    }
    out_ << '\n';
    if (!out_) throw Error(ErrorKind::IoError, "write failed on " + path_.string());
  }

  void write_numbers(const std::vector<double>& values) {
    std::vector<std::string> cells;
    cells.reserve(values.size());
    for (double v : values) cells.push_back(format_double(v));
    write_row(cells);
  }

 private:
  std::filesystem::path path_;
  std::ofstream out_;
};

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  int column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (header[i] == name) return static_cast<int>(i);
    }
    return -1;
  }

  bool has(const std::string& name) const { return column(name) >= 0; }

  // Numeric view of a column; empty or unparsable cells become NaN.
  std::vector<double> numbers(const std::string& name) const {
    const int c = column(name);
    if (c < 0) throw Error(ErrorKind::IoError, "missing CSV column '" + name + "'");
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& row : rows) {
      const std::string& cell = static_cast<std::size_t>(c) < row.size() ? row[std::size_t(c)] : std::string();
      char* end = nullptr;
      const double v = std::strtod(cell.c_str(), &end);
      out.push_back(cell.empty() || end == cell.c_str() ? std::numeric_limits<double>::quiet_NaN() : v);
    }
    return out;
  }

  std::vector<std::string> strings(const std::string& name) const {
    const int c = column(name);
    if (c < 0) throw Error(ErrorKind::IoError, "missing CSV column '" + name + "'");
    std::vector<std::string> out;
    for (const auto& row : rows) out.push_back(static_cast<std::size_t>(c) < row.size() ? row[std::size_t(c)] : "");
    return out;
  }
};

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

inline CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoError, "cannot read " + path.string());
  CsvTable table;
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorKind::IoError, path.string() + " is empty");
  table.header = split_csv_line(line);
  while (std::getline(in, line)) {
    if (!line.empty()) table.rows.push_back(split_csv_line(line));
  }
  return table;
}

}  // namespace octnag::experiment
