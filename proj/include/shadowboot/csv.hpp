#ifndef SHADOWBOOT_CSV_HPP_
#define SHADOWBOOT_CSV_HPP_

#include "shadowboot/matrix.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

namespace shadowboot {

/// Shortest decimal text that round-trips to the same double.
inline std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  if (res.ec != std::errc()) {
    throw std::runtime_error("format_double: conversion failed");
  }
  return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view text, const std::string &context) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) {
    text.remove_prefix(1);
  }
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t' ||
                           text.back() == '\r')) {
    text.remove_suffix(1);
  }
  double v = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw std::invalid_argument(context + ": not a number: '" +
                                std::string(text) + "'");
  }
  return v;
}

inline std::vector<std::string> split(std::string_view text, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(sep, start);
    out.emplace_back(text.substr(start, pos - start));
    if (pos == std::string_view::npos) {
      break;
    }
    start = pos + 1;
  }
  return out;
}

/// Writes `# <provenance>` (if non-empty), a header row, then the rows.
inline void write_csv(std::ostream &os, const std::string &provenance,
                      const std::vector<std::string> &header,
                      const std::vector<std::vector<std::string>> &rows) {
  if (!provenance.empty()) {
    os << "# " << provenance << '\n';
  }
  auto emit = [&](const std::vector<std::string> &cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) {
        os << ',';
      }
      os << cells[i];
    }
    os << '\n';
  };
  emit(header);
  for (const auto &r : rows) {
    emit(r);
  }
}

inline void write_matrix_csv(std::ostream &os, const std::string &provenance,
                             const LabeledMatrix &m) {
  if (!provenance.empty()) {
    os << "# " << provenance << '\n';
  }
  for (std::size_t j = 0; j < m.cols(); ++j) {
    os << (j ? "," : "") << m.labels()[j];
  }
  os << '\n';
  std::string line;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    line.clear();
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j) {
        line += ',';
      }
      line += format_double(m(i, j));
    }
    line += '\n';
    os << line;
  }
}

/// Reads a matrix written by write_matrix_csv; '#' lines are skipped.
inline LabeledMatrix read_matrix_csv(const std::string &path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open " + path);
  }
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> labels;
  std::vector<double> values;
  std::size_t rows = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    if (line.empty() || line.front() == '#') {
      continue;
    }
    auto cells = split(line, ',');
    if (!have_header) {
      labels = std::move(cells);
      have_header = true;
      continue;
    }
    if (cells.size() != labels.size()) {
      throw std::invalid_argument(path + ":" + std::to_string(line_no) +
                                  ": expected " + std::to_string(labels.size()) +
                                  " columns, got " + std::to_string(cells.size()));
    }
    for (const auto &c : cells) {
      values.push_back(parse_double(c, path + ":" + std::to_string(line_no)));
    }
    ++rows;
  }
  if (!have_header || rows == 0) {
    throw std::invalid_argument(path + ": no data rows");
  }
  return LabeledMatrix(rows, std::move(labels), std::move(values));
}

} // namespace shadowboot

#endif // SHADOWBOOT_CSV_HPP_
