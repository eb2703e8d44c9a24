#pragma once

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "skewreg/dataset.hpp"

namespace skewreg {

// CSV layout: header "f0,f1,...,f{d-1},yield", one sample per line, '.' as
// the decimal point, no quoting. Numbers are written with 17 significant
// digits so a save/load round trip reproduces every double bit-for-bit.

namespace detail {

inline std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v,
                           std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view text, const std::string& path,
                           std::size_t line, std::size_t column) {
  double value = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto res = std::from_chars(first, last, value, std::chars_format::general);
  if (res.ec != std::errc{} || res.ptr != last || text.empty()) {
    throw std::runtime_error(path + ":" + std::to_string(line) +
                             ": malformed number in column " +
                             std::to_string(column) + ": '" +
                             std::string(text) + "'");
  }
  return value;
}

inline std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return fields;
}

}  // namespace detail

inline void save_csv(const Dataset& dataset, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("save_csv: cannot open '" + path +
                             "' for writing");
  }
  for (std::size_t j = 0; j < dataset.dim(); ++j) {
    out << 'f' << j << ',';
  }
  out << "yield\n";
  for (const Sample& s : dataset.samples()) {
    for (double f : s.features) {
      out << detail::format_double(f) << ',';
    }
    out << detail::format_double(s.label) << '\n';
  }
  if (!out) {
    throw std::runtime_error("save_csv: write to '" + path + "' failed");
  }
}

inline Dataset load_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("load_csv: cannot open '" + path + "'");
  }

  std::string line;
  if (!std::getline(in, line)) {
    throw std::runtime_error("load_csv: '" + path + "' is empty");
  }
  if (!line.empty() && line.back() == '\r') {
    line.pop_back();
  }
  const auto header = detail::split_fields(line);
  if (header.size() < 2 || header.back() != "yield") {
    throw std::runtime_error(path +
                             ":1: header must be 'f0,...,f{d-1},yield'");
  }
  const std::size_t dim = header.size() - 1;
  for (std::size_t j = 0; j < dim; ++j) {
    if (header[j] != "f" + std::to_string(j)) {
      throw std::runtime_error(path + ":1: expected header column 'f" +
                               std::to_string(j) + "', got '" +
                               std::string(header[j]) + "'");
    }
  }

  std::vector<Sample> samples;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    if (line.empty()) {
      continue;  // tolerate a trailing blank line
    }
    const auto fields = detail::split_fields(line);
    if (fields.size() != dim + 1) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) + ": has " +
                               std::to_string(fields.size()) +
                               " columns, expected " + std::to_string(dim + 1));
    }
    Sample s;
    s.features.resize(dim);
    for (std::size_t j = 0; j < dim; ++j) {
      s.features[j] = detail::parse_double(fields[j], path, line_no, j);
      if (!std::isfinite(s.features[j])) {
        throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                 ": non-finite feature in column " +
                                 std::to_string(j));
      }
    }
    s.label = detail::parse_double(fields[dim], path, line_no, dim);
    if (!std::isfinite(s.label) || s.label < kLabelMin ||
        s.label > kLabelMax) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) +
                               ": yield " + std::string(fields[dim]) +
                               " outside [0, 100]");
    }
    samples.push_back(std::move(s));
  }
  return Dataset(std::move(samples), dim);
}

}  // namespace skewreg
