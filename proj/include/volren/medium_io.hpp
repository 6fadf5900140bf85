// Copyright 2026 The volren Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "volren/format.hpp"
#include "volren/medium.hpp"

namespace volren {

// Medium files are CSV with the exact header below and one row per segment.
// Rows are numbered from 1 after the header; messages also give the line.
inline constexpr std::string_view kMediumHeader = "t0,t1,sigma,r,g,b";

namespace detail {

inline std::string row_label(std::size_t row, std::size_t line) {
  return "row " + std::to_string(row) + " (line " + std::to_string(line) + ")";
}

inline std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

}  // namespace detail

inline PiecewiseMedium read_medium_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("medium file is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kMediumHeader) {
    throw ParseError("medium file header must be '" + std::string(kMediumHeader) + "'");
  }

  std::vector<double> boundaries;
  std::vector<double> sigmas;
  std::vector<Rgb> colors;
  std::size_t row = 0;
  std::size_t line_no = 1;
  bool trailing_blank = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) {
      trailing_blank = true;
      continue;
    }
    ++row;
    if (trailing_blank) throw ParseError(detail::row_label(row, line_no) + ": blank line inside the segment table");
    const auto fields = detail::split_commas(line);
    if (fields.size() != 6) {
      throw ParseError(detail::row_label(row, line_no) + ": expected 6 fields, found " + std::to_string(fields.size()));
    }
    double v[6];
    for (std::size_t i = 0; i < 6; ++i) {
      if (!parse_double(fields[i], v[i])) {
        throw ParseError(detail::row_label(row, line_no) + ": cannot parse field " + std::to_string(i + 1) + " '" +
                         std::string(fields[i]) + "'");
      }
    }
    if (row == 1) {
      boundaries.push_back(v[0]);
    } else if (v[0] != boundaries.back()) {
      const std::string which = v[0] > boundaries.back() ? "gap" : "overlap";
      throw ParseError(which + " between row " + std::to_string(row - 1) + " and row " + std::to_string(row) +
                       ": t1=" + shortest(boundaries.back()) + " but t0=" + shortest(v[0]));
    }
    if (!(v[1] > v[0])) {
      throw ParseError(detail::row_label(row, line_no) + ": t1 must be greater than t0");
    }
    boundaries.push_back(v[1]);
    sigmas.push_back(v[2]);
    colors.push_back({v[3], v[4], v[5]});
  }
  if (row == 0) throw ParseError("medium file has no segments");
  try {
    return PiecewiseMedium(std::move(boundaries), std::move(sigmas), std::move(colors));
  } catch (const ConstructionError& e) {
    // Segment n is row n of the file.
    throw ParseError(std::string("invalid medium (n counts rows): ") + e.what());
  }
}

inline PiecewiseMedium read_medium_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open medium file '" + path + "'");
  return read_medium_csv(in);
}

// Shortest round-trip formatting: reading the output back gives the identical medium.
inline void write_medium_csv(std::ostream& out, const PiecewiseMedium& medium) {
  out << kMediumHeader << '\n';
  const auto t = medium.boundaries();
  for (std::size_t i = 0; i < medium.size(); ++i) {
    const Rgb& c = medium.colors()[i];
    out << shortest(t[i]) << ',' << shortest(t[i + 1]) << ',' << shortest(medium.sigmas()[i]) << ','
        << shortest(c.r) << ',' << shortest(c.g) << ',' << shortest(c.b) << '\n';
  }
}

}  // namespace volren
