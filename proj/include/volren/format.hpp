// Copyright 2026 The volren Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <charconv>
#include <cstdio>
#include <string>
#include <string_view>
#include <system_error>

#include "volren/types.hpp"

namespace volren {

// Shortest decimal string that parses back to exactly `value`.
inline std::string shortest(double value) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

// printf "%.<digits>g"; negative zero prints as "0".
inline std::string with_precision(double value, int digits) {
  if (value == 0.0) value = 0.0;
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", digits, value);
  return buf;
}

inline std::string join(const Rgb& c, int digits) {
  return with_precision(c.r, digits) + "," + with_precision(c.g, digits) + "," + with_precision(c.b, digits);
}

// Whole-string decimal parse; surrounding spaces are tolerated.
inline bool parse_double(std::string_view text, double& out) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t')) text.remove_suffix(1);
  if (text.empty()) return false;
  if (text.front() == '+') text.remove_prefix(1);
  const auto res = std::from_chars(text.data(), text.data() + text.size(), out);
  return res.ec == std::errc() && res.ptr == text.data() + text.size();
}

}  // namespace volren
