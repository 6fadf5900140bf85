// Copyright 2026 The volren Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "volren/fields.hpp"
#include "volren/format.hpp"
#include "volren/rng.hpp"

namespace volren {

using SceneParams = std::map<std::string, double, std::less<>>;

/// Parses "k=v,k=v,...". Empty input gives no parameters.
inline SceneParams parse_params(std::string_view text) {
  SceneParams params;
  if (text.empty()) return params;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = std::min(text.find(',', start), text.size());
    const std::string_view item = text.substr(start, comma - start);
    const std::size_t eq = item.find('=');
    double value = 0.0;
    if (eq == std::string_view::npos || eq == 0 || !parse_double(item.substr(eq + 1), value)) {
      throw ParseError("malformed parameter '" + std::string(item) + "', expected key=value");
    }
    const std::string key(item.substr(0, eq));
    if (params.contains(key)) throw ParseError("parameter '" + key + "' given twice");
    params.emplace(key, value);
    start = comma + 1;
  }
  return params;
}

/// Comma-separated numbers, at least `min_count` and at most `max_count` of them.
inline std::vector<double> parse_numbers(std::string_view text, std::size_t min_count, std::size_t max_count,
                                         std::string_view what) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = std::min(text.find(',', start), text.size());
    double v = 0.0;
    if (!parse_double(text.substr(start, comma - start), v) || !std::isfinite(v)) {
      throw ParseError("malformed " + std::string(what) + " '" + std::string(text) + "'");
    }
    out.push_back(v);
    start = comma + 1;
  }
  if (out.size() < min_count || out.size() > max_count) {
    throw ParseError("wrong number of values in " + std::string(what) + " '" + std::string(text) + "'");
  }
  return out;
}

inline Rgb parse_rgb(std::string_view text) {
  const auto v = parse_numbers(text, 3, 3, "color");
  return {v[0], v[1], v[2]};
}

inline Vec3 parse_vec3(std::string_view text) {
  const auto v = parse_numbers(text, 3, 3, "vector");
  return {v[0], v[1], v[2]};
}

/// Positive integers, strictly increasing: "8,16,32".
inline std::vector<std::size_t> parse_counts(std::string_view text) {
  std::vector<std::size_t> out;
  for (double v : parse_numbers(text, 1, SIZE_MAX, "count list")) {
    if (!(v >= 1.0) || v != std::floor(v) || v > 1e12) throw ParseError("counts must be positive integers");
    const auto n = static_cast<std::size_t>(v);
    if (!out.empty() && n <= out.back()) throw ParseError("counts must be strictly increasing");
    out.push_back(n);
  }
  return out;
}

// "WxH"
inline std::pair<std::size_t, std::size_t> parse_resolution(std::string_view text) {
  const std::size_t x = text.find('x');
  double w = 0.0, h = 0.0;
  if (x == std::string_view::npos || !parse_double(text.substr(0, x), w) || !parse_double(text.substr(x + 1), h) ||
      !(w >= 1.0) || !(h >= 1.0) || w != std::floor(w) || h != std::floor(h) || w > 1e5 || h > 1e5) {
    throw ParseError("malformed resolution '" + std::string(text) + "', expected WxH with positive integers");
  }
  return {static_cast<std::size_t>(w), static_cast<std::size_t>(h)};
}

namespace detail {

class ParamReader {
 public:
  ParamReader(const SceneParams& params, std::string scene) : params_(params), scene_(std::move(scene)) {}

  double get(const std::string& key, double fallback) {
    used_.insert(key);
    const auto it = params_.find(key);
    return it == params_.end() ? fallback : it->second;
  }

  Rgb color(const std::string& prefix, const Rgb& fallback) {
    return {get(prefix + "r", fallback.r), get(prefix + "g", fallback.g), get(prefix + "b", fallback.b)};
  }

  void finish() const {
    for (const auto& [key, value] : params_) {
      if (!used_.contains(key)) throw ParseError("unknown parameter '" + key + "' for scene '" + scene_ + "'");
    }
  }

 private:
  const SceneParams& params_;
  std::string scene_;
  std::set<std::string> used_;
};

inline void check_color(const Rgb& c, const char* what) {
  if (!in_unit_range(c)) throw ParseError(std::string(what) + " must lie in [0,1]");
}

inline void check_density(double sigma) {
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw ParseError("density parameters must be finite and >= 0");
}

}  // namespace detail

inline const std::vector<std::string>& scene_names() {
  static const std::vector<std::string> names{"constant", "step", "blob", "blobs"};
  return names;
}

/// Builds a named scene. Parameters (defaults in brackets):
///   constant: sigma [1], r g b [1 1 1]
///   step:     axis [2], pos [0], sigma0 [0], sigma1 [2], r g b [1 1 1]
///   blob:     sigma [4], s [0.3], cx cy cz [0 0 0], r g b [1 0.85 0.4],
///             rim_r rim_g rim_b [0.8 0.2 0.1]
///   blobs:    count [3], seed [1], sigma [4], s [0.25]; centers uniform in
///             [-0.6, 0.6]^3 and colors uniform in [0.2, 1]^3 from RandomStream(seed, 0)
inline AnyField make_scene(const std::string& name, const SceneParams& params) {
  detail::ParamReader p(params, name);
  if (name == "constant") {
    ConstantField f{p.get("sigma", 1.0), p.color("", {1.0, 1.0, 1.0})};
    p.finish();
    detail::check_density(f.sigma);
    detail::check_color(f.color, "color");
    return f;
  }
  if (name == "step") {
    const double axis = p.get("axis", 2.0);
    StepField f;
    f.position = p.get("pos", 0.0);
    f.sigma_before = p.get("sigma0", 0.0);
    f.sigma_after = p.get("sigma1", 2.0);
    f.color_before = f.color_after = p.color("", {1.0, 1.0, 1.0});
    p.finish();
    if (axis != 0.0 && axis != 1.0 && axis != 2.0) throw ParseError("step axis must be 0, 1 or 2");
    f.axis = static_cast<std::size_t>(axis);
    detail::check_density(f.sigma_before);
    detail::check_density(f.sigma_after);
    detail::check_color(f.color_before, "color");
    return f;
  }
  if (name == "blob") {
    BlobField f;
    f.peak = p.get("sigma", 4.0);
    f.radius = p.get("s", 0.3);
    f.center = {p.get("cx", 0.0), p.get("cy", 0.0), p.get("cz", 0.0)};
    f.core = p.color("", {1.0, 0.85, 0.4});
    f.rim = p.color("rim_", {0.8, 0.2, 0.1});
    p.finish();
    detail::check_density(f.peak);
    if (!(f.radius > 0.0) || !std::isfinite(f.radius)) throw ParseError("blob radius s must be > 0");
    detail::check_color(f.core, "core color");
    detail::check_color(f.rim, "rim color");
    return f;
  }
  if (name == "blobs") {
    const double count = p.get("count", 3.0);
    const double seed = p.get("seed", 1.0);
    const double peak = p.get("sigma", 4.0);
    const double radius = p.get("s", 0.25);
    p.finish();
    if (!(count >= 1.0) || count != std::floor(count) || count > 1000.0) {
      throw ParseError("blobs count must be an integer in [1, 1000]");
    }
    if (!(seed >= 0.0) || seed != std::floor(seed) || seed > 9007199254740992.0) {
      throw ParseError("blobs seed must be a non-negative integer");
    }
    detail::check_density(peak);
    if (!(radius > 0.0) || !std::isfinite(radius)) throw ParseError("blob radius s must be > 0");

    RandomStream rng(static_cast<std::uint64_t>(seed), 0);
    BlobsField f;
    for (std::size_t i = 0; i < static_cast<std::size_t>(count); ++i) {
      BlobField blob;
      blob.peak = peak;
      blob.radius = radius;
      blob.center = {-0.6 + 1.2 * rng.next(), -0.6 + 1.2 * rng.next(), -0.6 + 1.2 * rng.next()};
      blob.core = {0.2 + 0.8 * rng.next(), 0.2 + 0.8 * rng.next(), 0.2 + 0.8 * rng.next()};
      blob.rim = blob.core;
      f.blobs.push_back(blob);
    }
    return f;
  }
  throw ParseError("unknown scene '" + name + "' (expected constant, step, blob or blobs)");
}

}  // namespace volren
