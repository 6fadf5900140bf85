// Copyright 2026 The volren Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <variant>

#include "volren/format.hpp"
#include "volren/medium.hpp"

namespace volren {

// Optical depth above this saturates transmittance to exactly 0 (exp(-x) is
// subnormal past ~708).
inline constexpr double kSaturationDepth = 700.0;

struct OpticalDepth {
  double value = 0.0;
};

inline double transmittance_from_depth(double depth) {
  return depth > kSaturationDepth ? 0.0 : std::exp(-depth);
}

// 1 - exp(-depth) without cancellation for thin segments.
inline double opacity_from_depth(double depth) { return -std::expm1(-depth); }

namespace detail {

inline void check_in_domain(const PiecewiseMedium& medium, double t, const char* what) {
  if (!(t >= medium.t_begin() && t <= medium.t_end())) {
    throw DomainError(std::string(what) + "=" + shortest(t) + " outside medium [" + shortest(medium.t_begin()) +
                      ", " + shortest(medium.t_end()) + "]");
  }
}

}  // namespace detail

/// Index of the segment holding t. Interior boundaries belong to the segment
/// on their right; t_end() belongs to the last segment.
inline std::size_t segment_at(const PiecewiseMedium& medium, double t) {
  const auto b = medium.boundaries();
  const auto it = std::upper_bound(b.begin(), b.end(), t);
  const auto idx = static_cast<std::size_t>(std::max<std::ptrdiff_t>(it - b.begin() - 1, 0));
  return std::min(idx, medium.size() - 1);
}

inline OpticalDepth optical_depth(const PiecewiseMedium& medium, double a, double b) {
  detail::check_in_domain(medium, a, "a");
  detail::check_in_domain(medium, b, "b");
  if (a > b) throw DomainError("optical depth needs a <= b, got a=" + shortest(a) + " b=" + shortest(b));
  if (a == b) return {0.0};

  const auto t = medium.boundaries();
  const auto sigma = medium.sigmas();
  double sum = 0.0;
  for (std::size_t i = segment_at(medium, a); i < medium.size() && t[i] < b; ++i) {
    const double lo = std::max(a, t[i]);
    const double hi = std::min(b, t[i + 1]);
    if (hi > lo) sum += sigma[i] * (hi - lo);
  }
  return {sum};
}

inline double transmittance(const PiecewiseMedium& medium, double a, double b) {
  return transmittance_from_depth(optical_depth(medium, a, b).value);
}

/// Transmittance from the first boundary to boundary k, k in [0, size()].
/// k == size() is the residual transmittance of the whole medium.
inline double prefix_transmittance(const PiecewiseMedium& medium, std::size_t k) {
  if (k > medium.size()) {
    throw DomainError("prefix index " + std::to_string(k) + " outside [0, " + std::to_string(medium.size()) + "]");
  }
  return transmittance_from_depth(medium.cumulative_depth()[k]);
}

inline double residual_transmittance(const PiecewiseMedium& medium) {
  return prefix_transmittance(medium, medium.size());
}

namespace detail {

// Optical depth from t_begin() to t.
inline double depth_to(const PiecewiseMedium& medium, double t) {
  const std::size_t i = segment_at(medium, t);
  return medium.cumulative_depth()[i] + medium.sigmas()[i] * (t - medium.boundaries()[i]);
}

}  // namespace detail

// CDF of the termination distance: 1 - T(t_begin -> t).
inline double opacity(const PiecewiseMedium& medium, double t) {
  detail::check_in_domain(medium, t, "t");
  const double depth = detail::depth_to(medium, t);
  return depth > kSaturationDepth ? 1.0 : opacity_from_depth(depth);
}

// T(t) * sigma(t), right-continuous at interior boundaries.
inline double hit_pdf(const PiecewiseMedium& medium, double t) {
  detail::check_in_domain(medium, t, "t");
  const std::size_t i = segment_at(medium, t);
  return transmittance_from_depth(detail::depth_to(medium, t)) * medium.sigmas()[i];
}

struct Hit {
  double t = 0.0;
  std::size_t segment = 0;
};

struct Escaped {};

using Termination = std::variant<Hit, Escaped>;

/// Inverse-CDF sample of where a ray terminates, from u in [0, 1).
/// The target optical depth -log(1 - u) selects the segment; within it the
/// exponential is inverted analytically. Zero-density segments carry no
/// probability mass and are never selected.
inline Termination sample_termination(const PiecewiseMedium& medium, double u) {
  if (!(u >= 0.0 && u < 1.0)) throw DomainError("termination variate u=" + shortest(u) + " outside [0, 1)");
  const double target = -std::log1p(-u);
  const auto depth = medium.cumulative_depth();
  if (target >= depth.back()) return Escaped{};

  // First k with depth[k] > target; the hit lies in segment k - 1.
  const auto it = std::upper_bound(depth.begin(), depth.end(), target);
  const auto seg = static_cast<std::size_t>(it - depth.begin()) - 1;
  const double lo = medium.boundaries()[seg];
  const double hi = medium.boundaries()[seg + 1];
  const double t = lo + (target - depth[seg]) / medium.sigmas()[seg];
  return Hit{std::min(t, hi), seg};
}

}  // namespace volren
