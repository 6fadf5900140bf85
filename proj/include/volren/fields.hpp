// Copyright 2026 The volren Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <concepts>
#include <cstddef>
#include <numbers>
#include <optional>
#include <variant>
#include <vector>

#include "volren/medium.hpp"

namespace volren {

// Built-in procedural fields. Each one can report the exact expected color
// along a ray (no background) through closed_form() when that has a closed
// form; the quadrature module prefers it over a brute-force reference.

namespace detail {

// Expected color of two consecutive homogeneous pieces.
inline Rgb two_piece_color(double depth_front, const Rgb& front, double depth_back, const Rgb& back) {
  return -std::expm1(-depth_front) * front + (std::exp(-depth_front) * -std::expm1(-depth_back)) * back;
}

}  // namespace detail

struct ConstantField {
  double sigma = 1.0;
  Rgb color{1.0, 1.0, 1.0};

  FieldSample evaluate(const Vec3&) const { return {sigma, color}; }

  std::optional<Rgb> closed_form(const Ray& ray) const { return -std::expm1(-sigma * ray.length()) * color; }
};

/// Half-spaces split by the plane x[axis] = position: `before` where
/// x[axis] < position, `after` elsewhere.
struct StepField {
  std::size_t axis = 2;
  double position = 0.0;
  double sigma_before = 0.0;
  double sigma_after = 2.0;
  Rgb color_before{1.0, 1.0, 1.0};
  Rgb color_after{1.0, 1.0, 1.0};

  FieldSample evaluate(const Vec3& p) const {
    return p[axis] < position ? FieldSample{sigma_before, color_before} : FieldSample{sigma_after, color_after};
  }

  std::optional<Rgb> closed_form(const Ray& ray) const {
    const double o = ray.origin()[axis];
    const double d = ray.direction()[axis];
    const double a = ray.t_near();
    const double b = ray.t_far();
    const bool starts_before = o + a * d < position;
    double split = b;
    if (d != 0.0) split = std::fmin(std::fmax((position - o) / d, a), b);
    if ((d > 0.0) != starts_before || d == 0.0) split = b;  // never crosses the plane

    const double s0 = starts_before ? sigma_before : sigma_after;
    const double s1 = starts_before ? sigma_after : sigma_before;
    const Rgb& c0 = starts_before ? color_before : color_after;
    const Rgb& c1 = starts_before ? color_after : color_before;
    return detail::two_piece_color(s0 * (split - a), c0, s1 * (b - split), c1);
  }
};

/// Isotropic Gaussian density peak * exp(-|x - center|^2 / (2 radius^2)).
/// Emission blends from `rim` to `core` with the same Gaussian profile, so a
/// blob with rim == core emits a constant color.
struct BlobField {
  Vec3 center;
  double radius = 0.3;
  double peak = 4.0;
  Rgb core{1.0, 1.0, 1.0};
  Rgb rim{1.0, 1.0, 1.0};

  double profile(const Vec3& p) const {
    const Vec3 d = p - center;
    return std::exp(-dot(d, d) / (2.0 * radius * radius));
  }

  FieldSample evaluate(const Vec3& p) const {
    const double g = profile(p);
    Rgb color = (1.0 - g) * rim + g * core;
    for (std::size_t k = 0; k < 3; ++k) color[k] = std::fmin(std::fmax(color[k], 0.0), 1.0);
    return {peak * g, color};
  }

  // Integral of the density along the ray, via erf.
  double line_integral(const Ray& ray) const {
    const Vec3 rel = center - ray.origin();
    const double t0 = dot(rel, ray.direction());
    const double perp2 = std::fmax(dot(rel, rel) - t0 * t0, 0.0);
    const double scale = radius * std::numbers::sqrt2;
    const double span = std::erf((ray.t_far() - t0) / scale) - std::erf((ray.t_near() - t0) / scale);
    return peak * std::exp(-perp2 / (2.0 * radius * radius)) * radius * std::sqrt(std::numbers::pi / 2.0) * span;
  }

  std::optional<Rgb> closed_form(const Ray& ray) const {
    if (!(core == rim)) return std::nullopt;
    return -std::expm1(-line_integral(ray)) * core;
  }
};

/// Superposition of blobs. Density adds; emission is the density-weighted
/// mix of the blob colors (black where the total density is zero).
struct BlobsField {
  std::vector<BlobField> blobs;

  FieldSample evaluate(const Vec3& p) const {
    FieldSample out;
    Rgb weighted;
    for (const BlobField& blob : blobs) {
      const FieldSample s = blob.evaluate(p);
      out.sigma += s.sigma;
      weighted += s.sigma * s.color;
    }
    if (out.sigma > 0.0) {
      out.color = (1.0 / out.sigma) * weighted;
      for (std::size_t k = 0; k < 3; ++k) out.color[k] = std::fmin(std::fmax(out.color[k], 0.0), 1.0);
    }
    return out;
  }

  std::optional<Rgb> closed_form(const Ray& ray) const {
    if (blobs.empty()) return Rgb{};
    double depth = 0.0;
    for (const BlobField& blob : blobs) {
      if (!(blob.core == blob.rim) || !(blob.core == blobs.front().core)) return std::nullopt;
      depth += blob.line_integral(ray);
    }
    return -std::expm1(-depth) * blobs.front().core;
  }
};

/// Runtime choice among the built-in fields.
class AnyField {
 public:
  using Variant = std::variant<ConstantField, StepField, BlobField, BlobsField>;

  template <class F>
    requires(!std::same_as<F, AnyField>) && std::constructible_from<Variant, F>
  AnyField(F field) : field_(std::move(field)) {}

  FieldSample evaluate(const Vec3& p) const {
    return std::visit([&](const auto& f) { return f.evaluate(p); }, field_);
  }

  std::optional<Rgb> closed_form(const Ray& ray) const {
    return std::visit([&](const auto& f) { return f.closed_form(ray); }, field_);
  }

  const Variant& variant() const { return field_; }

 private:
  Variant field_;
};

}  // namespace volren
