// Copyright 2026 The volren Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "volren/format.hpp"
#include "volren/rng.hpp"
#include "volren/types.hpp"

namespace volren {

/// Ray r(t) = origin + t * direction restricted to [t_near, t_far].
/// The direction is unit length to within 1e-9, 0 <= t_near < t_far.
class Ray {
 public:
  static constexpr double kUnitTolerance = 1e-9;

  Ray(const Vec3& origin, const Vec3& direction, double t_near, double t_far)
      : origin_(origin), direction_(direction), t_near_(t_near), t_far_(t_far) {
    if (!std::isfinite(origin.x) || !std::isfinite(origin.y) || !std::isfinite(origin.z)) {
      throw ConstructionError("ray origin is not finite");
    }
    if (!(std::fabs(norm(direction) - 1.0) <= kUnitTolerance)) {
      throw ConstructionError("ray direction is not unit length");
    }
    if (!std::isfinite(t_near) || !std::isfinite(t_far) || !(t_near >= 0.0)) {
      throw ConstructionError("ray bounds must be finite with t_near >= 0");
    }
    if (!(t_near < t_far)) throw ConstructionError("ray bounds must satisfy t_near < t_far");
  }

  // Normalizes `direction` before validating.
  static Ray normalized(const Vec3& origin, const Vec3& direction, double t_near, double t_far) {
    const double len = norm(direction);
    if (!(len > 0.0) || !std::isfinite(len)) throw ConstructionError("ray direction has zero length");
    return Ray(origin, (1.0 / len) * direction, t_near, t_far);
  }

  const Vec3& origin() const { return origin_; }
  const Vec3& direction() const { return direction_; }
  double t_near() const { return t_near_; }
  double t_far() const { return t_far_; }
  double length() const { return t_far_ - t_near_; }

 private:
  Vec3 origin_;
  Vec3 direction_;
  double t_near_;
  double t_far_;
};

inline Vec3 ray_point(const Ray& ray, double t) {
  if (!(t >= ray.t_near() && t <= ray.t_far())) {
    throw DomainError("ray parameter t=" + shortest(t) + " outside [" + shortest(ray.t_near()) + ", " +
                      shortest(ray.t_far()) + "]");
  }
  return ray.origin() + t * ray.direction();
}

struct FieldSample {
  double sigma = 0.0;
  Rgb color;
};

/// Anything evaluable at a point in space to a density and an emitted color.
template <class F>
concept Field = requires(const F& field, const Vec3& p) {
  { field.evaluate(p) } -> std::convertible_to<FieldSample>;
};

template <Field F>
FieldSample sample_field(const F& field, const Ray& ray, double t) {
  const FieldSample s = field.evaluate(ray_point(ray, t));
  if (!std::isfinite(s.sigma) || s.sigma < 0.0) {
    throw EvaluationError("field returned invalid density " + shortest(s.sigma) + " at t=" + shortest(t));
  }
  if (!in_unit_range(s.color)) {
    throw EvaluationError("field returned color outside [0,1] at t=" + shortest(t));
  }
  return s;
}

/// Ordered segments [t_n, t_{n+1}] with constant density and color on each.
/// Segment indices in the API are 0-based; error messages number segments
/// from 1 ("n=1" is the first segment) to match medium files.
class PiecewiseMedium {
 public:
  PiecewiseMedium(std::vector<double> boundaries, std::vector<double> sigmas, std::vector<Rgb> colors)
      : boundaries_(std::move(boundaries)), sigmas_(std::move(sigmas)), colors_(std::move(colors)) {
    if (boundaries_.size() < 2) throw ConstructionError("medium needs at least one segment");
    const std::size_t n = boundaries_.size() - 1;
    if (sigmas_.size() != n || colors_.size() != n) {
      throw ConstructionError("length mismatch: " + std::to_string(boundaries_.size()) + " boundaries, " +
                              std::to_string(sigmas_.size()) + " densities, " + std::to_string(colors_.size()) +
                              " colors");
    }
    if (!std::isfinite(boundaries_[0])) throw ConstructionError("non-finite boundary at n=1");
    deltas_.resize(n);
    depth_.resize(n + 1);
    depth_[0] = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const std::string at = " at n=" + std::to_string(i + 1);
      if (!std::isfinite(boundaries_[i + 1])) throw ConstructionError("non-finite boundary" + at);
      const double delta = boundaries_[i + 1] - boundaries_[i];
      if (delta == 0.0) throw ConstructionError("zero-length segment" + at);
      if (delta < 0.0) throw ConstructionError("decreasing boundaries" + at);
      if (std::isnan(sigmas_[i])) throw ConstructionError("NaN density" + at);
      if (sigmas_[i] < 0.0) throw ConstructionError("negative density" + at);
      if (!std::isfinite(sigmas_[i])) throw ConstructionError("non-finite density" + at);
      if (!is_finite(colors_[i])) throw ConstructionError("non-finite color" + at);
      if (!in_unit_range(colors_[i])) throw ConstructionError("color outside [0,1]" + at);
      deltas_[i] = delta;
      depth_[i + 1] = depth_[i] + sigmas_[i] * delta;
    }
  }

  std::size_t size() const { return sigmas_.size(); }

  std::span<const double> boundaries() const { return boundaries_; }
  std::span<const double> sigmas() const { return sigmas_; }
  std::span<const Rgb> colors() const { return colors_; }
  std::span<const double> deltas() const { return deltas_; }

  // Optical depth accumulated from the first boundary up to boundary k, k in [0, size()].
  std::span<const double> cumulative_depth() const { return depth_; }

  double t_begin() const { return boundaries_.front(); }
  double t_end() const { return boundaries_.back(); }

 private:
  std::vector<double> boundaries_;
  std::vector<double> sigmas_;
  std::vector<Rgb> colors_;
  std::vector<double> deltas_;
  std::vector<double> depth_;
};

inline PiecewiseMedium make_piecewise(std::vector<double> boundaries, std::vector<double> sigmas,
                                      std::vector<Rgb> colors) {
  return PiecewiseMedium(std::move(boundaries), std::move(sigmas), std::move(colors));
}

// Where each segment's (sigma, color) is read from during discretization.
struct Placement {
  enum class Kind { kUniform, kStratified };

  Kind kind = Kind::kUniform;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;

  static Placement uniform() { return {}; }
  static Placement stratified(std::uint64_t seed, std::uint64_t stream = 0) {
    return {Kind::kStratified, seed, stream};
  }
};

/// Partitions [t_near, t_far] into `n_segments` equal segments and point-samples
/// the field once per segment: at the midpoint (uniform) or at a uniform draw
/// inside the segment from RandomStream(seed, stream) (stratified).
template <Field F>
PiecewiseMedium discretize(const F& field, const Ray& ray, std::size_t n_segments,
                           const Placement& placement = Placement::uniform()) {
  if (n_segments < 1) throw DomainError("discretize needs at least one segment");
  const double a = ray.t_near();
  const double b = ray.t_far();
  const double len = b - a;
  std::vector<double> boundaries(n_segments + 1);
  for (std::size_t k = 0; k < n_segments; ++k) {
    boundaries[k] = a + len * (static_cast<double>(k) / static_cast<double>(n_segments));
  }
  boundaries[n_segments] = b;

  std::vector<double> sigmas(n_segments);
  std::vector<Rgb> colors(n_segments);
  RandomStream rng(placement.seed, placement.stream);
  for (std::size_t k = 0; k < n_segments; ++k) {
    const double lo = boundaries[k];
    const double hi = boundaries[k + 1];
    double t = 0.5 * (lo + hi);
    if (placement.kind == Placement::Kind::kStratified) {
      t = std::fmin(lo + rng.next() * (hi - lo), hi);
    }
    const FieldSample s = sample_field(field, ray, t);
    sigmas[k] = s.sigma;
    colors[k] = s.color;
  }
  return PiecewiseMedium(std::move(boundaries), std::move(sigmas), std::move(colors));
}

}  // namespace volren
