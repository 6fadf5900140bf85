// Copyright 2026 The volren Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace volren {

// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the domain of an operation (t past the ray bounds, a > b, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// A medium, ray or other value type failed its construction invariants.
class ConstructionError : public Error {
 public:
  using Error::Error;
};

// A field returned a density or color it is not allowed to return.
class EvaluationError : public Error {
 public:
  using Error::Error;
};

// Malformed text input (medium CSV, scene parameters, CLI lists).
class ParseError : public Error {
 public:
  using Error::Error;
};

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  constexpr double operator[](std::size_t i) const { return i == 0 ? x : (i == 1 ? y : z); }

  friend constexpr Vec3 operator+(const Vec3& a, const Vec3& b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
  friend constexpr Vec3 operator-(const Vec3& a, const Vec3& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
  friend constexpr Vec3 operator*(double s, const Vec3& v) { return {s * v.x, s * v.y, s * v.z}; }
  friend constexpr bool operator==(const Vec3&, const Vec3&) = default;
};

constexpr double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline double norm(const Vec3& v) { return std::sqrt(dot(v, v)); }

// Linear RGB radiance. Colors stored in media and returned by fields live in [0,1].
struct Rgb {
  double r = 0.0;
  double g = 0.0;
  double b = 0.0;

  constexpr double operator[](std::size_t i) const { return i == 0 ? r : (i == 1 ? g : b); }
  constexpr double& operator[](std::size_t i) { return i == 0 ? r : (i == 1 ? g : b); }

  constexpr Rgb& operator+=(const Rgb& o) {
    r += o.r;
    g += o.g;
    b += o.b;
    return *this;
  }
  friend constexpr Rgb operator+(Rgb a, const Rgb& b) { return a += b; }
  friend constexpr Rgb operator-(const Rgb& a, const Rgb& b) { return {a.r - b.r, a.g - b.g, a.b - b.b}; }
  friend constexpr Rgb operator*(double s, const Rgb& c) { return {s * c.r, s * c.g, s * c.b}; }
  friend constexpr bool operator==(const Rgb&, const Rgb&) = default;
};

inline bool is_finite(const Rgb& c) { return std::isfinite(c.r) && std::isfinite(c.g) && std::isfinite(c.b); }

inline bool in_unit_range(const Rgb& c) {
  for (std::size_t i = 0; i < 3; ++i) {
    if (!(c[i] >= 0.0 && c[i] <= 1.0)) return false;
  }
  return true;
}

inline double max_abs_diff(const Rgb& a, const Rgb& b) {
  return std::fmax(std::fabs(a.r - b.r), std::fmax(std::fabs(a.g - b.g), std::fabs(a.b - b.b)));
}

}  // namespace volren
