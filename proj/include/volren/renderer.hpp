// Copyright 2026 The volren Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "volren/format.hpp"
#include "volren/medium.hpp"
#include "volren/transmittance.hpp"

namespace volren {

/// Result of compositing one ray through a piecewise medium.
/// weights[n] = T_n * alphas[n] is the probability the ray terminates in
/// segment n; residual_transmittance is the probability it escapes, so the
/// weights and the residual sum to one.
struct RenderOutput {
  Rgb color;
  std::vector<double> weights;
  std::vector<double> alphas;
  double residual_transmittance = 1.0;
};

/// Per-segment compositing opacity in [0, 1]. 1 is the opaque limit.
class Alpha {
 public:
  explicit Alpha(double value) : value_(value) {
    if (!(value >= 0.0 && value <= 1.0)) throw DomainError("alpha " + shortest(value) + " outside [0, 1]");
  }

  // 1 - exp(-sigma * delta), evaluated through expm1.
  static Alpha from_density(double sigma, double delta) { return Alpha(opacity_from_depth(sigma * delta)); }

  double value() const { return value_; }

 private:
  double value_;
};

// Expected color of a homogeneous slab [a, b]: color * (1 - exp(-sigma (b - a))).
inline Rgb render_homogeneous(double sigma, const Rgb& color, double a, double b) {
  if (!(a < b)) throw DomainError("homogeneous segment needs a < b, got a=" + shortest(a) + " b=" + shortest(b));
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw DomainError("density must be finite and >= 0");
  return opacity_from_depth(sigma * (b - a)) * color;
}

struct Weights {
  std::vector<double> weights;
  double residual_transmittance = 1.0;
};

/// Termination weights T_n * alpha_n, with T_n taken from the accumulated
/// optical depth rather than a running product.
inline Weights weights(const PiecewiseMedium& medium) {
  const std::size_t n = medium.size();
  Weights out;
  out.weights.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.weights[i] = prefix_transmittance(medium, i) * opacity_from_depth(medium.sigmas()[i] * medium.deltas()[i]);
  }
  out.residual_transmittance = residual_transmittance(medium);
  return out;
}

inline RenderOutput render_piecewise(const PiecewiseMedium& medium, const std::optional<Rgb>& background = {}) {
  Weights w = weights(medium);
  RenderOutput out;
  out.alphas.resize(medium.size());
  for (std::size_t i = 0; i < medium.size(); ++i) {
    out.alphas[i] = opacity_from_depth(medium.sigmas()[i] * medium.deltas()[i]);
    out.color += w.weights[i] * medium.colors()[i];
  }
  if (background) out.color += w.residual_transmittance * *background;
  out.weights = std::move(w.weights);
  out.residual_transmittance = w.residual_transmittance;
  return out;
}

/// Front-to-back alpha compositing. T_n = prod_{k<n} (1 - alpha_k), summed in
/// log space so an opaque alpha drives every later T_n to exactly 0.
inline RenderOutput render_alpha(std::span<const Alpha> alphas, std::span<const Rgb> colors,
                                 const std::optional<Rgb>& background = {}) {
  if (alphas.size() != colors.size()) throw DomainError("alphas and colors differ in length");
  RenderOutput out;
  out.alphas.resize(alphas.size());
  out.weights.resize(alphas.size());
  double log_t = 0.0;
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    const double a = alphas[i].value();
    const double t = std::exp(log_t);
    out.alphas[i] = a;
    out.weights[i] = t * a;
    out.color += out.weights[i] * colors[i];
    log_t += std::log1p(-a);
  }
  out.residual_transmittance = std::exp(log_t);
  if (background) out.color += out.residual_transmittance * *background;
  return out;
}

// Unchecked convenience: alpha values as plain doubles.
inline RenderOutput render_alpha(std::span<const double> alphas, std::span<const Rgb> colors,
                                 const std::optional<Rgb>& background = {}) {
  std::vector<Alpha> checked;
  checked.reserve(alphas.size());
  for (double a : alphas) checked.emplace_back(a);
  return render_alpha(std::span<const Alpha>(checked), colors, background);
}

/// Color as sum_n c_n (T(t_n) - T(t_{n+1})) + T(D) c_bg. Transmittance is
/// evaluated per boundary through optical_depth, independent of the cached
/// prefix sums used by render_piecewise.
inline Rgb render_telescoping(const PiecewiseMedium& medium, const std::optional<Rgb>& background = {}) {
  const auto t = medium.boundaries();
  const double start = medium.t_begin();
  Rgb color;
  double t_front = 1.0;
  for (std::size_t i = 0; i < medium.size(); ++i) {
    const double t_back = transmittance(medium, start, t[i + 1]);
    color += (t_front - t_back) * medium.colors()[i];
    t_front = t_back;
  }
  if (background) color += t_front * *background;
  return color;
}

struct RenderGradient {
  std::vector<Rgb> d_sigma;    // dC/d sigma_n, per channel
  std::vector<double> d_color; // dC_k/d c_{n,k}, identical for every channel k
};

/// Analytic partials of the composited color with segment geometry held fixed:
///   dC/dc_n     = w_n
///   dC/dsigma_n = delta_n [T_n (1 - alpha_n) c_n - sum_{m>n} w_m c_m - T(D) c_bg]
inline RenderGradient grad_render(const PiecewiseMedium& medium, const std::optional<Rgb>& background = {}) {
  const std::size_t n = medium.size();
  const Weights w = weights(medium);
  RenderGradient g;
  g.d_sigma.resize(n);
  g.d_color = w.weights;

  Rgb behind = background ? w.residual_transmittance * *background : Rgb{};
  for (std::size_t i = n; i-- > 0;) {
    const double delta = medium.deltas()[i];
    const double survive = prefix_transmittance(medium, i) * std::exp(-medium.sigmas()[i] * delta);
    g.d_sigma[i] = delta * (survive * medium.colors()[i] - behind);
    behind += w.weights[i] * medium.colors()[i];
  }
  return g;
}

}  // namespace volren
