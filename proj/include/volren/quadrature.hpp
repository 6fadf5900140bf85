// Copyright 2026 The volren Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <chrono>
#include <cmath>
#include <cstddef>
#include <optional>
#include <ostream>
#include <span>
#include <vector>

#include "volren/format.hpp"
#include "volren/medium.hpp"
#include "volren/renderer.hpp"

namespace volren {

// Piecewise-constant quadrature of the emission-absorption integral: the
// estimator used by radiance-field renderers.
template <Field F>
RenderOutput integrate_ray(const F& field, const Ray& ray, std::size_t n_segments,
                           const Placement& placement = Placement::uniform(),
                           const std::optional<Rgb>& background = {}) {
  return render_piecewise(discretize(field, ray, n_segments, placement), background);
}

enum class RiemannRule {
  kLeft,      // sample at the step start, depth accumulated before the step
  kMidpoint,  // sample at the step center, depth accumulated to the center
};

/// Brute-force Riemann sum of  integral T(t) sigma(t) c(t) dt  over the ray,
/// with T = exp(-accumulated optical depth). Deliberately self-contained:
/// it shares no accumulation code with the piecewise renderer.
/// The left rule is first order; the midpoint rule is second order and is
/// the default reference.
template <Field F>
Rgb riemann_reference(const F& field, const Ray& ray, std::size_t n_steps, RiemannRule rule = RiemannRule::kMidpoint) {
  if (n_steps < 1) throw DomainError("riemann_reference needs at least one step");
  const double a = ray.t_near();
  const double b = ray.t_far();
  const double h = (b - a) / static_cast<double>(n_steps);
  const double offset = rule == RiemannRule::kMidpoint ? 0.5 : 0.0;
  Rgb sum;
  double depth = 0.0;
  for (std::size_t i = 0; i < n_steps; ++i) {
    const double t = std::fmin(a + (static_cast<double>(i) + offset) * h, b);
    const FieldSample s = sample_field(field, ray, t);
    const double depth_here = depth + offset * s.sigma * h;
    sum += (std::exp(-depth_here) * s.sigma * h) * s.color;
    depth += s.sigma * h;
  }
  return sum;
}

struct ConvergenceRow {
  std::size_t n = 0;
  Rgb error;  // absolute error per channel
  double max_error = 0.0;
  double seconds = 0.0;
};

struct ConvergenceTable {
  Rgb reference;
  bool closed_form = false;  // reference is exact rather than a Riemann sum
  std::vector<ConvergenceRow> rows;
};

inline constexpr std::size_t kReferenceSteps = 1'000'000;

template <class F>
concept HasClosedForm = requires(const F& field, const Ray& ray) {
  { field.closed_form(ray) } -> std::convertible_to<std::optional<Rgb>>;
};

/// Error of integrate_ray (uniform placement, no background) for each n in
/// `n_list`, against the field's closed form when it has one and otherwise
/// against riemann_reference with `reference_steps` steps.
template <Field F>
ConvergenceTable convergence_table(const F& field, const Ray& ray, std::span<const std::size_t> n_list,
                                   std::size_t reference_steps = kReferenceSteps, bool allow_closed_form = true) {
  if (n_list.empty()) throw DomainError("convergence table needs at least one n");
  for (std::size_t i = 0; i < n_list.size(); ++i) {
    if (n_list[i] < 1) throw DomainError("segment counts must be >= 1");
    if (i > 0 && n_list[i] < n_list[i - 1]) throw DomainError("segment counts must be sorted");
  }

  ConvergenceTable table;
  std::optional<Rgb> exact;
  if constexpr (HasClosedForm<F>) {
    if (allow_closed_form) exact = field.closed_form(ray);
  }
  table.closed_form = exact.has_value();
  table.reference = exact ? *exact : riemann_reference(field, ray, reference_steps);

  for (std::size_t n : n_list) {
    const auto start = std::chrono::steady_clock::now();
    const RenderOutput out = integrate_ray(field, ray, n);
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
    ConvergenceRow row;
    row.n = n;
    for (std::size_t k = 0; k < 3; ++k) row.error[k] = std::fabs(out.color[k] - table.reference[k]);
    row.max_error = std::fmax(row.error.r, std::fmax(row.error.g, row.error.b));
    row.seconds = elapsed.count();
    table.rows.push_back(row);
  }
  return table;
}

/// Least-squares slope of -log(max_error) against log(n): the empirical
/// convergence order. Rows with zero error are skipped; nullopt when fewer
/// than two rows remain.
inline std::optional<double> empirical_order(std::span<const ConvergenceRow> rows) {
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  std::size_t m = 0;
  for (const ConvergenceRow& row : rows) {
    if (!(row.max_error > 0.0)) continue;
    const double x = std::log(static_cast<double>(row.n));
    const double y = -std::log(row.max_error);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++m;
  }
  if (m < 2) return std::nullopt;
  const double denom = static_cast<double>(m) * sxx - sx * sx;
  if (denom == 0.0) return std::nullopt;
  return (static_cast<double>(m) * sxy - sx * sy) / denom;
}

inline constexpr const char* kConvergenceHeader = "n,err_r,err_g,err_b,err_max,seconds";

// Errors are written shortest round-trip. With `timing` off the seconds
// column is 0 so the file is byte-stable.
inline void write_convergence_csv(std::ostream& out, std::span<const ConvergenceRow> rows, bool timing = true) {
  out << kConvergenceHeader << '\n';
  for (const ConvergenceRow& row : rows) {
    out << row.n << ',' << shortest(row.error.r) << ',' << shortest(row.error.g) << ',' << shortest(row.error.b)
        << ',' << shortest(row.max_error) << ',' << (timing ? with_precision(row.seconds, 6) : "0") << '\n';
  }
}

}  // namespace volren
