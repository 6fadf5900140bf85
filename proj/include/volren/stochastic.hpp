// Copyright 2026 The volren Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <thread>
#include <variant>
#include <vector>

#include "volren/medium.hpp"
#include "volren/rng.hpp"
#include "volren/transmittance.hpp"

namespace volren {

struct EstimateStats {
  Rgb mean;
  Rgb standard_error;
  std::size_t n_samples = 0;
  double escape_fraction = 0.0;
};

// Samples are drawn in fixed-size batches; batch b uses RandomStream(seed, b)
// and consumes one word per sample. Results never depend on the thread count.
inline constexpr std::size_t kBatchSize = 4096;

namespace detail {

inline std::size_t batch_count(std::size_t n_samples) { return (n_samples + kBatchSize - 1) / kBatchSize; }

inline std::size_t batch_length(std::size_t batch, std::size_t n_samples) {
  return std::min(kBatchSize, n_samples - batch * kBatchSize);
}

// Calls fn(b) for every batch b, spread over up to `threads` workers.
template <class Fn>
void for_each_batch(std::size_t batches, unsigned threads, Fn&& fn) {
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(batches)));
  if (threads <= 1) {
    for (std::size_t b = 0; b < batches; ++b) fn(b);
    return;
  }
  std::vector<std::jthread> pool;
  for (unsigned w = 0; w < threads; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t b = w; b < batches; b += threads) fn(b);
    });
  }
}

// Running mean and sum of squared deviations (Welford / Chan et al.).
struct Moments {
  double count = 0.0;
  Rgb mean;
  Rgb m2;
  std::size_t escapes = 0;

  void add(const Rgb& x) {
    count += 1.0;
    for (std::size_t k = 0; k < 3; ++k) {
      const double d = x[k] - mean[k];
      mean[k] += d / count;
      m2[k] += d * (x[k] - mean[k]);
    }
  }

  void merge(const Moments& o) {
    if (o.count == 0.0) return;
    const double total = count + o.count;
    for (std::size_t k = 0; k < 3; ++k) {
      const double d = o.mean[k] - mean[k];
      mean[k] += d * (o.count / total);
      m2[k] += o.m2[k] + d * d * (count * o.count / total);
    }
    count = total;
    escapes += o.escapes;
  }
};

}  // namespace detail

/// Monte Carlo estimate of the expected composited color: each sample draws a
/// termination event by inverting the opacity CDF and returns the emitting
/// segment's color, or the background (black if absent) when the ray escapes.
/// Bit-identical for identical (medium, background, n_samples, seed).
inline EstimateStats mc_estimate(const PiecewiseMedium& medium, const std::optional<Rgb>& background,
                                 std::size_t n_samples, std::uint64_t seed, unsigned threads = 1) {
  if (n_samples < 2) throw DomainError("mc_estimate needs at least two samples");
  const Rgb escape_color = background.value_or(Rgb{});
  const std::size_t batches = detail::batch_count(n_samples);
  std::vector<detail::Moments> partial(batches);

  detail::for_each_batch(batches, threads, [&](std::size_t b) {
    RandomStream rng(seed, b);
    detail::Moments& m = partial[b];
    const std::size_t len = detail::batch_length(b, n_samples);
    for (std::size_t j = 0; j < len; ++j) {
      const Termination event = sample_termination(medium, rng.next());
      if (const Hit* hit = std::get_if<Hit>(&event)) {
        m.add(medium.colors()[hit->segment]);
      } else {
        m.add(escape_color);
        ++m.escapes;
      }
    }
  });

  detail::Moments total;
  for (const detail::Moments& m : partial) total.merge(m);

  EstimateStats stats;
  stats.n_samples = n_samples;
  stats.mean = total.mean;
  const double n = static_cast<double>(n_samples);
  for (std::size_t k = 0; k < 3; ++k) stats.standard_error[k] = std::sqrt(total.m2[k] / (n - 1.0) / n);
  stats.escape_fraction = static_cast<double>(total.escapes) / n;
  return stats;
}

/// Empirical CDF of the termination distance at each grid point: the fraction
/// of all samples that hit at or before t. Uses the same sample streams as
/// mc_estimate.
inline std::vector<double> empirical_opacity(const PiecewiseMedium& medium, std::size_t n_samples,
                                             std::uint64_t seed, std::span<const double> t_grid,
                                             unsigned threads = 1) {
  if (n_samples < 1) throw DomainError("empirical_opacity needs at least one sample");
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    if (!(t_grid[i] >= medium.t_begin() && t_grid[i] <= medium.t_end())) {
      throw DomainError("grid point outside the medium");
    }
    if (i > 0 && t_grid[i] < t_grid[i - 1]) throw DomainError("grid must be sorted");
  }

  const std::size_t batches = detail::batch_count(n_samples);
  std::vector<std::vector<double>> hits(batches);
  detail::for_each_batch(batches, threads, [&](std::size_t b) {
    RandomStream rng(seed, b);
    const std::size_t len = detail::batch_length(b, n_samples);
    hits[b].reserve(len);
    for (std::size_t j = 0; j < len; ++j) {
      const Termination event = sample_termination(medium, rng.next());
      if (const Hit* hit = std::get_if<Hit>(&event)) hits[b].push_back(hit->t);
    }
  });

  std::vector<double> all;
  for (const auto& h : hits) all.insert(all.end(), h.begin(), h.end());
  std::sort(all.begin(), all.end());

  std::vector<double> cdf(t_grid.size());
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    const auto count = std::upper_bound(all.begin(), all.end(), t_grid[i]) - all.begin();
    cdf[i] = static_cast<double>(count) / static_cast<double>(n_samples);
  }
  return cdf;
}

}  // namespace volren
