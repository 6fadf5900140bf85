// Copyright 2026 The volren Authors
// SPDX-License-Identifier: Apache-2.0

// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "oracles.hpp"
#include "process.hpp"
#include "volren/volren.hpp"

using namespace volren;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(double v) { return with_precision(v, 3); }

unsigned worker_count() { return std::max(1u, std::thread::hardware_concurrency()); }

Rgb random_color(std::mt19937_64& gen) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  return {unit(gen), unit(gen), unit(gen)};
}

// 1. Riemann reference against the homogeneous closed form.
Verdict homogeneous_closed_form() {
  const auto start = Clock::now();
  std::mt19937_64 gen(101);
  std::uniform_real_distribution<double> sigma_dist(0.0, 5.0);
  std::uniform_real_distribution<double> length_dist(0.1, 4.0);
  std::uniform_real_distribution<double> near_dist(0.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const double sigma = sigma_dist(gen);
    const double a = near_dist(gen);
    const double b = a + length_dist(gen);
    const Rgb color = random_color(gen);
    const Rgb reference = riemann_reference(ConstantField{sigma, color}, oracle::z_ray(a, b), kReferenceSteps);
    worst = std::max(worst, max_abs_diff(reference, render_homogeneous(sigma, color, a, b)));
  }
  const double elapsed = seconds_since(start);
  return {worst <= 1e-5 && elapsed < 5.0, "max error " + fmt(worst) + ", " + fmt(elapsed) + " s"};
}

// 2. Density, alpha and telescoping forms agree; weights plus residual sum to one.
Verdict discrete_equivalences() {
  const auto start = Clock::now();
  std::mt19937_64 gen(202);
  double worst_form = 0.0;
  double worst_sum = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const PiecewiseMedium m = oracle::random_medium(gen);
    const Rgb bg = random_color(gen);
    const RenderOutput density = render_piecewise(m, bg);
    std::vector<Alpha> alphas;
    for (std::size_t k = 0; k < m.size(); ++k) alphas.push_back(Alpha::from_density(m.sigmas()[k], m.deltas()[k]));
    const RenderOutput alpha = render_alpha(alphas, m.colors(), bg);
    const Rgb telescoping = render_telescoping(m, bg);
    worst_form = std::max({worst_form, max_abs_diff(density.color, alpha.color),
                           max_abs_diff(density.color, telescoping)});
    double total = density.residual_transmittance;
    for (double w : density.weights) total += w;
    worst_sum = std::max(worst_sum, std::fabs(total - 1.0));
  }
  const double elapsed = seconds_since(start);
  return {worst_form <= 1e-12 && worst_sum <= 1e-12 && elapsed < 1.0,
          "form gap " + fmt(worst_form) + ", normalization gap " + fmt(worst_sum) + ", " + fmt(elapsed) + " s"};
}

// 3. T(a, c) = T(a, b) T(b, c).
Verdict factorization() {
  std::mt19937_64 gen(303);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const PiecewiseMedium m = oracle::random_medium(gen);
    double p[3];
    for (double& x : p) x = m.t_begin() + (m.t_end() - m.t_begin()) * unit(gen);
    std::sort(p, p + 3);
    const double lhs = transmittance(m, p[0], p[2]);
    const double rhs = transmittance(m, p[0], p[1]) * transmittance(m, p[1], p[2]);
    worst = std::max(worst, std::fabs(lhs - rhs));
  }
  return {worst <= 1e-12, "max gap " + fmt(worst)};
}

// 4. Cutting every segment into 7 equal parts leaves the render unchanged.
Verdict splitting_invariance() {
  std::mt19937_64 gen(404);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const PiecewiseMedium m = oracle::random_medium(gen);
    const Rgb bg = random_color(gen);
    const RenderOutput coarse = render_piecewise(m, bg);
    const RenderOutput fine = render_piecewise(oracle::subdivide(m, 7), bg);
    worst = std::max({worst, max_abs_diff(coarse.color, fine.color),
                      std::fabs(coarse.residual_transmittance - fine.residual_transmittance)});
  }
  return {worst < 1e-12, "max change " + fmt(worst)};
}

// 5. Monte Carlo estimate and termination CDF against the renderer.
Verdict monte_carlo() {
  const auto start = Clock::now();
  constexpr std::size_t kSamples = 100000;
  std::mt19937_64 gen(505);
  double worst_z = 0.0;
  double worst_sup = 0.0;
  for (std::uint64_t i = 0; i < 50; ++i) {
    const PiecewiseMedium m = oracle::random_medium(gen);
    const Rgb bg = random_color(gen);
    const Rgb exact = render_piecewise(m, bg).color;
    const EstimateStats stats = mc_estimate(m, bg, kSamples, 5000 + i, worker_count());
    for (std::size_t k = 0; k < 3; ++k) {
      const double diff = stats.mean[k] - exact[k];
      const double se = stats.standard_error[k];
      const double z = se > 0.0 ? diff / se : (std::fabs(diff) <= 1e-12 ? 0.0 : INFINITY);
      worst_z = std::max(worst_z, std::fabs(z));
    }
    std::vector<double> grid;
    for (std::size_t g = 0; g <= 400; ++g) grid.push_back(m.t_begin() + (m.t_end() - m.t_begin()) * g / 400.0);
    grid.back() = m.t_end();
    const std::vector<double> cdf = empirical_opacity(m, kSamples, 5000 + i, grid, worker_count());
    for (std::size_t g = 0; g < grid.size(); ++g) worst_sup = std::max(worst_sup, std::fabs(cdf[g] - opacity(m, grid[g])));
  }
  const double elapsed = seconds_since(start);
  return {worst_z <= 4.0 && worst_sup < 0.01 && elapsed < 30.0,
          "max |z| " + fmt(worst_z) + ", CDF sup distance " + fmt(worst_sup) + ", " + fmt(elapsed) + " s"};
}

// 6. Analytic gradients against central differences.
Verdict gradients() {
  std::mt19937_64 gen(606);
  oracle::MediumSpec spec;
  spec.max_segments = 8;
  spec.min_sigma = 0.05;
  spec.zero_sigma_probability = 0.0;
  spec.min_color = 0.01;
  spec.max_color = 0.99;
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const PiecewiseMedium m = oracle::random_medium(gen, spec);
    const Rgb bg = random_color(gen);
    const RenderGradient g = grad_render(m, bg);
    for (std::size_t n = 0; n < m.size(); ++n) {
      const double h = 1e-4 * std::max(m.sigmas()[n], 1e-2);
      const Rgb up = render_piecewise(oracle::with_sigma(m, n, m.sigmas()[n] + h), bg).color;
      const Rgb down = render_piecewise(oracle::with_sigma(m, n, m.sigmas()[n] - h), bg).color;
      for (std::size_t k = 0; k < 3; ++k) {
        worst = std::max(worst, oracle::relative_error(g.d_sigma[n][k], (up[k] - down[k]) / (2 * h)));
        const double hc = 1e-4;
        const double cup = render_piecewise(oracle::with_color(m, n, k, m.colors()[n][k] + hc), bg).color[k];
        const double cdown = render_piecewise(oracle::with_color(m, n, k, m.colors()[n][k] - hc), bg).color[k];
        worst = std::max(worst, oracle::relative_error(g.d_color[n], (cup - cdown) / (2 * hc)));
      }
    }
  }
  return {worst < 1e-5, "max relative error " + fmt(worst)};
}

// 7. Blob quadrature error shrinks along n = 64, 256, 1024, 4096.
Verdict quadrature_convergence() {
  const AnyField blob = make_scene("blob", {});
  const Ray ray({0.0, 0.0, -2.0}, {0.0, 0.0, 1.0}, 0.0, 4.0);
  const Rgb reference = riemann_reference(blob, ray, kReferenceSteps);
  std::string detail = "errors";
  bool pass = true;
  double previous = INFINITY;
  for (std::size_t n : {64, 256, 1024, 4096}) {
    const double err = max_abs_diff(integrate_ray(blob, ray, n).color, reference);
    pass = pass && err < previous;
    previous = err;
    detail += " " + fmt(err);
  }
  return {pass, detail};
}

// 8. CLI golden output and reproducible images.
Verdict cli_golden() {
  const auto r = oracle::run_cli("render-ray --medium " + oracle::data_file("two_segment.csv"));
  std::istringstream out(r.out);
  std::string color, residual;
  std::getline(out, color);
  std::getline(out, residual);
  const bool golden = r.exit_code == 0 && color == "color,0.5,0.25,0" && residual == "residual,0.25";

  const auto dir = oracle::scratch_dir("acceptance");
  bool identical = true;
  const std::string invocations[] = {
      "render-image --scene blob --res 48x32 --samples 32",
      "render-image --scene blobs --params count=5,seed=2 --res 40x40 --samples 24 --stratified --seed 7",
      "render-image --scene step --params axis=0,sigma0=0.5 --res 16x16 --samples 8 --background 0.1,0.2,0.3",
  };
  for (const std::string& args : invocations) {
    const auto a = dir / "a.ppm";
    const auto b = dir / "b.ppm";
    const bool ran = oracle::run_cli(args + " --threads 1 --out " + a.string()).exit_code == 0 &&
                     oracle::run_cli(args + " --threads 3 --out " + b.string()).exit_code == 0;
    identical = identical && ran && !oracle::slurp(a).empty() && oracle::slurp(a) == oracle::slurp(b);
  }
  std::filesystem::remove_all(dir);
  return {golden && identical, std::string("render-ray ") + (golden ? "matches" : "differs") + ", render-image " +
                                   (identical ? "byte-identical" : "differs")};
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Verdict()>> criteria[] = {
      {"homogeneous closed form", homogeneous_closed_form},
      {"discrete equivalences", discrete_equivalences},
      {"transmittance factorization", factorization},
      {"segment-splitting invariance", splitting_invariance},
      {"Monte Carlo consistency", monte_carlo},
      {"gradient correctness", gradients},
      {"quadrature convergence", quadrature_convergence},
      {"CLI golden files", cli_golden},
  };
  int failures = 0;
  int index = 0;
  for (const auto& [name, check] : criteria) {
    ++index;
    Verdict v;
    try {
      v = check();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    failures += v.pass ? 0 : 1;
    std::printf("%s %d %s: %s\n", v.pass ? "PASS" : "FAIL", index, name, v.detail.c_str());
  }
  return failures == 0 ? 0 : 1;
}
