// Copyright 2026 The volren Authors
// SPDX-License-Identifier: Apache-2.0

// volren: render rays and images of emission-absorption media, check the
// renderer against Monte Carlo, and measure quadrature convergence.
//
// Exit codes: 0 success, 1 statistical validation failed, 2 usage or input error.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "volren/volren.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitStatFailure = 1;
constexpr int kExitUsage = 2;

unsigned default_threads() { return std::max(1u, std::thread::hardware_concurrency()); }

std::optional<volren::Rgb> optional_rgb(const std::string& text) {
  if (text.empty()) return std::nullopt;
  const volren::Rgb c = volren::parse_rgb(text);
  if (!volren::in_unit_range(c)) throw volren::ParseError("background color must lie in [0,1]");
  return c;
}

std::string join_values(const std::vector<double>& values, int digits) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    out += volren::with_precision(values[i], digits);
  }
  return out;
}

struct RenderRayArgs {
  std::string medium;
  std::string background;
  std::string form = "density";
  int precision = 12;
};

int render_ray(const RenderRayArgs& args) {
  const volren::PiecewiseMedium medium = volren::read_medium_csv(args.medium);
  const auto bg = optional_rgb(args.background);
  volren::RenderOutput out;
  if (args.form == "alpha") {
    std::vector<volren::Alpha> alphas;
    for (std::size_t i = 0; i < medium.size(); ++i) {
      alphas.push_back(volren::Alpha::from_density(medium.sigmas()[i], medium.deltas()[i]));
    }
    out = volren::render_alpha(alphas, medium.colors(), bg);
  } else {
    out = volren::render_piecewise(medium, bg);
  }
  std::cout << "color," << volren::join(out.color, args.precision) << '\n'
            << "residual," << volren::with_precision(out.residual_transmittance, args.precision) << '\n'
            << "weights," << join_values(out.weights, args.precision) << '\n'
            << "alphas," << join_values(out.alphas, args.precision) << '\n';
  return kExitOk;
}

struct RenderImageArgs {
  std::string scene;
  std::string params;
  std::string resolution = "64x64";
  std::size_t samples = 64;
  bool stratified = false;
  std::uint64_t seed = 0;
  std::string out;
  std::string background;
  std::string view = "-1,1,-1,1";
  std::string depth = "-2,2";
  unsigned threads = 0;
};

int render_image(const RenderImageArgs& args) {
  const volren::AnyField field = volren::make_scene(args.scene, volren::parse_params(args.params));
  volren::OrthoCamera camera;
  std::tie(camera.width, camera.height) = volren::parse_resolution(args.resolution);
  const auto view = volren::parse_numbers(args.view, 4, 4, "view box");
  const auto depth = volren::parse_numbers(args.depth, 2, 2, "depth range");
  camera.x_min = view[0];
  camera.x_max = view[1];
  camera.y_min = view[2];
  camera.y_max = view[3];
  camera.z_min = depth[0];
  camera.z_max = depth[1];

  volren::ImageOptions options;
  options.n_segments = args.samples;
  options.stratified = args.stratified;
  options.seed = args.seed;
  options.background = optional_rgb(args.background);
  options.threads = args.threads == 0 ? default_threads() : args.threads;
  volren::write_ppm(args.out, volren::render_image(field, camera, options));
  return kExitOk;
}

struct ValidateArgs {
  std::string medium;
  std::size_t samples = 100000;
  std::uint64_t seed = 0;
  std::string expect;
  std::string background;
  unsigned threads = 0;
};

int validate(const ValidateArgs& args) {
  const volren::PiecewiseMedium medium = volren::read_medium_csv(args.medium);
  const auto bg = optional_rgb(args.background);
  const volren::RenderOutput exact = volren::render_piecewise(medium, bg);
  const volren::Rgb expected = args.expect.empty() ? exact.color : volren::parse_rgb(args.expect);
  const volren::EstimateStats stats = volren::mc_estimate(medium, bg, args.samples, args.seed,
                                                          args.threads == 0 ? default_threads() : args.threads);

  bool ok = true;
  std::cout << "channel,mean,expected,stderr,z\n";
  const char* names[] = {"r", "g", "b"};
  for (std::size_t k = 0; k < 3; ++k) {
    const double diff = stats.mean[k] - expected[k];
    double z = 0.0;
    if (stats.standard_error[k] > 0.0) {
      z = diff / stats.standard_error[k];
    } else if (diff != 0.0) {
      z = diff > 0.0 ? INFINITY : -INFINITY;
    }
    ok = ok && std::fabs(z) <= 4.0;
    std::cout << names[k] << ',' << volren::with_precision(stats.mean[k], 12) << ','
              << volren::with_precision(expected[k], 12) << ',' << volren::with_precision(stats.standard_error[k], 6)
              << ',' << volren::with_precision(z, 6) << '\n';
  }
  std::cout << "escape_fraction," << volren::with_precision(stats.escape_fraction, 12) << '\n'
            << "residual," << volren::with_precision(exact.residual_transmittance, 12) << '\n'
            << (ok ? "PASS" : "FAIL") << '\n';
  return ok ? kExitOk : kExitStatFailure;
}

struct ConvergenceArgs {
  std::string scene;
  std::string params;
  std::string ns;
  std::string out;
  std::string origin = "0,0,-2";
  std::string direction = "0,0,1";
  std::string range = "0,4";
  std::size_t reference_steps = volren::kReferenceSteps;
  bool riemann = false;
  bool no_timing = false;
};

int convergence(const ConvergenceArgs& args) {
  const volren::AnyField field = volren::make_scene(args.scene, volren::parse_params(args.params));
  const auto ns = volren::parse_counts(args.ns);
  const auto range = volren::parse_numbers(args.range, 2, 2, "ray range");
  const volren::Ray ray =
      volren::Ray::normalized(volren::parse_vec3(args.origin), volren::parse_vec3(args.direction), range[0], range[1]);
  const volren::ConvergenceTable table =
      volren::convergence_table(field, ray, std::span<const std::size_t>(ns), args.reference_steps, !args.riemann);

  std::ofstream out(args.out);
  if (!out) throw volren::Error("cannot open '" + args.out + "' for writing");
  volren::write_convergence_csv(out, table.rows, !args.no_timing);
  if (!out) throw volren::Error("failed writing '" + args.out + "'");

  std::cout << "reference," << volren::join(table.reference, 12) << '\n'
            << "reference_kind," << (table.closed_form ? "closed_form" : "riemann") << '\n';
  if (const auto order = volren::empirical_order(table.rows)) {
    std::cout << "empirical_order," << volren::with_precision(*order, 4) << '\n';
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Emission-absorption volume rendering toolkit"};
  app.require_subcommand(1);

  RenderRayArgs ray_args;
  auto* ray_cmd = app.add_subcommand("render-ray", "Composite one ray through a medium CSV file");
  ray_cmd->add_option("--medium", ray_args.medium, "Medium CSV (t0,t1,sigma,r,g,b)")->required();
  ray_cmd->add_option("--background", ray_args.background, "Background color R,G,B");
  ray_cmd->add_option("--form", ray_args.form, "Compositing form")->check(CLI::IsMember({"density", "alpha"}));
  ray_cmd->add_option("--precision", ray_args.precision, "Significant digits printed")->check(CLI::Range(1, 17));

  RenderImageArgs image_args;
  auto* image_cmd = app.add_subcommand("render-image", "Render an orthographic PPM image of a built-in scene");
  image_cmd->add_option("--scene", image_args.scene, "constant | step | blob | blobs")->required();
  image_cmd->add_option("--params", image_args.params, "Scene parameters K=V,...");
  image_cmd->add_option("--res", image_args.resolution, "Resolution WxH");
  image_cmd->add_option("--samples", image_args.samples, "Segments per ray")->check(CLI::PositiveNumber);
  image_cmd->add_flag("--stratified", image_args.stratified, "Jitter the sample inside each segment");
  image_cmd->add_option("--seed", image_args.seed, "Seed for stratified placement");
  image_cmd->add_option("--out", image_args.out, "Output PPM path")->required();
  image_cmd->add_option("--background", image_args.background, "Background color R,G,B");
  image_cmd->add_option("--view", image_args.view, "View box XMIN,XMAX,YMIN,YMAX");
  image_cmd->add_option("--depth", image_args.depth, "Ray z range ZMIN,ZMAX");
  image_cmd->add_option("--threads", image_args.threads, "Worker threads (0 = all cores)");

  ValidateArgs validate_args;
  auto* validate_cmd = app.add_subcommand("validate", "Compare a Monte Carlo estimate with the renderer");
  validate_cmd->add_option("--medium", validate_args.medium, "Medium CSV")->required();
  validate_cmd->add_option("--samples", validate_args.samples, "Monte Carlo samples")->check(CLI::Range(2ul, 1ul << 40));
  validate_cmd->add_option("--seed", validate_args.seed, "RNG seed");
  validate_cmd->add_option("--expect", validate_args.expect, "Override the expected color R,G,B");
  validate_cmd->add_option("--background", validate_args.background, "Background color R,G,B");
  validate_cmd->add_option("--threads", validate_args.threads, "Worker threads (0 = all cores)");

  ConvergenceArgs conv_args;
  auto* conv_cmd = app.add_subcommand("convergence", "Quadrature error against a reference for increasing n");
  conv_cmd->add_option("--scene", conv_args.scene, "constant | step | blob | blobs")->required();
  conv_cmd->add_option("--params", conv_args.params, "Scene parameters K=V,...");
  conv_cmd->add_option("--ns", conv_args.ns, "Segment counts, e.g. 8,16,32")->required();
  conv_cmd->add_option("--out", conv_args.out, "Output CSV path")->required();
  conv_cmd->add_option("--origin", conv_args.origin, "Ray origin X,Y,Z");
  conv_cmd->add_option("--direction", conv_args.direction, "Ray direction X,Y,Z (normalized)");
  conv_cmd->add_option("--range", conv_args.range, "Ray parameter range TNEAR,TFAR");
  conv_cmd->add_option("--reference-steps", conv_args.reference_steps, "Riemann reference steps")
      ->check(CLI::PositiveNumber);
  conv_cmd->add_flag("--riemann", conv_args.riemann, "Use the Riemann reference even when a closed form exists");
  conv_cmd->add_flag("--no-timing", conv_args.no_timing, "Write 0 in the seconds column");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*ray_cmd) return render_ray(ray_args);
    if (*image_cmd) return render_image(image_args);
    if (*validate_cmd) return validate(validate_args);
    if (*conv_cmd) return convergence(conv_args);
  } catch (const volren::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
