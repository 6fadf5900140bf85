// Copyright 2026 The volren Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "volren/medium.hpp"
#include "volren/quadrature.hpp"

namespace volren {

/// Orthographic camera looking down +z. Pixel (col, row) shoots a ray from
/// z = z_min through the center of its cell in the [x_min, x_max] x
/// [y_min, y_max] view box; row 0 is the top (y_max) edge.
struct OrthoCamera {
  std::size_t width = 64;
  std::size_t height = 64;
  double x_min = -1.0, x_max = 1.0;
  double y_min = -1.0, y_max = 1.0;
  double z_min = -2.0, z_max = 2.0;

  void validate() const {
    if (width == 0 || height == 0) throw DomainError("image resolution must be positive");
    if (!(x_min < x_max) || !(y_min < y_max) || !(z_min < z_max)) throw DomainError("empty camera view box");
  }

  Ray pixel_ray(std::size_t col, std::size_t row) const {
    const double u = (static_cast<double>(col) + 0.5) / static_cast<double>(width);
    const double v = (static_cast<double>(row) + 0.5) / static_cast<double>(height);
    const Vec3 origin{x_min + u * (x_max - x_min), y_max - v * (y_max - y_min), z_min};
    return Ray(origin, {0.0, 0.0, 1.0}, 0.0, z_max - z_min);
  }
};

struct Image {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<Rgb> pixels;  // row-major, top row first

  const Rgb& at(std::size_t col, std::size_t row) const { return pixels[row * width + col]; }
};

struct ImageOptions {
  std::size_t n_segments = 64;
  bool stratified = false;
  std::uint64_t seed = 0;
  std::optional<Rgb> background;
  unsigned threads = 1;
};

/// One integrate_ray per pixel. With stratified placement pixel p draws from
/// RandomStream(seed, p). Rows are split across threads but written to fixed
/// slots, so the image does not depend on the thread count.
template <Field F>
Image render_image(const F& field, const OrthoCamera& camera, const ImageOptions& options) {
  camera.validate();
  if (options.n_segments < 1) throw DomainError("need at least one segment per ray");
  Image image{camera.width, camera.height, std::vector<Rgb>(camera.width * camera.height)};

  auto render_row = [&](std::size_t row) {
    for (std::size_t col = 0; col < camera.width; ++col) {
      const std::size_t index = row * camera.width + col;
      const Placement placement =
          options.stratified ? Placement::stratified(options.seed, index) : Placement::uniform();
      image.pixels[index] =
          integrate_ray(field, camera.pixel_ray(col, row), options.n_segments, placement, options.background).color;
    }
  };

  const unsigned workers = std::max(1u, std::min<unsigned>(options.threads, static_cast<unsigned>(camera.height)));
  if (workers == 1) {
    for (std::size_t row = 0; row < camera.height; ++row) render_row(row);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t row = w; row < camera.height; row += workers) render_row(row);
      });
    }
  }
  return image;
}

// floor(clamp(c, 0, 1) * 255 + 0.5)
inline std::uint8_t to_byte(double c) {
  const double clamped = std::isnan(c) ? 0.0 : std::fmin(std::fmax(c, 0.0), 1.0);
  return static_cast<std::uint8_t>(std::floor(clamped * 255.0 + 0.5));
}

// Binary PPM: "P6\n<w> <h>\n255\n" followed by RGB bytes, no comments.
inline std::string encode_ppm(const Image& image) {
  std::string out = "P6\n" + std::to_string(image.width) + " " + std::to_string(image.height) + "\n255\n";
  out.reserve(out.size() + image.pixels.size() * 3);
  for (const Rgb& p : image.pixels) {
    out.push_back(static_cast<char>(to_byte(p.r)));
    out.push_back(static_cast<char>(to_byte(p.g)));
    out.push_back(static_cast<char>(to_byte(p.b)));
  }
  return out;
}

inline void write_ppm(const std::string& path, const Image& image) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  const std::string bytes = encode_ppm(image);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error("failed writing '" + path + "'");
}

}  // namespace volren
