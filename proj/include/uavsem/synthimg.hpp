#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>

#include "uavsem/dct.hpp"
#include "uavsem/image.hpp"
#include "uavsem/rng.hpp"

namespace uavsem {

// Deterministic synthetic test images with natural-image statistics:
// a smooth low-frequency background, a handful of soft-edged shapes
// (global structure), plus image-spanning gratings and 1/f-shaped noise
// (local texture that correlates across neighboring tiles).
inline ImageBuffer generate_synthetic_image(std::uint64_t seed, int width = 256,
                                            int height = 256) {
  Rng rng(seed);
  ImageBuffer img = ImageBuffer::zeros(width, height);
  std::array<Eigen::MatrixXd, 3> acc;

  // Smooth background: random low-frequency coefficients, decaying with
  // the diagonal index. Coefficient amplitudes are scaled so pixel-domain
  // variation stays moderate under the orthonormal transform.
  const double coeff_scale = 0.18 * std::sqrt(static_cast<double>(width) * height);
  for (int c = 0; c < 3; ++c) {
    Eigen::MatrixXd coeffs = Eigen::MatrixXd::Zero(height, width);
    coeffs(0, 0) = rng.normal(0.0, 0.25) * std::sqrt(static_cast<double>(width) * height);
    for (int i = 0; i <= 5; ++i)
      for (int j = 0; j <= 5; ++j) {
        if (i == 0 && j == 0) continue;
        const double falloff = 1.0 / ((1.0 + i + j) * (1.0 + i + j));
        coeffs(i, j) = rng.normal(0.0, coeff_scale * falloff);
      }
    acc[c] = idct2(coeffs);
  }

  // Soft-edged ellipses.
  const int num_shapes = 3 + static_cast<int>(rng.uniform() * 5.0);
  for (int s = 0; s < num_shapes; ++s) {
    const double cx = rng.uniform() * width;
    const double cy = rng.uniform() * height;
    const double rx = 15.0 + rng.uniform() * 70.0;
    const double ry = 15.0 + rng.uniform() * 70.0;
    const double softness = 3.0 + rng.uniform() * 9.0;
    double color[3];
    for (double& ch : color) ch = -0.8 + 1.6 * rng.uniform();
    for (int y = 0; y < height; ++y)
      for (int x = 0; x < width; ++x) {
        const double dx = (x - cx) / rx;
        const double dy = (y - cy) / ry;
        const double d = std::sqrt(dx * dx + dy * dy);
        const double alpha = std::clamp((1.0 - d) * softness, 0.0, 1.0);
        if (alpha <= 0.0) continue;
        for (int c = 0; c < 3; ++c)
          acc[c](y, x) = acc[c](y, x) * (1.0 - alpha) + color[c] * alpha;
      }
  }

  // Image-spanning gratings: fine detail shared by neighboring tiles.
  const int num_gratings = 2 + static_cast<int>(rng.uniform() * 3.0);
  for (int g = 0; g < num_gratings; ++g) {
    const double cycles = 6.0 + rng.uniform() * 30.0;
    const double angle = rng.uniform() * std::numbers::pi;
    const double kx = cycles * std::cos(angle) / width;
    const double ky = cycles * std::sin(angle) / height;
    const double phase = rng.uniform() * 2.0 * std::numbers::pi;
    const double amplitude = 0.02 + rng.uniform() * 0.05;
    double weight[3];
    for (double& w : weight) w = 0.3 + 0.7 * rng.uniform();
    for (int y = 0; y < height; ++y)
      for (int x = 0; x < width; ++x) {
        const double v = amplitude *
                         std::sin(2.0 * std::numbers::pi * (kx * x + ky * y) + phase);
        for (int c = 0; c < 3; ++c) acc[c](y, x) += weight[c] * v;
      }
  }

  // Broadband 1/f^1.5 noise, shared across channels with per-channel gain.
  {
    Eigen::MatrixXd coeffs = Eigen::MatrixXd::Zero(height, width);
    for (int i = 0; i < height; ++i)
      for (int j = 0; j < width; ++j) {
        if (i == 0 && j == 0) continue;
        const double f = std::sqrt(static_cast<double>(i) * i +
                                   static_cast<double>(j) * j);
        coeffs(i, j) = rng.normal(0.0, 1.0) / std::pow(1.0 + f, 1.5);
      }
    Eigen::MatrixXd field = idct2(coeffs);
    const double sd = std::sqrt(field.array().square().mean());
    if (sd > 0.0) field /= sd;
    double gain[3];
    for (double& g : gain) g = 0.015 + 0.02 * rng.uniform();
    for (int c = 0; c < 3; ++c) acc[c] += gain[c] * field;
  }

  for (int c = 0; c < 3; ++c)
    for (int y = 0; y < height; ++y)
      for (int x = 0; x < width; ++x)
        img.at(c, y, x) = std::clamp(acc[c](y, x), -1.0, 1.0);
  return img;
}

}  // namespace uavsem
