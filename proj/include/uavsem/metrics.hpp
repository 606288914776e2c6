#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "uavsem/image.hpp"

namespace uavsem {

struct PsnrResult {
  double db = 0.0;
  bool infinite = false;  // exact reconstruction (MSE = 0)
};

namespace detail {

inline void require_same_shape(const ImageBuffer& a, const ImageBuffer& b) {
  if (a.width != b.width || a.height != b.height)
    throw std::invalid_argument("metrics: image dimensions differ");
}

// Samples live in [-1, 1]; metrics are defined on [0, 1].
inline double to_unit(double s) { return (s + 1.0) / 2.0; }

}  // namespace detail

// 10 log10(1 / MSE) with the MSE taken over all pixels and channels on
// the [0, 1] scale.
inline PsnrResult psnr(const ImageBuffer& ref, const ImageBuffer& test) {
  detail::require_same_shape(ref, test);
  double sum_sq = 0.0;
  for (int c = 0; c < 3; ++c)
    for (std::size_t i = 0; i < ref.pixel_count(); ++i) {
      const double d = detail::to_unit(ref.ch[c][i]) - detail::to_unit(test.ch[c][i]);
      sum_sq += d * d;
    }
  const double mse = sum_sq / (3.0 * ref.pixel_count());
  if (mse == 0.0) return {std::numeric_limits<double>::infinity(), true};
  return {10.0 * std::log10(1.0 / mse), false};
}

// SSIM with an 11x11 Gaussian window (sigma 1.5), K1 = 0.01, K2 = 0.03,
// dynamic range 1. Window statistics use separable convolution; scores
// are averaged over all fully-covered window positions, then over the
// three channels.
inline double ssim(const ImageBuffer& ref, const ImageBuffer& test) {
  detail::require_same_shape(ref, test);
  constexpr int kWindow = 11;
  constexpr int kHalf = kWindow / 2;
  constexpr double kSigma = 1.5;
  constexpr double kC1 = 0.01 * 0.01;
  constexpr double kC2 = 0.03 * 0.03;

  const int w = ref.width;
  const int h = ref.height;
  if (w < kWindow || h < kWindow)
    throw std::invalid_argument("ssim: image smaller than the window");

  double window[kWindow];
  double wsum = 0.0;
  for (int i = 0; i < kWindow; ++i) {
    const double d = i - kHalf;
    window[i] = std::exp(-d * d / (2.0 * kSigma * kSigma));
    wsum += window[i];
  }
  for (double& v : window) v /= wsum;  // separable taps of a unit-sum 2-D kernel

  const int vw = w - kWindow + 1;  // valid window positions
  const int vh = h - kWindow + 1;

  std::vector<double> x(ref.pixel_count()), y(ref.pixel_count());
  // Row pass buffers: h rows x vw columns, for the five moment maps.
  std::vector<double> rx(static_cast<std::size_t>(h) * vw), ry(rx.size()),
      rxx(rx.size()), ryy(rx.size()), rxy(rx.size());

  double total = 0.0;
  for (int c = 0; c < 3; ++c) {
    for (std::size_t i = 0; i < ref.pixel_count(); ++i) {
      x[i] = detail::to_unit(ref.ch[c][i]);
      y[i] = detail::to_unit(test.ch[c][i]);
    }
    for (int row = 0; row < h; ++row) {
      for (int col = 0; col < vw; ++col) {
        double sx = 0.0, sy = 0.0, sxx = 0.0, syy = 0.0, sxy = 0.0;
        for (int t = 0; t < kWindow; ++t) {
          const double xv = x[static_cast<std::size_t>(row) * w + col + t];
          const double yv = y[static_cast<std::size_t>(row) * w + col + t];
          sx += window[t] * xv;
          sy += window[t] * yv;
          sxx += window[t] * xv * xv;
          syy += window[t] * yv * yv;
          sxy += window[t] * xv * yv;
        }
        const std::size_t o = static_cast<std::size_t>(row) * vw + col;
        rx[o] = sx;
        ry[o] = sy;
        rxx[o] = sxx;
        ryy[o] = syy;
        rxy[o] = sxy;
      }
    }
    double channel_sum = 0.0;
    for (int row = 0; row < vh; ++row) {
      for (int col = 0; col < vw; ++col) {
        double mx = 0.0, my = 0.0, mxx = 0.0, myy = 0.0, mxy = 0.0;
        for (int t = 0; t < kWindow; ++t) {
          const std::size_t o = static_cast<std::size_t>(row + t) * vw + col;
          mx += window[t] * rx[o];
          my += window[t] * ry[o];
          mxx += window[t] * rxx[o];
          myy += window[t] * ryy[o];
          mxy += window[t] * rxy[o];
        }
        const double var_x = mxx - mx * mx;
        const double var_y = myy - my * my;
        const double cov = mxy - mx * my;
        const double score = ((2.0 * mx * my + kC1) * (2.0 * cov + kC2)) /
                             ((mx * mx + my * my + kC1) * (var_x + var_y + kC2));
        channel_sum += score;
      }
    }
    total += channel_sum / (static_cast<double>(vw) * vh);
  }
  return total / 3.0;
}

}  // namespace uavsem
