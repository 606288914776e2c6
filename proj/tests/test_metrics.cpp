#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "oracles.hpp"
#include "uavsem/metrics.hpp"
#include "uavsem/rng.hpp"
#include "uavsem/synthimg.hpp"

using namespace uavsem;
using Catch::Approx;

TEST_CASE("identical images: infinite PSNR, unit SSIM") {
  const ImageBuffer img = generate_synthetic_image(9, 64, 64);
  const PsnrResult p = psnr(img, img);
  CHECK(p.infinite);
  CHECK(std::isinf(p.db));
  CHECK(ssim(img, img) == Approx(1.0).margin(1e-12));
}

TEST_CASE("uniform error of 0.1 gives exactly 20 dB") {
  ImageBuffer a = ImageBuffer::zeros(32, 32);
  ImageBuffer b = ImageBuffer::zeros(32, 32);
  // 0.2 in [-1, 1] maps to 0.1 in [0, 1].
  for (auto& c : b.ch) std::fill(c.begin(), c.end(), 0.2);
  const PsnrResult p = psnr(a, b);
  CHECK_FALSE(p.infinite);
  CHECK(p.db == Approx(20.0).margin(1e-9));
}

TEST_CASE("PSNR agrees with the direct-summation reference") {
  Rng rng(123);
  for (int iter = 0; iter < 25; ++iter) {
    const int size = 8 + 8 * (iter % 4);
    ImageBuffer a = generate_synthetic_image(500 + iter, size, size);
    ImageBuffer b = a;
    for (auto& c : b.ch)
      for (double& v : c) v = std::clamp(v + rng.normal(0.0, 0.05), -1.0, 1.0);
    CHECK(psnr(a, b).db == Approx(oracles::reference_psnr(a, b)).margin(1e-9));
  }
}

TEST_CASE("SSIM agrees with the direct-summation reference") {
  Rng rng(321);
  for (int iter = 0; iter < 10; ++iter) {
    const int size = 16 + 8 * (iter % 3);
    ImageBuffer a = generate_synthetic_image(700 + iter, size, size);
    ImageBuffer b = a;
    for (auto& c : b.ch)
      for (double& v : c) v = std::clamp(v + rng.normal(0.0, 0.08), -1.0, 1.0);
    CHECK(ssim(a, b) == Approx(oracles::reference_ssim(a, b)).margin(1e-6));
  }
}

TEST_CASE("SSIM drops as distortion grows") {
  const ImageBuffer a = generate_synthetic_image(42, 64, 64);
  ImageBuffer mild = a, harsh = a;
  Rng rng(9);
  for (auto& c : mild.ch)
    for (double& v : c) v = std::clamp(v + rng.normal(0.0, 0.02), -1.0, 1.0);
  Rng rng2(9);
  for (auto& c : harsh.ch)
    for (double& v : c) v = std::clamp(v + rng2.normal(0.0, 0.3), -1.0, 1.0);
  CHECK(ssim(a, mild) > ssim(a, harsh));
  CHECK(ssim(a, harsh) >= -1.0);
  CHECK(ssim(a, mild) <= 1.0);
}

TEST_CASE("metric preconditions") {
  const ImageBuffer a = ImageBuffer::zeros(32, 32);
  const ImageBuffer b = ImageBuffer::zeros(16, 16);
  CHECK_THROWS_AS(psnr(a, b), std::invalid_argument);
  CHECK_THROWS_AS(ssim(a, b), std::invalid_argument);
  const ImageBuffer tiny = ImageBuffer::zeros(8, 8);
  CHECK_THROWS_AS(ssim(tiny, tiny), std::invalid_argument);  // below window size
}
