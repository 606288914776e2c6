#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace uavsem {

// Finalizer of the splitmix64 generator. Bijective on 64-bit words.
constexpr std::uint64_t splitmix_scramble(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Derives a decorrelated sub-seed from a master seed and a stream tag
// (trial index, slot index, purpose id, ...). Sub-streams obtained this
// way can be consumed in any order without affecting each other, which
// keeps parallel runs bit-identical to sequential ones.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t tag) {
  return splitmix_scramble(master ^ splitmix_scramble(tag));
}

// Deterministic random source. std::mt19937_64 output is fully specified
// by the standard, and the uniform/normal mappings below are explicit, so
// a given seed produces the same draw sequence on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform double in [0, 1), 53 random mantissa bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Standard normal via Box-Muller; the second draw of each pair is cached.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = 1.0 - uniform();  // (0, 1], keeps log() finite
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

  double normal(double mean, double stddev) { return mean + stddev * normal(); }

  std::uint64_t next_u64() { return engine_(); }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace uavsem
