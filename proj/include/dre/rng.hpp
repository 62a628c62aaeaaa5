#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace dre {

inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// SplitMix64: counter-based 64-bit generator. The state advances by a fixed
// odd constant and the output is a bijective finalizer of the counter, so
// streams are cheap to split and every draw is a pure function of
// (seed, draw index). Gaussians come from Box-Muller on consecutive draws.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    return mix64(z);
  }

  // Uniform on [0, 1) with 53 random bits.
  double next_uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double next_gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = next_uniform();
    while (u1 <= 0.0) u1 = next_uniform();
    const double u2 = next_uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(t);
    have_spare_ = true;
    return r * std::cos(t);
  }

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

// Independent substream for (seed, stream). Documented in the README so
// generated instances can be reproduced elsewhere.
inline SplitMix64 substream(std::uint64_t seed, std::uint64_t stream) {
  return SplitMix64(mix64(seed + 0x9e3779b97f4a7c15ull * (stream + 1)));
}

}  // namespace dre
