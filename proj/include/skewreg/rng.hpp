#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

namespace skewreg {

// Deterministic random source. std::mt19937_64 is fully specified by the
// standard, so identical seeds give identical streams on every platform.
// Distribution shaping lives here instead of <random> distributions, whose
// outputs are implementation-defined and would break reproducibility
// guarantees across toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  /// Uniform double in [0, 1) built from the top 53 bits.
  double uniform01() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Unbiased integer in [0, bound) via rejection sampling.
  std::uint64_t below(std::uint64_t bound) {
    if (bound == 0) {
      throw std::invalid_argument("Rng::below: bound must be positive");
    }
    const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
    // 2^64 mod bound, computed without overflowing.
    const std::uint64_t rem = (max % bound + 1) % bound;
    const std::uint64_t limit = max - rem;
    std::uint64_t x = gen_();
    while (x > limit) {
      x = gen_();
    }
    return x % bound;
  }

  /// Standard normal via Box-Muller. Consumes exactly two uniforms per call.
  double normal() {
    const double u1 = 1.0 - uniform01();  // (0, 1], keeps log() finite
    const double u2 = uniform01();
    constexpr double two_pi = 6.283185307179586476925286766559;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
  }

  double normal(double mean, double sd) { return mean + sd * normal(); }

  /// In-place Fisher-Yates shuffle; permutation depends only on seed and size.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace skewreg
