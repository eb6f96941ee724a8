#pragma once

#include <cmath>
#include <complex>
#include <cstdint>

namespace minext {

/// Name recorded in reports so runs can be reproduced bit for bit.
inline constexpr const char* kRngAlgorithm = "splitmix64-counter";

/// SplitMix64 finalizer (Steele, Lea, Flood 2014).
inline std::uint64_t splitmix64_mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Counter-based stream: output i is a pure hash of (seed, stream, i), so
/// streams can be partitioned by index and replayed from any point.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
      : key_(splitmix64_mix(splitmix64_mix(seed + 0x9E3779B97F4A7C15ULL) ^
                            splitmix64_mix(stream + 0xD1B54A32D192ED03ULL))) {}

  std::uint64_t next_u64() {
    counter_ += 0x9E3779B97F4A7C15ULL;
    return splitmix64_mix(key_ + counter_);
  }

  /// Uniform in [0, 1).
  double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform in [-1, 1).
  double next_symmetric() { return 2.0 * next_unit() - 1.0; }

  /// Uniform in the complex box [-1,1) x [-1,1).
  std::complex<double> next_box() {
    double re = next_symmetric();
    double im = next_symmetric();
    return {re, im};
  }

  /// Standard complex Gaussian, E|z|^2 = 1 (Box-Muller).
  std::complex<double> next_gaussian() {
    double u1 = next_unit();
    double u2 = next_unit();
    while (u1 <= 0.0) u1 = next_unit();
    double r = std::sqrt(-std::log(u1));
    double phi = 2.0 * M_PI * u2;
    return {r * std::cos(phi), r * std::sin(phi)};
  }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace minext
