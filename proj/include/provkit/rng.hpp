#ifndef PROVKIT_RNG_HPP
#define PROVKIT_RNG_HPP

#include <cstdint>

namespace provkit {

/// SplitMix64 (Steele, Lea & Flood, 2014). Chosen over std::mt19937 plus
/// <random> distributions because every step below is defined in terms of
/// integer arithmetic only, so sequences are bit-identical on every platform
/// and standard library. All seeded sampling in the toolkit goes through
/// this generator.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Unbiased integer in [0, bound) via rejection sampling. bound must be > 0.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
    std::uint64_t x = next();
    while (x >= limit) x = next();
    return x % bound;
  }

  /// Uniform double in [0, 1) with 53 bits of precision.
  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

}  // namespace provkit

#endif  // PROVKIT_RNG_HPP
