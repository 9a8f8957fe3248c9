#pragma once

// Deterministic random source.
//
// Algorithm (fixed, so runs replay bit-for-bit across implementations):
//   * seeding:   SplitMix64 (Steele, Lea, Flood 2014) expands a 64-bit seed
//                into the 256-bit state.
//   * generator: xoshiro256** 1.0 (Blackman, Vigna 2018).
//   * streams:   stream_seed(master, i) = splitmix64_mix(master + (i+1)*golden)
//                gives an independent seed per sweep cell / replicate.
//   * bounded:   uniform_below(n) uses Lemire's multiply-shift with rejection
//                of the biased low region (unbiased).
//   * real:      uniform01() = (next() >> 11) * 2^-53, in [0, 1).
//   * Poisson:   Knuth's product method on chunks of mean <= 16; chunk sums
//                are exact by Poisson additivity.
// No std:: distribution is used because their algorithms are unspecified.

#include <cmath>
#include <cstdint>
#include <limits>

namespace pscrd {

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

constexpr std::uint64_t splitmix64_mix(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t stream_seed(std::uint64_t master, std::uint64_t index) noexcept {
  return splitmix64_mix(master + (index + 1) * kGolden);
}

class Rng {
public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed) noexcept {
    std::uint64_t sm = seed;
    for (auto& word : state_) {
      sm += kGolden;
      word = splitmix64_mix(sm);
    }
  }

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept { return next(); }

  result_type next() noexcept {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Uniform integer in [0, bound). bound must be > 0.
  std::uint64_t uniform_below(std::uint64_t bound) noexcept {
    unsigned __int128 m = static_cast<unsigned __int128>(next()) * bound;
    auto low = static_cast<std::uint64_t>(m);
    if (low < bound) {
      const std::uint64_t threshold = (0 - bound) % bound;
      while (low < threshold) {
        m = static_cast<unsigned __int128>(next()) * bound;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  double uniform01() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform01(); }

  std::uint64_t poisson(double mean) noexcept {
    if (!(mean > 0.0)) return 0;
    constexpr double kChunk = 16.0;
    std::uint64_t total = 0;
    double remaining = mean;
    while (remaining > 0.0) {
      const double part = remaining > kChunk ? kChunk : remaining;
      remaining -= part;
      const double limit = std::exp(-part);
      double product = uniform01();
      while (product > limit) {
        ++total;
        product *= uniform01();
      }
    }
    return total;
  }

  Rng split(std::uint64_t stream) noexcept { return Rng(stream_seed(next(), stream)); }

private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t state_[4]{};
};

}  // namespace pscrd
