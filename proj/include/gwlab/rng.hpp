#pragma once

#include <array>
#include <cstdint>

namespace gwlab {

// splitmix64 finalizer (bijective 64-bit mix).
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Counter-based stream derivation: seed_i = mix64(master + (i+1)*golden),
/// i.e. output i of the splitmix64 stream seeded at `master`. Streams depend
/// only on (master, index), so serial and parallel schedules agree exactly.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  return mix64(master + (index + 1) * 0x9E3779B97F4A7C15ULL);
}

/// xoshiro256** (Blackman & Vigna), state expanded from a 64-bit seed via
/// splitmix64. Self-contained so draws are reproducible across standard
/// libraries and platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t z = seed;
    for (auto& word : state_) {
      z += 0x9E3779B97F4A7C15ULL;
      word = mix64(z);
    }
  }

  std::uint64_t next() {
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

  /// Uniform in [0,1) with 53 random bits.
  double next_double() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  bool bernoulli(double p) { return next_double() < p; }

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::array<std::uint64_t, 4> state_{};
};

// Exact discrete samplers. Binomial and Poisson invert the cdf zig-zagging
// outward from the mode, so expected work is O(sd) and the mode mass never
// underflows even for large n*p.
std::int64_t sample_binomial(std::int64_t n, double p, Rng& rng);
std::int64_t sample_poisson(double mean, Rng& rng);
/// P(k) = (1-p)^k * p on {0,1,2,...}.
std::int64_t sample_geometric(double p, Rng& rng);

}  // namespace gwlab
