#pragma once

#include <cstdint>

namespace probesim {

inline constexpr std::uint64_t splitmix64(std::uint64_t& state) noexcept {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Stream domains keep walk, probe and expert randomness independent even when
/// they share a master seed and a stream index.
enum class StreamDomain : std::uint64_t {
  kTrial = 1,
  kTreeProbe = 2,
  kMonteCarlo = 3,
  kExpert = 4,
  kSampling = 5,
  kUser = 6,
};

/// xoshiro256** generator. Each (seed, domain, index) triple names an
/// independent stream, so trial k draws the same numbers no matter which
/// thread runs it.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed) noexcept : Rng(seed, StreamDomain::kUser, 0) {}

  Rng(std::uint64_t seed, StreamDomain domain, std::uint64_t index) noexcept {
    std::uint64_t sm = seed;
    std::uint64_t key = splitmix64(sm);
    std::uint64_t mix = key ^ (static_cast<std::uint64_t>(domain) * 0xd1b54a32d192ed03ULL);
    std::uint64_t h = splitmix64(mix) ^ index;
    for (auto& word : s_) word = splitmix64(h);
  }

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return ~result_type{0}; }

  result_type operator()() noexcept {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  /// Uniform double in [0, 1).
  double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, bound), bound > 0 (Lemire's method).
  std::uint64_t below(std::uint64_t bound) noexcept {
    std::uint64_t x = (*this)();
    __uint128_t m = static_cast<__uint128_t>(x) * bound;
    auto low = static_cast<std::uint64_t>(m);
    if (low < bound) {
      const std::uint64_t threshold = (0 - bound) % bound;
      while (low < threshold) {
        x = (*this)();
        m = static_cast<__uint128_t>(x) * bound;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t s_[4]{};
};

}  // namespace probesim
