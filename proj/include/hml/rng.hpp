#pragma once

#include <array>
#include <cstdint>

namespace hml::rng {

/// SplitMix64 finalizer. Used for seeding and for deriving substream roots.
inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// xoshiro256** seeded through a SplitMix64 chain.
///
/// Streams form a deterministic tree: substream(key) derives an independent
/// generator from (root, key). Each Monte Carlo replicate, and each matrix
/// entry when windowed sampling needs it, gets its own reproducible stream
/// independent of evaluation order and thread count. Not cryptographic; the
/// 64-bit derivation hash is collision-safe at desk scale only.
class Stream {
public:
  explicit Stream(std::uint64_t seed) : root_(seed) {
    std::uint64_t s = seed;
    for (auto& w : state_) {
      s += 0x9E3779B97F4A7C15ULL;
      w = mix64(s);
    }
    if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0)
      state_[3] = 0x9E3779B97F4A7C15ULL;
  }

  Stream substream(std::uint64_t key) const {
    return Stream(mix64(root_ ^ mix64(key + 0x632BE59BD9B4E019ULL)));
  }

  std::uint64_t next_u64() {
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

  /// Uniform on [0,1), 53-bit mantissa.
  double next_unit() { return (next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform on (0,1]; safe as a log() argument.
  double next_unit_pos() { return ((next_u64() >> 11) + 1) * 0x1.0p-53; }

  std::uint64_t root() const { return root_; }

private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t root_;
  std::array<std::uint64_t, 4> state_{};
};

}
