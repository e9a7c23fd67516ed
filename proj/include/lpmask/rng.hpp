#pragma once

#include <cstdint>

namespace lpmask {

// splitmix64: state advances by the golden-gamma increment, output is the
// 64-bit finalizer mix of the new state. Every random draw in the toolkit
// goes through this generator so that seeded runs replay bit-exactly, even
// across implementations (the algorithm is spelled out in the README).
class SplitMix64 {
public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform-ish integer in [lo, hi], defined as lo + next() mod (hi-lo+1).
  /// The modulo bias is irrelevant here; the fixed rule is what matters.
  std::int64_t next_in(std::int64_t lo, std::int64_t hi) {
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1u;
    return lo + static_cast<std::int64_t>(next() % span);
  }

private:
  std::uint64_t state_;
};

/// Derives the seed for (trial, stream) from a master seed. Streams 0 and 1
/// are the instance and key streams of the audit harness. Defined as the
/// splitmix64 finalizer of master + gamma * (2*trial + stream + 1), which is
/// injective in (trial, stream) for stream in {0, 1}.
inline std::uint64_t seed_split(std::uint64_t master, std::uint64_t trial,
                                std::uint64_t stream) {
  std::uint64_t z = master + 0x9E3779B97F4A7C15ULL * (2 * trial + stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

} // namespace lpmask
