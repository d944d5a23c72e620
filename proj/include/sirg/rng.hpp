#pragma once

#include <cstdint>

namespace sirg {

// Counter-based splittable generator (splitmix64).  Streams derived through
// derive_stream() are statistically independent for distinct indices, which
// makes parallel sampling deterministic: results depend only on (seed, index),
// never on scheduling.

inline constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ull;

// Finalizing mixer; bijective on 64-bit words.
inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Published child-stream derivation: mix(seed, stream_index).
inline std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t stream_index) {
  return mix64(seed ^ mix64(stream_index * kGoldenGamma + kGoldenGamma));
}

class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    state_ += kGoldenGamma;
    return mix64(state_);
  }

  // Uniform in [0, 1), 53 random bits.
  double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return next_unit() < p; }

  // Uniform integer in [0, bound); bound >= 1.  Rejection-free Lemire reduction.
  std::uint64_t next_below(std::uint64_t bound) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next()) * bound) >> 64);
  }

  SplitMix64 split(std::uint64_t stream_index) const {
    return SplitMix64(derive_stream(state_, stream_index));
  }

 private:
  std::uint64_t state_;
};

}  // namespace sirg
