#pragma once

#include <cmath>
#include <cstdint>

namespace minorext {

inline constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ULL;

// splitmix64 finalizer (Steele, Lea, Flood 2014),
// http://prng.di.unimi.it/splitmix64.c
inline std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Counter-based stream: draw i is mix64(key + i*gamma), so a stream is a
// pure function of (seed, stream_id) and child streams can be derived in
// O(1) without touching the parent's position. Normal variates use the
// Marsaglia polar method with a fixed rejection protocol, so a given build
// is bit-reproducible.
struct RngStream {
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;

  static RngStream root(std::uint64_t seed) {
    return RngStream(seed, mix64(seed + kGoldenGamma));
  }

  RngStream() = default;

  RngStream(std::uint64_t seed_, std::uint64_t stream_id_)
      : seed(seed_),
        stream_id(stream_id_),
        key_(mix64(mix64(seed_ + kGoldenGamma) ^ (stream_id_ + kGoldenGamma))) {}

  std::uint64_t next_u64() noexcept {
    ctr_ += kGoldenGamma;
    return mix64(key_ + ctr_);
  }

  // Uniform in [0,1) with 53 random bits.
  double next_unit() noexcept {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Standard normal via the polar method; caches the spare deviate.
  double next_normal() noexcept {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    for (;;) {
      const double u = 2.0 * next_unit() - 1.0;
      const double v = 2.0 * next_unit() - 1.0;
      const double s = u * u + v * v;
      if (s >= 1.0 || s == 0.0) continue;
      const double f = std::sqrt(-2.0 * std::log(s) / s);
      spare_ = v * f;
      has_spare_ = true;
      return u * f;
    }
  }

 private:
  std::uint64_t key_ = 0;
  std::uint64_t ctr_ = 0;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// Child stream: pure function of the parent's identity and the index, not of
// the parent's current position. Distinct indices give distinct streams.
inline RngStream derive_stream(const RngStream& parent, std::uint64_t index) {
  const std::uint64_t child_id =
      mix64(parent.stream_id ^ mix64(index + kGoldenGamma));
  return RngStream(parent.seed, child_id);
}

inline const char* generator_name() { return "splitmix64-counter/polar-v1"; }

}  // namespace minorext
