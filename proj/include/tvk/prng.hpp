#pragma once

#include <cstdint>

namespace tvk {

/// splitmix64. Integer-only so seeded streams are bit-stable across platforms;
/// the update constants below are the format contract for reproducible seeds.
struct SplitMix64 {
  uint64_t state;

  explicit SplitMix64(uint64_t seed) : state(seed) {}

  uint64_t next() {
    uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  /// next() mod bound; bound must be positive. The modulo bias is irrelevant at
  /// the ranges used here and keeps the stream definition one-line.
  uint64_t below(uint64_t bound) { return next() % bound; }

  long long int_in(long long lo, long long hi) {
    return lo + static_cast<long long>(below(static_cast<uint64_t>(hi - lo + 1)));
  }
};

} // namespace tvk
