#ifndef PREFENDER_COMMON_HPP_
#define PREFENDER_COMMON_HPP_

#include <cstdint>

namespace prefender {

using Addr = uint64_t;
using Cycle = uint64_t;

inline constexpr Addr block_of(Addr addr, uint64_t line_size) {
  return addr & ~(line_size - 1);
}

inline constexpr Addr page_of(Addr addr, uint64_t page_size) {
  return addr / page_size;
}

inline constexpr bool is_pow2(uint64_t v) { return v != 0 && (v & (v - 1)) == 0; }

// Deterministic, platform-independent generator. std::uniform_int_distribution
// is not bit-stable across standard libraries, so all seeded draws go
// through this.
struct SplitMix64 {
  uint64_t state;

  explicit SplitMix64(uint64_t seed) : state(seed) {}

  uint64_t next() {
    uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Unbiased draw in [0, n) by rejection.
  uint64_t next_below(uint64_t n) {
    uint64_t threshold = (0 - n) % n;
    for (;;) {
      uint64_t r = next();
      if (r >= threshold) return r % n;
    }
  }
};

}  // namespace prefender

#endif  // PREFENDER_COMMON_HPP_
