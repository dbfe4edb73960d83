#ifndef PREFENDER_CACHE_HPP_
#define PREFENDER_CACHE_HPP_

#include <array>
#include <cstdint>
#include <vector>

#include "prefender/common.hpp"

namespace prefender {

struct CacheConfig {
  uint64_t line_size = 64;
  uint64_t l1_size = 64 * 1024;
  uint32_t l1_ways = 2;
  uint64_t l2_size = 2 * 1024 * 1024;
  uint32_t l2_ways = 8;
  uint64_t page_size = 4096;
  uint32_t mshr_count = 4;
  uint32_t mshr_merge_limit = 20;
  uint32_t lat_l1_hit = 2;
  uint32_t lat_l2_hit = 20;
  uint32_t lat_mem = 100;
  uint64_t phys_mem = 0x8000000;  // 128 MiB

  uint32_t l1_sets() const { return static_cast<uint32_t>(l1_size / (l1_ways * line_size)); }
  uint32_t l2_sets() const { return static_cast<uint32_t>(l2_size / (l2_ways * line_size)); }

  // Throws std::invalid_argument on a malformed geometry.
  void validate() const;
};

enum class CacheLevel : uint8_t { L1, L2 };

enum class HitLevel : uint8_t { L1, L2, MEM, MSHR_MERGE };

const char* hit_level_name(HitLevel h);

enum class PrefetchSource : uint8_t { ST, AT, RP_GUIDED, TAGGED, STRIDE };
inline constexpr size_t kPrefetchSourceCount = 5;
const char* prefetch_source_name(PrefetchSource s);
inline bool is_basic_prefetch(PrefetchSource s) {
  return s == PrefetchSource::TAGGED || s == PrefetchSource::STRIDE;
}

enum class PrefetchStatus : uint8_t { ACCEPTED, DROPPED_PRESENT, DROPPED_NO_MSHR };
const char* prefetch_status_name(PrefetchStatus s);

struct AccessResult {
  uint32_t latency = 0;
  HitLevel hit_level = HitLevel::MEM;
  bool was_tagged_hit = false;  // demand hit on a prefetched-not-yet-used line
};

struct PortCounters {
  std::array<uint64_t, kPrefetchSourceCount> attempts{};
  std::array<uint64_t, kPrefetchSourceCount> accepted{};
};

// Two-level inclusive cache with LRU replacement, a flush that invalidates
// both levels, and a small MSHR file tracking in-flight prefetch fills.
// Demand misses are serviced synchronously (the core blocks), so only
// prefetches occupy MSHR entries; a demand access that matches an in-flight
// fill completes at the residual fill time.
class MemoryHierarchy {
 public:
  explicit MemoryHierarchy(const CacheConfig& cfg);

  AccessResult access(Addr addr, Cycle now);
  void flush(Addr addr);
  PrefetchStatus prefetch(Addr blk, PrefetchSource source, Cycle now);
  bool contains(CacheLevel level, Addr blk, Cycle now);

  uint32_t set_index(CacheLevel level, Addr addr) const;
  size_t live_mshr_count() const { return mshrs_.size(); }
  const PortCounters& counters() const { return counters_; }
  const CacheConfig& config() const { return cfg_; }

 private:
  struct Line {
    Addr blk = 0;
    Cycle fill_at = 0;
    uint64_t lru = 0;
    bool valid = false;
    bool tagged = false;  // prefetched and not yet demanded
  };
  struct Level {
    uint32_t sets = 0;
    uint32_t ways = 0;
    std::vector<Line> lines;  // sets * ways

    Line* find(Addr blk, uint64_t line_size);
    Line& victim(Addr blk, uint64_t line_size);
  };
  struct Mshr {
    Addr blk = 0;
    Cycle fill_at = 0;
    bool basic = false;
    bool fill_l2 = false;
    uint32_t merged = 0;
    uint64_t seq = 0;
  };

  void retire_fills(Cycle now);
  void install(CacheLevel level, Addr blk, Cycle fill_at, bool tagged);
  Mshr* find_mshr(Addr blk);

  CacheConfig cfg_;
  Level l1_, l2_;
  std::vector<Mshr> mshrs_;
  PortCounters counters_;
  uint64_t recency_ = 0;
  uint64_t mshr_seq_ = 0;
};

}  // namespace prefender

#endif  // PREFENDER_CACHE_HPP_
