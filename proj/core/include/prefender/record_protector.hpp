#ifndef PREFENDER_RECORD_PROTECTOR_HPP_
#define PREFENDER_RECORD_PROTECTOR_HPP_

#include <cstdint>
#include <optional>
#include <vector>

#include "prefender/access_tracker.hpp"
#include "prefender/common.hpp"

namespace prefender {

struct RpConfig {
  bool enabled = true;
  uint32_t entry_count = 8;
  uint32_t unprotect_prefetch_limit = 32;
  Cycle unprotect_idle_cycles = 100000;
};

struct ScaleBufferEntry {
  uint64_t sc = 0;
  Addr anchor = 0;
  uint64_t lru = 0;
  bool valid = false;
};

struct ScaleMatch {
  uint64_t sc = 0;
  Addr anchor = 0;
};

// Scale buffer of (scale, anchor) patterns sourced from qualifying scale
// tracker loads. A block address matching a pattern marks the associated
// access buffer protected and steers its prefetching by the recorded scale
// instead of DiffMin.
class RecordProtector {
 public:
  explicit RecordProtector(const RpConfig& cfg);

  static bool on_pattern(Addr blk, uint64_t sc, Addr anchor) {
    return static_cast<int64_t>(blk - anchor) % static_cast<int64_t>(sc) == 0;
  }

  // Pattern recording with subsumption: against every valid entry i with
  // (anchor_new - anchor_i) % min(sc_new, sc_i) == 0, only the pattern with
  // the larger scale survives. A new pattern subsumed by an existing entry
  // is absorbed; otherwise it replaces the first smaller match and clears
  // any remaining matches, or takes a free/LRU slot when nothing matches.
  void record_scale(uint64_t sc, Addr anchor);

  // First (lowest-index) valid entry whose pattern contains blk; refreshes
  // that entry's recency.
  std::optional<ScaleMatch> match_scale(Addr blk);

  void protect(AccessBuffer& buf, uint64_t sc, Addr anchor, Cycle now);
  void maybe_unprotect(AccessBuffer& buf, Cycle now) const;

  // Candidate prefetch guided by the hit scale: blk+sc then blk-sc, first
  // one neither recorded in buf nor L1-valid. Counts against the protected
  // buffer's prefetch budget.
  std::optional<Addr> guided_candidate(Addr blk, uint64_t sc, AccessBuffer* buf,
                                       const L1Lookup& in_l1);

  const std::vector<ScaleBufferEntry>& entries() const { return entries_; }
  const RpConfig& config() const { return cfg_; }

 private:
  RpConfig cfg_;
  std::vector<ScaleBufferEntry> entries_;
  uint64_t recency_ = 0;
};

}  // namespace prefender

#endif  // PREFENDER_RECORD_PROTECTOR_HPP_
