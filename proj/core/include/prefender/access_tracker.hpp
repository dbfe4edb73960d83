#ifndef PREFENDER_ACCESS_TRACKER_HPP_
#define PREFENDER_ACCESS_TRACKER_HPP_

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "prefender/common.hpp"

namespace prefender {

struct AtConfig {
  bool enabled = true;
  uint32_t buffer_count = 32;
  uint32_t entry_count = 8;
  uint32_t valid_threshold = 4;
};

// One buffer per tracked load instruction. Entries record distinct block
// addresses; diff_min caches the minimum pairwise difference once the valid
// entry count reaches the threshold. The prot_* fields belong to the record
// protector.
struct AccessBuffer {
  Addr inst_addr = 0;
  bool in_use = false;
  uint64_t lru = 0;
  Cycle last_touch = 0;

  struct Entry {
    Addr blk = 0;
    uint64_t lru = 0;
    bool valid = false;
  };
  std::vector<Entry> entries;
  std::optional<uint64_t> diff_min;

  bool protected_flag = false;
  uint64_t prot_sc = 0;
  Addr prot_anchor = 0;
  uint32_t prot_prefetch_count = 0;

  uint32_t valid_count() const {
    uint32_t n = 0;
    for (const auto& e : entries) n += e.valid;
    return n;
  }
  bool has_entry(Addr blk) const {
    for (const auto& e : entries)
      if (e.valid && e.blk == blk) return true;
    return false;
  }
};

using L1Lookup = std::function<bool(Addr)>;

class AccessTracker {
 public:
  explicit AccessTracker(const AtConfig& cfg);

  // Finds or allocates the buffer for a load pc. Protected buffers are never
  // reclaimed; returns nullptr when no match exists and every buffer is
  // protected (the access goes untracked).
  AccessBuffer* activate(Addr pc, Cycle now);

  // Records blk into the buffer: dedups, then fills a free entry or evicts
  // the LRU entry.
  void record(AccessBuffer& buf, Addr blk);

  // Recomputes diff_min when the valid entry count is at or above the
  // threshold (exact minimum over all pairs).
  void update_diff_min(AccessBuffer& buf);

  // Candidate prefetch for the current access: blk+diff_min, then
  // blk-diff_min; the first that is neither a recorded entry nor L1-valid.
  std::optional<Addr> candidate(const AccessBuffer& buf, Addr blk_now,
                                const L1Lookup& in_l1) const;

  uint32_t protected_count() const;
  const std::vector<AccessBuffer>& buffers() const { return buffers_; }
  std::vector<AccessBuffer>& buffers() { return buffers_; }
  const AtConfig& config() const { return cfg_; }

 private:
  void reinit(AccessBuffer& buf, Addr pc);

  AtConfig cfg_;
  std::vector<AccessBuffer> buffers_;
  uint64_t recency_ = 0;
  uint64_t entry_recency_ = 0;
};

}  // namespace prefender

#endif  // PREFENDER_ACCESS_TRACKER_HPP_
