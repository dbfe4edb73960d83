#ifndef PREFENDER_PREFETCHERS_HPP_
#define PREFENDER_PREFETCHERS_HPP_

#include <cstdint>
#include <optional>
#include <vector>

#include "prefender/cache.hpp"
#include "prefender/common.hpp"

namespace prefender {

enum class BasePrefetcher : uint8_t { NONE, TAGGED, STRIDE };
const char* base_prefetcher_name(BasePrefetcher b);

// Next-line prefetcher: triggers on a miss or on the first demand hit to a
// prefetched line (the tag bit lives in the L1 line state).
class TaggedPrefetcher {
 public:
  explicit TaggedPrefetcher(uint64_t line_size) : line_size_(line_size) {}

  std::optional<Addr> on_access(Addr blk, const AccessResult& res) const {
    if (res.hit_level == HitLevel::L1 && !res.was_tagged_hit) return std::nullopt;
    return blk + line_size_;
  }

 private:
  uint64_t line_size_;
};

// Reference-prediction-table stride prefetcher. A pc-indexed entry moves
// INIT -> TRANSIENT -> STEADY as its stride is confirmed; prefetches
// addr + stride only in STEADY state.
class StridePrefetcher {
 public:
  StridePrefetcher(uint32_t table_size, uint64_t line_size);

  std::optional<Addr> on_access(Addr pc, Addr addr);

 private:
  enum class State : uint8_t { INIT, TRANSIENT, STEADY };
  struct Entry {
    Addr pc = 0;
    Addr last_addr = 0;
    int64_t stride = 0;
    State state = State::INIT;
    uint64_t lru = 0;
    bool valid = false;
  };

  std::vector<Entry> table_;
  uint64_t line_size_;
  uint64_t recency_ = 0;
};

}  // namespace prefender

#endif  // PREFENDER_PREFETCHERS_HPP_
