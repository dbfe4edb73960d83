#include "prefender/prefetchers.hpp"

namespace prefender {

const char* base_prefetcher_name(BasePrefetcher b) {
  switch (b) {
    case BasePrefetcher::NONE: return "none";
    case BasePrefetcher::TAGGED: return "tagged";
    case BasePrefetcher::STRIDE: return "stride";
  }
  return "?";
}

StridePrefetcher::StridePrefetcher(uint32_t table_size, uint64_t line_size)
    : table_(table_size), line_size_(line_size) {}

std::optional<Addr> StridePrefetcher::on_access(Addr pc, Addr addr) {
  Entry* e = nullptr;
  for (auto& cand : table_) {
    if (cand.valid && cand.pc == pc) {
      e = &cand;
      break;
    }
  }
  if (!e) {
    for (auto& cand : table_) {
      if (!cand.valid) {
        e = &cand;
        break;
      }
    }
    if (!e) {
      e = &table_[0];
      for (auto& cand : table_)
        if (cand.lru < e->lru) e = &cand;
    }
    *e = Entry{};
    e->pc = pc;
    e->last_addr = addr;
    e->valid = true;
    e->lru = ++recency_;
    return std::nullopt;
  }

  int64_t delta = static_cast<int64_t>(addr - e->last_addr);
  if (delta == e->stride) {
    e->state = e->state == State::INIT ? State::TRANSIENT : State::STEADY;
  } else {
    e->stride = delta;
    e->state = State::TRANSIENT;
  }
  e->last_addr = addr;
  e->lru = ++recency_;

  if (e->state == State::STEADY && e->stride != 0)
    return block_of(addr + static_cast<uint64_t>(e->stride), line_size_);
  return std::nullopt;
}

}  // namespace prefender
