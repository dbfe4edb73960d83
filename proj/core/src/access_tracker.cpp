#include "prefender/access_tracker.hpp"

#include <cstdlib>
#include <stdexcept>

namespace prefender {

AccessTracker::AccessTracker(const AtConfig& cfg) : cfg_(cfg) {
  if (cfg_.buffer_count < 1) throw std::invalid_argument("at: buffer_count must be >= 1");
  if (cfg_.valid_threshold > cfg_.entry_count)
    throw std::invalid_argument("at: valid_threshold must be <= entry_count");
  buffers_.resize(cfg_.buffer_count);
  for (auto& b : buffers_) b.entries.resize(cfg_.entry_count);
}

void AccessTracker::reinit(AccessBuffer& buf, Addr pc) {
  buf.inst_addr = pc;
  buf.in_use = true;
  for (auto& e : buf.entries) e.valid = false;
  buf.diff_min.reset();
  buf.protected_flag = false;
  buf.prot_sc = 0;
  buf.prot_anchor = 0;
  buf.prot_prefetch_count = 0;
}

AccessBuffer* AccessTracker::activate(Addr pc, Cycle now) {
  AccessBuffer* target = nullptr;
  for (auto& b : buffers_) {
    if (b.in_use && b.inst_addr == pc) {
      target = &b;
      break;
    }
  }
  if (!target) {
    for (auto& b : buffers_) {
      if (!b.in_use) {
        target = &b;
        break;
      }
    }
    if (target) {
      reinit(*target, pc);
    } else {
      // Reclaim the LRU buffer among the unprotected ones.
      for (auto& b : buffers_) {
        if (b.protected_flag) continue;
        if (!target || b.lru < target->lru) target = &b;
      }
      if (!target) return nullptr;  // everything protected: untracked access
      reinit(*target, pc);
    }
  }
  target->lru = ++recency_;
  target->last_touch = now;
  return target;
}

void AccessTracker::record(AccessBuffer& buf, Addr blk) {
  AccessBuffer::Entry* slot = nullptr;
  for (auto& e : buf.entries) {
    if (e.valid && e.blk == blk) {
      e.lru = ++entry_recency_;
      return;
    }
    if (!e.valid && !slot) slot = &e;
  }
  if (!slot) {
    slot = &buf.entries[0];
    for (auto& e : buf.entries)
      if (e.lru < slot->lru) slot = &e;
  }
  slot->blk = blk;
  slot->valid = true;
  slot->lru = ++entry_recency_;
}

void AccessTracker::update_diff_min(AccessBuffer& buf) {
  if (buf.valid_count() < cfg_.valid_threshold) return;
  uint64_t best = UINT64_MAX;
  for (size_t i = 0; i < buf.entries.size(); ++i) {
    if (!buf.entries[i].valid) continue;
    for (size_t j = i + 1; j < buf.entries.size(); ++j) {
      if (!buf.entries[j].valid) continue;
      Addr a = buf.entries[i].blk;
      Addr b = buf.entries[j].blk;
      uint64_t d = a > b ? a - b : b - a;
      if (d < best) best = d;
    }
  }
  buf.diff_min = best;
}

std::optional<Addr> AccessTracker::candidate(const AccessBuffer& buf, Addr blk_now,
                                             const L1Lookup& in_l1) const {
  if (!buf.diff_min) return std::nullopt;
  uint64_t d = *buf.diff_min;
  Addr up = blk_now + d;
  if (up > blk_now && !buf.has_entry(up) && !in_l1(up)) return up;
  if (blk_now >= d) {
    Addr down = blk_now - d;
    if (!buf.has_entry(down) && !in_l1(down)) return down;
  }
  return std::nullopt;
}

uint32_t AccessTracker::protected_count() const {
  uint32_t n = 0;
  for (const auto& b : buffers_) n += b.protected_flag;
  return n;
}

}  // namespace prefender
