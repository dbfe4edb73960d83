#include "prefender/record_protector.hpp"

#include <algorithm>
#include <stdexcept>

namespace prefender {

RecordProtector::RecordProtector(const RpConfig& cfg) : cfg_(cfg) {
  if (cfg_.entry_count < 1) throw std::invalid_argument("rp: entry_count must be >= 1");
  entries_.resize(cfg_.entry_count);
}

void RecordProtector::record_scale(uint64_t sc, Addr anchor) {
  std::vector<size_t> matches;
  for (size_t i = 0; i < entries_.size(); ++i) {
    const auto& e = entries_[i];
    if (!e.valid) continue;
    uint64_t m = std::min(sc, e.sc);
    if (on_pattern(anchor, m, e.anchor)) matches.push_back(i);
  }

  for (size_t i : matches) {
    if (entries_[i].sc >= sc) {
      // New pattern is a subset of an existing one: absorb.
      entries_[i].lru = ++recency_;
      return;
    }
  }
  if (!matches.empty()) {
    // New pattern covers the matches: keep one copy, drop the rest.
    ScaleBufferEntry& keep = entries_[matches[0]];
    keep.sc = sc;
    keep.anchor = anchor;
    keep.lru = ++recency_;
    for (size_t k = 1; k < matches.size(); ++k) entries_[matches[k]].valid = false;
    return;
  }

  ScaleBufferEntry* slot = nullptr;
  for (auto& e : entries_) {
    if (!e.valid) {
      slot = &e;
      break;
    }
  }
  if (!slot) {
    slot = &entries_[0];
    for (auto& e : entries_)
      if (e.lru < slot->lru) slot = &e;
  }
  slot->sc = sc;
  slot->anchor = anchor;
  slot->valid = true;
  slot->lru = ++recency_;
}

std::optional<ScaleMatch> RecordProtector::match_scale(Addr blk) {
  for (auto& e : entries_) {
    if (!e.valid) continue;
    if (on_pattern(blk, e.sc, e.anchor)) {
      e.lru = ++recency_;
      return ScaleMatch{e.sc, e.anchor};
    }
  }
  return std::nullopt;
}

void RecordProtector::protect(AccessBuffer& buf, uint64_t sc, Addr anchor, Cycle now) {
  buf.protected_flag = true;
  buf.prot_sc = sc;
  buf.prot_anchor = anchor;
  buf.prot_prefetch_count = 0;
  buf.last_touch = now;
}

void RecordProtector::maybe_unprotect(AccessBuffer& buf, Cycle now) const {
  if (!buf.protected_flag) return;
  bool over_budget = buf.prot_prefetch_count > cfg_.unprotect_prefetch_limit;
  bool idle = now - buf.last_touch > cfg_.unprotect_idle_cycles;
  if (over_budget || idle) {
    buf.protected_flag = false;
    buf.prot_sc = 0;
    buf.prot_anchor = 0;
    buf.prot_prefetch_count = 0;
  }
}

std::optional<Addr> RecordProtector::guided_candidate(Addr blk, uint64_t sc,
                                                      AccessBuffer* buf,
                                                      const L1Lookup& in_l1) {
  std::optional<Addr> pick;
  Addr up = blk + sc;
  if (up > blk && (!buf || !buf->has_entry(up)) && !in_l1(up)) {
    pick = up;
  } else if (blk >= sc) {
    Addr down = blk - sc;
    if ((!buf || !buf->has_entry(down)) && !in_l1(down)) pick = down;
  }
  if (pick && buf && buf->protected_flag) ++buf->prot_prefetch_count;
  return pick;
}

}  // namespace prefender
