#include "prefender/cache.hpp"

#include <algorithm>
#include <stdexcept>

namespace prefender {

void CacheConfig::validate() const {
  auto need = [](bool ok, const char* msg) {
    if (!ok) throw std::invalid_argument(msg);
  };
  need(is_pow2(line_size), "cache: line_size must be a power of two");
  need(is_pow2(l1_size) && is_pow2(l2_size), "cache: sizes must be powers of two");
  need(is_pow2(l1_ways) && is_pow2(l2_ways), "cache: ways must be powers of two");
  need(is_pow2(page_size) && page_size >= line_size, "cache: bad page_size");
  need(l1_size % (l1_ways * line_size) == 0 && l1_sets() >= 1, "cache: bad L1 geometry");
  need(l2_size % (l2_ways * line_size) == 0 && l2_sets() >= 1, "cache: bad L2 geometry");
  need(mshr_count >= 1, "cache: mshr_count must be >= 1");
  need(lat_l1_hit >= 1 && lat_l2_hit > lat_l1_hit && lat_mem > lat_l2_hit,
       "cache: latencies must satisfy l1 < l2 < mem");
  need(phys_mem >= page_size, "cache: phys_mem too small");
}

const char* hit_level_name(HitLevel h) {
  switch (h) {
    case HitLevel::L1: return "L1";
    case HitLevel::L2: return "L2";
    case HitLevel::MEM: return "MEM";
    case HitLevel::MSHR_MERGE: return "MSHR_MERGE";
  }
  return "?";
}

const char* prefetch_source_name(PrefetchSource s) {
  switch (s) {
    case PrefetchSource::ST: return "ST";
    case PrefetchSource::AT: return "AT";
    case PrefetchSource::RP_GUIDED: return "RP_GUIDED";
    case PrefetchSource::TAGGED: return "TAGGED";
    case PrefetchSource::STRIDE: return "STRIDE";
  }
  return "?";
}

const char* prefetch_status_name(PrefetchStatus s) {
  switch (s) {
    case PrefetchStatus::ACCEPTED: return "ACCEPTED";
    case PrefetchStatus::DROPPED_PRESENT: return "DROPPED_PRESENT";
    case PrefetchStatus::DROPPED_NO_MSHR: return "DROPPED_NO_MSHR";
  }
  return "?";
}

MemoryHierarchy::MemoryHierarchy(const CacheConfig& cfg) : cfg_(cfg) {
  cfg_.validate();
  l1_.sets = cfg_.l1_sets();
  l1_.ways = cfg_.l1_ways;
  l1_.lines.resize(static_cast<size_t>(l1_.sets) * l1_.ways);
  l2_.sets = cfg_.l2_sets();
  l2_.ways = cfg_.l2_ways;
  l2_.lines.resize(static_cast<size_t>(l2_.sets) * l2_.ways);
  mshrs_.reserve(cfg_.mshr_count);
}

MemoryHierarchy::Line* MemoryHierarchy::Level::find(Addr blk, uint64_t line_size) {
  uint32_t set = static_cast<uint32_t>((blk / line_size) % sets);
  Line* base = &lines[static_cast<size_t>(set) * ways];
  for (uint32_t w = 0; w < ways; ++w)
    if (base[w].valid && base[w].blk == blk) return &base[w];
  return nullptr;
}

MemoryHierarchy::Line& MemoryHierarchy::Level::victim(Addr blk, uint64_t line_size) {
  uint32_t set = static_cast<uint32_t>((blk / line_size) % sets);
  Line* base = &lines[static_cast<size_t>(set) * ways];
  Line* best = &base[0];
  for (uint32_t w = 0; w < ways; ++w) {
    if (!base[w].valid) return base[w];
    if (base[w].lru < best->lru) best = &base[w];
  }
  return *best;
}

uint32_t MemoryHierarchy::set_index(CacheLevel level, Addr addr) const {
  const Level& lv = level == CacheLevel::L1 ? l1_ : l2_;
  return static_cast<uint32_t>((addr / cfg_.line_size) % lv.sets);
}

MemoryHierarchy::Mshr* MemoryHierarchy::find_mshr(Addr blk) {
  for (auto& m : mshrs_)
    if (m.blk == blk) return &m;
  return nullptr;
}

void MemoryHierarchy::retire_fills(Cycle now) {
  // Install completed fills in (fill_at, allocation) order so replacement
  // decisions are reproducible.
  for (;;) {
    Mshr* due = nullptr;
    size_t due_idx = 0;
    for (size_t i = 0; i < mshrs_.size(); ++i) {
      Mshr& m = mshrs_[i];
      if (m.fill_at > now) continue;
      if (!due || m.fill_at < due->fill_at ||
          (m.fill_at == due->fill_at && m.seq < due->seq)) {
        due = &m;
        due_idx = i;
      }
    }
    if (!due) return;
    Mshr copy = *due;
    mshrs_.erase(mshrs_.begin() + static_cast<ptrdiff_t>(due_idx));
    if (copy.fill_l2) install(CacheLevel::L2, copy.blk, copy.fill_at, false);
    install(CacheLevel::L1, copy.blk, copy.fill_at, true);
  }
}

void MemoryHierarchy::install(CacheLevel level, Addr blk, Cycle fill_at, bool tagged) {
  Level& lv = level == CacheLevel::L1 ? l1_ : l2_;
  if (Line* hit = lv.find(blk, cfg_.line_size)) {
    hit->fill_at = std::min(hit->fill_at, fill_at);
    hit->lru = ++recency_;
    return;
  }
  if (level == CacheLevel::L1) {
    // Inclusive hierarchy: an L1 line always has an L2 parent.
    if (!l2_.find(blk, cfg_.line_size)) install(CacheLevel::L2, blk, fill_at, false);
  }
  Line& v = lv.victim(blk, cfg_.line_size);
  if (level == CacheLevel::L2 && v.valid) {
    // Back-invalidate to preserve inclusion.
    if (Line* child = l1_.find(v.blk, cfg_.line_size)) child->valid = false;
  }
  v.blk = blk;
  v.fill_at = fill_at;
  v.lru = ++recency_;
  v.valid = true;
  v.tagged = tagged;
}

AccessResult MemoryHierarchy::access(Addr addr, Cycle now) {
  retire_fills(now);
  Addr blk = block_of(addr, cfg_.line_size);

  if (Line* l1 = l1_.find(blk, cfg_.line_size)) {
    if (l1->fill_at <= now) {
      l1->lru = ++recency_;
      bool was_tagged = l1->tagged;
      l1->tagged = false;
      return {cfg_.lat_l1_hit, HitLevel::L1, was_tagged};
    }
    // Demand-installed line still in flight; behaves like an MSHR merge.
    uint32_t residual = static_cast<uint32_t>(std::max<Cycle>(1, l1->fill_at - now));
    l1->lru = ++recency_;
    l1->tagged = false;
    return {residual, HitLevel::MSHR_MERGE, false};
  }

  if (Mshr* m = find_mshr(blk)) {
    uint32_t residual = static_cast<uint32_t>(std::max<Cycle>(1, m->fill_at - now));
    if (m->merged < cfg_.mshr_merge_limit) ++m->merged;
    return {residual, HitLevel::MSHR_MERGE, false};
  }

  if (Line* l2 = l2_.find(blk, cfg_.line_size)) {
    if (l2->fill_at <= now) {
      l2->lru = ++recency_;
      install(CacheLevel::L1, blk, now + cfg_.lat_l2_hit, false);
      return {cfg_.lat_l2_hit, HitLevel::L2, false};
    }
  }

  install(CacheLevel::L2, blk, now + cfg_.lat_mem, false);
  install(CacheLevel::L1, blk, now + cfg_.lat_mem, false);
  return {cfg_.lat_mem, HitLevel::MEM, false};
}

void MemoryHierarchy::flush(Addr addr) {
  Addr blk = block_of(addr, cfg_.line_size);
  if (Line* l1 = l1_.find(blk, cfg_.line_size)) l1->valid = false;
  if (Line* l2 = l2_.find(blk, cfg_.line_size)) l2->valid = false;
  for (size_t i = 0; i < mshrs_.size(); ++i) {
    if (mshrs_[i].blk == blk) {
      mshrs_.erase(mshrs_.begin() + static_cast<ptrdiff_t>(i));
      break;  // at most one entry per block
    }
  }
}

PrefetchStatus MemoryHierarchy::prefetch(Addr blk, PrefetchSource source, Cycle now) {
  retire_fills(now);
  size_t idx = static_cast<size_t>(source);
  ++counters_.attempts[idx];

  if (l1_.find(blk, cfg_.line_size) || find_mshr(blk))
    return PrefetchStatus::DROPPED_PRESENT;

  if (mshrs_.size() >= cfg_.mshr_count) {
    if (is_basic_prefetch(source)) return PrefetchStatus::DROPPED_NO_MSHR;
    // Prefender prefetches outrank basic ones: reclaim the oldest basic entry.
    size_t victim = mshrs_.size();
    for (size_t i = 0; i < mshrs_.size(); ++i) {
      if (!mshrs_[i].basic) continue;
      if (victim == mshrs_.size() || mshrs_[i].seq < mshrs_[victim].seq) victim = i;
    }
    if (victim == mshrs_.size()) return PrefetchStatus::DROPPED_NO_MSHR;
    mshrs_.erase(mshrs_.begin() + static_cast<ptrdiff_t>(victim));
  }

  Line* l2 = l2_.find(blk, cfg_.line_size);
  bool l2_resident = l2 && l2->fill_at <= now;
  Mshr m;
  m.blk = blk;
  m.fill_at = now + (l2_resident ? cfg_.lat_l2_hit : cfg_.lat_mem);
  m.basic = is_basic_prefetch(source);
  m.fill_l2 = !l2_resident;
  m.seq = ++mshr_seq_;
  mshrs_.push_back(m);
  ++counters_.accepted[idx];
  return PrefetchStatus::ACCEPTED;
}

bool MemoryHierarchy::contains(CacheLevel level, Addr blk, Cycle now) {
  retire_fills(now);
  Level& lv = level == CacheLevel::L1 ? l1_ : l2_;
  Line* line = lv.find(block_of(blk, cfg_.line_size), cfg_.line_size);
  return line && line->fill_at <= now;
}

}  // namespace prefender
