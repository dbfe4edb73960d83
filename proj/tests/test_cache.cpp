#include <algorithm>
#include <deque>
#include <map>
#include <vector>

#include "doctest.h"
#include "prefender/cache.hpp"
#include "prefender/common.hpp"

using namespace prefender;

TEST_CASE("config: default geometry gives 512 L1 sets") {
  CacheConfig cc;
  cc.validate();
  CHECK(cc.l1_sets() == 512);
  CHECK(cc.l2_sets() == 4096);
}

TEST_CASE("config: malformed geometry is rejected") {
  CacheConfig cc;
  cc.line_size = 48;
  CHECK_THROWS_AS(cc.validate(), std::invalid_argument);
  cc = CacheConfig{};
  cc.lat_l2_hit = 1;
  CHECK_THROWS_AS(cc.validate(), std::invalid_argument);
}

TEST_CASE("set index arithmetic") {
  CacheConfig cc;
  MemoryHierarchy hier(cc);
  // oracle: (addr >> log2(line)) mod sets
  CHECK(hier.set_index(CacheLevel::L1, 0x12345) == ((0x12345 >> 6) % 512));
  CHECK(hier.set_index(CacheLevel::L1, 0x12345) == 0x8D);
}

TEST_CASE("access: cold miss, then L1 hit") {
  CacheConfig cc;
  MemoryHierarchy hier(cc);
  AccessResult a = hier.access(0x1000, 0);
  CHECK(a.latency == cc.lat_mem);
  CHECK(a.hit_level == HitLevel::MEM);
  AccessResult b = hier.access(0x1000, 200);
  CHECK(b.latency == cc.lat_l1_hit);
  CHECK(b.hit_level == HitLevel::L1);
}

TEST_CASE("flush: forces a fresh full miss") {
  CacheConfig cc;
  MemoryHierarchy hier(cc);
  hier.access(0x2000, 0);
  hier.flush(0x2000);
  AccessResult again = hier.access(0x2000, 500);
  CHECK(again.latency == cc.lat_mem);
  CHECK(again.hit_level == HitLevel::MEM);
}

TEST_CASE("flush: distinct lines are untouched, absent lines are a no-op") {
  CacheConfig cc;
  MemoryHierarchy hier(cc);
  hier.access(0x2000, 0);
  // 0x2040 is the next line when line_size == 64
  hier.flush(0x2040);
  CHECK(hier.access(0x2000, 500).hit_level == HitLevel::L1);
  hier.flush(0x999000);  // never touched
  CHECK(hier.access(0x2000, 1000).hit_level == HitLevel::L1);
}

TEST_CASE("prefetch: fill timing and presence dropping") {
  CacheConfig cc;
  MemoryHierarchy hier(cc);
  CHECK(hier.prefetch(0x4000, PrefetchSource::AT, 0) == PrefetchStatus::ACCEPTED);
  CHECK_FALSE(hier.contains(CacheLevel::L1, 0x4000, 99));
  CHECK(hier.contains(CacheLevel::L1, 0x4000, 100));
  // already valid in L1
  CHECK(hier.prefetch(0x4000, PrefetchSource::AT, 150) == PrefetchStatus::DROPPED_PRESENT);
  // live MSHR for the same line
  CHECK(hier.prefetch(0x8000, PrefetchSource::ST, 150) == PrefetchStatus::ACCEPTED);
  CHECK(hier.prefetch(0x8000, PrefetchSource::AT, 160) == PrefetchStatus::DROPPED_PRESENT);
}

TEST_CASE("prefetch: defense sources reclaim the oldest basic MSHR") {
  CacheConfig cc;  // 4 MSHRs
  MemoryHierarchy hier(cc);
  CHECK(hier.prefetch(0x10000, PrefetchSource::TAGGED, 0) == PrefetchStatus::ACCEPTED);
  CHECK(hier.prefetch(0x20000, PrefetchSource::STRIDE, 0) == PrefetchStatus::ACCEPTED);
  CHECK(hier.prefetch(0x30000, PrefetchSource::TAGGED, 0) == PrefetchStatus::ACCEPTED);
  CHECK(hier.prefetch(0x40000, PrefetchSource::STRIDE, 0) == PrefetchStatus::ACCEPTED);
  CHECK(hier.live_mshr_count() == 4);
  // basic prefetch cannot displace anything
  CHECK(hier.prefetch(0x50000, PrefetchSource::TAGGED, 1) == PrefetchStatus::DROPPED_NO_MSHR);
  // a defense prefetch evicts the oldest basic entry (0x10000)
  CHECK(hier.prefetch(0x60000, PrefetchSource::ST, 1) == PrefetchStatus::ACCEPTED);
  CHECK(hier.live_mshr_count() == 4);
  CHECK_FALSE(hier.contains(CacheLevel::L1, 0x10000, 5000));  // cancelled fill never lands
  CHECK(hier.contains(CacheLevel::L1, 0x60000, 5000));
  // all-defense MSHRs: a further defense prefetch has nothing to reclaim
  MemoryHierarchy h2(cc);
  for (Addr a = 0; a < 4; ++a)
    CHECK(h2.prefetch(0x10000 + a * 0x1000, PrefetchSource::AT, 0) == PrefetchStatus::ACCEPTED);
  CHECK(h2.prefetch(0x90000, PrefetchSource::RP_GUIDED, 0) == PrefetchStatus::DROPPED_NO_MSHR);
}

TEST_CASE("access: demand merge into an in-flight prefetch returns the residual") {
  CacheConfig cc;
  MemoryHierarchy hier(cc);
  hier.prefetch(0x7000, PrefetchSource::AT, 0);  // fills at 100
  AccessResult r = hier.access(0x7000, 40);
  CHECK(r.hit_level == HitLevel::MSHR_MERGE);
  CHECK(r.latency == 60);
  // at the fill boundary the residual clamps to >= 1
  MemoryHierarchy h2(cc);
  h2.prefetch(0x7000, PrefetchSource::AT, 0);
  CHECK(h2.access(0x7000, 100).hit_level == HitLevel::L1);
}

TEST_CASE("flush cancels an in-flight fill") {
  CacheConfig cc;
  MemoryHierarchy hier(cc);
  hier.prefetch(0xA000, PrefetchSource::ST, 0);
  hier.flush(0xA000);
  CHECK(hier.live_mshr_count() == 0);
  AccessResult r = hier.access(0xA000, 50);
  CHECK(r.hit_level == HitLevel::MEM);
  CHECK(r.latency == cc.lat_mem);
}

TEST_CASE("L2 hit fills L1") {
  CacheConfig cc;
  MemoryHierarchy hier(cc);
  hier.access(0x3000, 0);
  hier.flush(0x3000);
  hier.access(0x3000, 200);  // refill both
  // evict from L1 only, via conflicting fills
  uint64_t span = cc.l1_sets() * cc.line_size;
  hier.access(0x3000 + span, 400);
  hier.access(0x3000 + 2 * span, 600);
  AccessResult r = hier.access(0x3000, 800);
  CHECK(r.hit_level == HitLevel::L2);
  CHECK(r.latency == cc.lat_l2_hit);
}

TEST_CASE("inclusion: every L1-valid line is L2-valid") {
  CacheConfig cc;
  cc.l2_size = 8192;  // 16 sets x 8 ways: small enough to force L2 pressure
  MemoryHierarchy hier(cc);
  SplitMix64 rng(99);
  Cycle now = 0;
  std::vector<Addr> touched;
  for (int i = 0; i < 400; ++i) {
    Addr blk = rng.next_below(4096) * cc.line_size;
    now += 200;
    hier.access(blk, now);
    touched.push_back(blk);
  }
  now += 200;
  for (Addr blk : touched) {
    if (hier.contains(CacheLevel::L1, blk, now)) CHECK(hier.contains(CacheLevel::L2, blk, now));
  }
}

TEST_CASE("property: L1 victim selection matches a brute-force recency list") {
  CacheConfig cc;
  cc.l1_size = 8192;  // 64 sets x 2 ways
  cc.l2_size = 1 << 20;
  MemoryHierarchy hier(cc);
  SplitMix64 rng(7);

  // reference model: per-set list of blocks, most recent last
  std::map<uint32_t, std::deque<Addr>> model;
  Cycle now = 0;
  for (int i = 0; i < 5000; ++i) {
    Addr blk = rng.next_below(512) * cc.line_size;
    now += 200;
    hier.access(blk, now);
    uint32_t set = hier.set_index(CacheLevel::L1, blk);
    auto& dq = model[set];
    auto it = std::find(dq.begin(), dq.end(), blk);
    if (it != dq.end()) dq.erase(it);
    dq.push_back(blk);
    if (dq.size() > cc.l1_ways) dq.pop_front();  // LRU eviction
  }
  now += 200;
  for (auto& [set, dq] : model)
    for (Addr blk : dq) CHECK(hier.contains(CacheLevel::L1, blk, now));
}

TEST_CASE("property: MSHR count bounded, one entry per block") {
  CacheConfig cc;
  MemoryHierarchy hier(cc);
  SplitMix64 rng(13);
  for (int i = 0; i < 2000; ++i) {
    Addr blk = rng.next_below(64) * cc.line_size;
    Cycle now = i * 3;
    PrefetchSource s = static_cast<PrefetchSource>(rng.next_below(5));
    hier.prefetch(blk, s, now);
    CHECK(hier.live_mshr_count() <= cc.mshr_count);
  }
}

TEST_CASE("counters: attempts and accepted are tracked per source") {
  CacheConfig cc;
  MemoryHierarchy hier(cc);
  hier.prefetch(0x1000, PrefetchSource::ST, 0);
  hier.prefetch(0x1000, PrefetchSource::ST, 0);  // dropped: live MSHR
  const PortCounters& c = hier.counters();
  CHECK(c.attempts[static_cast<size_t>(PrefetchSource::ST)] == 2);
  CHECK(c.accepted[static_cast<size_t>(PrefetchSource::ST)] == 1);
}
