#include "prefender/selftest.hpp"

#include <algorithm>
#include <cstdlib>
#include <vector>

#include "prefender/access_tracker.hpp"
#include "prefender/attack.hpp"
#include "prefender/cache.hpp"
#include "prefender/common.hpp"
#include "prefender/record_protector.hpp"
#include "prefender/report.hpp"
#include "prefender/scale_tracker.hpp"

namespace prefender {

namespace {

bool check_diff_min(SplitMix64& rng) {
  AtConfig cfg;
  cfg.valid_threshold = 2;
  for (int iter = 0; iter < 1000; ++iter) {
    AccessTracker at(cfg);
    AccessBuffer* buf = at.activate(0x8000, 0);
    std::vector<Addr> blks;
    uint32_t n = 2 + static_cast<uint32_t>(rng.next_below(7));
    for (uint32_t i = 0; i < n; ++i) {
      Addr blk = rng.next_below(1 << 16) * 64;
      at.record(*buf, blk);
      at.update_diff_min(*buf);
    }
    for (const auto& e : buf->entries)
      if (e.valid) blks.push_back(e.blk);
    uint64_t best = UINT64_MAX;
    for (size_t i = 0; i < blks.size(); ++i)
      for (size_t j = i + 1; j < blks.size(); ++j)
        best = std::min(best, blks[i] > blks[j] ? blks[i] - blks[j] : blks[j] - blks[i]);
    if (blks.size() >= cfg.valid_threshold) {
      if (!buf->diff_min || *buf->diff_min != best) return false;
    }
  }
  return true;
}

bool check_lru(SplitMix64& rng) {
  CacheConfig cc;
  cc.l1_size = 4096;  // 32 sets x 2 ways
  cc.l2_size = 65536;
  MemoryHierarchy hier(cc);
  // Reference recency list for one set.
  std::vector<Addr> ref;  // most recent at back
  const uint32_t kWays = cc.l1_ways;
  Cycle now = 0;
  for (int i = 0; i < 1000; ++i) {
    Addr blk = (rng.next_below(8) * cc.l1_sets()) * cc.line_size;  // one set
    now += 200;
    hier.access(blk, now);
    auto it = std::find(ref.begin(), ref.end(), blk);
    if (it != ref.end()) ref.erase(it);
    ref.push_back(blk);
    if (ref.size() > kWays) ref.erase(ref.begin());
    for (Addr b : ref)
      if (!hier.contains(CacheLevel::L1, b, now + 150)) return false;
  }
  return true;
}

bool check_scale_buffer(SplitMix64& rng) {
  RpConfig cfg;
  RecordProtector rp(cfg);
  for (int i = 0; i < 1000; ++i) {
    uint64_t sc = (1ULL << (7 + rng.next_below(5)));  // 128..2048
    Addr anchor = rng.next_below(64) * 64;
    rp.record_scale(sc, anchor);
    const auto& es = rp.entries();
    for (size_t a = 0; a < es.size(); ++a) {
      if (!es[a].valid) continue;
      for (size_t b2 = a + 1; b2 < es.size(); ++b2) {
        if (!es[b2].valid) continue;
        uint64_t m = std::min(es[a].sc, es[b2].sc);
        if (RecordProtector::on_pattern(es[a].anchor, m, es[b2].anchor)) return false;
      }
    }
  }
  return true;
}

bool check_determinism() {
  SimConfig cfg;
  cfg.attack.kind = AttackKind::FLUSH_RELOAD;
  cfg.attack.k_lines = 32;
  cfg.attack.c2_random_order = true;
  cfg.attack.seed = 7;
  ScenarioRun a = run_scenario(cfg.attack, cfg, 3);
  ScenarioRun b = run_scenario(cfg.attack, cfg, 3);
  return emit_report(a.report, ReportFormat::JSON_LINES) ==
             emit_report(b.report, ReportFormat::JSON_LINES) &&
         emit_report(a.report, ReportFormat::CSV) == emit_report(b.report, ReportFormat::CSV);
}

}  // namespace

bool run_selftest(std::ostream& out) {
  SplitMix64 rng(0xC0FFEE);
  struct Check {
    const char* name;
    bool ok;
  };
  std::vector<Check> checks;
  checks.push_back({"diff_min matches brute force", check_diff_min(rng)});
  checks.push_back({"L1 LRU matches reference recency list", check_lru(rng)});
  checks.push_back({"scale buffer entries are mutually non-subsuming", check_scale_buffer(rng)});
  checks.push_back({"scenario replay is byte-identical", check_determinism()});

  bool all = true;
  for (const auto& c : checks) {
    out << (c.ok ? "[ok] " : "[FAIL] ") << c.name << "\n";
    all = all && c.ok;
  }
  return all;
}

}  // namespace prefender
