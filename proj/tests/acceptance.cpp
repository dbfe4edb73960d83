// Acceptance suite: one scenario per shipped claim, one verdict line each.
// Exit status is the number of failed criteria.

#include <chrono>
#include <cstdio>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "prefender/access_tracker.hpp"
#include "prefender/attack.hpp"
#include "prefender/common.hpp"
#include "prefender/record_protector.hpp"
#include "prefender/report.hpp"
#include "prefender/scale_tracker.hpp"
#include "prefender/sim.hpp"
#include "prefender/workload.hpp"

using namespace prefender;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

SimConfig base_config(AttackKind kind) {
  SimConfig cfg;
  cfg.attack.kind = kind;
  // prime+probe needs one L1 set per probed line; 128 lines at a 0x200
  // stride ask for 1024 sets, so those scenarios run a 128 KiB L1.
  if (kind == AttackKind::PRIME_PROBE) cfg.cache.l1_size = 131072;
  return cfg;
}

std::set<uint32_t> tied_indices(const std::vector<uint32_t>& lat, AttackKind kind) {
  bool probe = kind == AttackKind::PRIME_PROBE;
  uint32_t best = lat[0];
  for (uint32_t l : lat) best = probe ? std::max(best, l) : std::min(best, l);
  std::set<uint32_t> out;
  for (uint32_t i = 0; i < lat.size(); ++i) {
    uint32_t d = lat[i] > best ? lat[i] - best : best - lat[i];
    if (d <= 1) out.insert(i);
  }
  return out;
}

char buf_detail[4096];

bool c1_baseline(std::string& detail) {
  bool ok = true;
  std::string parts;
  for (AttackKind kind :
       {AttackKind::FLUSH_RELOAD, AttackKind::EVICT_RELOAD, AttackKind::PRIME_PROBE}) {
    SimConfig cfg = base_config(kind);
    cfg.st.enabled = cfg.at.enabled = cfg.rp.enabled = false;
    cfg.attack.seed = 1;
    auto t0 = std::chrono::steady_clock::now();
    ScenarioRun run = run_scenario(cfg.attack, cfg, 20);
    double secs = seconds_since(t0);
    snprintf(buf_detail, sizeof(buf_detail), "%s success=%.2f (%.2fs) ", attack_kind_name(kind),
             run.report.success_rate, secs);
    parts += buf_detail;
    ok = ok && run.report.success_rate == 1.0 && secs < 5.0;
  }
  detail = parts;
  return ok;
}

bool c2_st_defense(std::string& detail) {
  bool ok = true;
  std::string parts;
  for (AttackKind kind : {AttackKind::FLUSH_RELOAD, AttackKind::EVICT_RELOAD}) {
    SimConfig cfg = base_config(kind);
    cfg.at.enabled = cfg.rp.enabled = false;
    cfg.attack.secret_domain = SecretDomain::IN_PAGE;
    cfg.attack.seed = 2;
    ScenarioRun run = run_scenario(cfg.attack, cfg, 20);
    uint32_t good = 0;
    for (const auto& tr : run.trial_results) {
      if (tr.inference.verdict != Verdict::DEFEATED) continue;
      std::set<uint32_t> ties = tied_indices(tr.latencies, kind);
      bool centered = ties.size() >= 3 && ties.count(tr.secret) &&
                      ties.count(tr.secret - 1) && ties.count(tr.secret + 1);
      if (centered) ++good;
    }
    double rate = good / 20.0;
    snprintf(buf_detail, sizeof(buf_detail), "%s centered-3-tie=%.2f ", attack_kind_name(kind), rate);
    parts += buf_detail;
    ok = ok && rate >= 0.95;
  }
  detail = parts;
  return ok;
}

bool c3_at_defense(std::string& detail) {
  bool ok = true;
  std::string parts;
  for (AttackKind kind :
       {AttackKind::FLUSH_RELOAD, AttackKind::EVICT_RELOAD, AttackKind::PRIME_PROBE}) {
    SimConfig cfg = base_config(kind);
    cfg.st.enabled = cfg.rp.enabled = false;
    cfg.attack.c2_random_order = true;
    cfg.attack.seed = 3;
    ScenarioRun run = run_scenario(cfg.attack, cfg, 20);
    snprintf(buf_detail, sizeof(buf_detail), "%s defeated=%.2f ", attack_kind_name(kind),
             run.report.defeated_rate);
    parts += buf_detail;
    ok = ok && run.report.defeated_rate >= 0.90;
    if (kind == AttackKind::PRIME_PROBE) {
      double hit = 0;
      for (const auto& tr : run.trial_results) hit += tr.probe_l1_hit_fraction;
      hit /= run.trial_results.size();
      snprintf(buf_detail, sizeof(buf_detail), "probe-l1-hit=%.3f ", hit);
      parts += buf_detail;
      ok = ok && hit >= 0.90;
    }
  }
  detail = parts;
  return ok;
}

bool c4_noisy_instructions(std::string& detail) {
  SimConfig at_cfg = base_config(AttackKind::FLUSH_RELOAD);
  at_cfg.st.enabled = at_cfg.rp.enabled = false;
  at_cfg.attack.c2_random_order = true;
  at_cfg.attack.c3_noisy_instr = true;
  at_cfg.attack.noise_instr_count = 8;
  at_cfg.attack.seed = 4;
  ScenarioRun at_only = run_scenario(at_cfg.attack, at_cfg, 20);

  SimConfig rp_cfg = at_cfg;
  rp_cfg.st.enabled = rp_cfg.rp.enabled = true;  // protector needs the recorded scales
  ScenarioRun defended = run_scenario(rp_cfg.attack, rp_cfg, 20);

  snprintf(buf_detail, sizeof(buf_detail),
           "at-only success=%.2f (need >=0.70), at+rp defeated=%.2f (need >=0.90)",
           at_only.report.success_rate, defended.report.defeated_rate);
  detail = buf_detail;
  return at_only.report.success_rate >= 0.70 && defended.report.defeated_rate >= 0.90;
}

bool c5_noisy_accesses(std::string& detail) {
  const uint64_t S = 0x200;
  SimConfig at_cfg = base_config(AttackKind::FLUSH_RELOAD);
  at_cfg.st.enabled = at_cfg.rp.enabled = false;
  at_cfg.attack.c2_random_order = true;
  at_cfg.attack.c4_noisy_access = true;
  at_cfg.attack.noise_offset = 0x100;
  at_cfg.attack.seed = 5;
  ScenarioRun at_only = run_scenario(at_cfg.attack, at_cfg, 20);
  bool off_pattern_seen = false;
  for (const auto& i : at_only.issues) {
    if (i.source != PrefetchSource::AT) continue;
    if ((i.blk - 0x100000) % S != 0) off_pattern_seen = true;
  }

  SimConfig rp_cfg = at_cfg;
  rp_cfg.st.enabled = rp_cfg.rp.enabled = true;
  ScenarioRun defended = run_scenario(rp_cfg.attack, rp_cfg, 20);
  // every tracker-issued block from the protected probe pc stays on the
  // victim's stride lattice
  bool all_on_pattern = true;
  for (const auto& i : defended.issues) {
    if (i.source != PrefetchSource::AT && i.source != PrefetchSource::RP_GUIDED) continue;
    if ((i.blk - 0x100000) % S != 0) all_on_pattern = false;
  }

  snprintf(buf_detail, sizeof(buf_detail),
           "at-only success=%.2f (need >=0.70) off-pattern-prefetches=%s, "
           "at+rp defeated=%.2f on-pattern-only=%s",
           at_only.report.success_rate, off_pattern_seen ? "yes" : "no",
           defended.report.defeated_rate, all_on_pattern ? "yes" : "no");
  detail = buf_detail;
  return at_only.report.success_rate >= 0.70 && off_pattern_seen &&
         defended.report.defeated_rate >= 0.90 && all_on_pattern;
}

bool c6_full_gauntlet(std::string& detail) {
  bool ok = true;
  std::string parts;
  for (AttackKind kind :
       {AttackKind::FLUSH_RELOAD, AttackKind::EVICT_RELOAD, AttackKind::PRIME_PROBE}) {
    SimConfig cfg = base_config(kind);
    cfg.attack.c2_random_order = true;
    cfg.attack.c3_noisy_instr = true;
    cfg.attack.c4_noisy_access = true;
    cfg.attack.seed = 6;
    ScenarioRun run = run_scenario(cfg.attack, cfg, 20);
    snprintf(buf_detail, sizeof(buf_detail), "%s defeated=%.2f success=%.2f ",
             attack_kind_name(kind), run.report.defeated_rate, run.report.success_rate);
    parts += buf_detail;
    ok = ok && run.report.defeated_rate >= 0.90 && run.report.success_rate <= 0.05;
  }
  detail = parts;
  return ok;
}

bool c7_rule_table(std::string& detail) {
  // Row coverage: every opcode/validity combination produces a live track.
  MicroInstruction in;
  for (Opcode op : {Opcode::LOADI, Opcode::LOAD, Opcode::ADD, Opcode::ADDI, Opcode::SUB,
                    Opcode::SUBI, Opcode::MUL, Opcode::MULI, Opcode::SHL, Opcode::SHLI,
                    Opcode::SHR, Opcode::SHRI, Opcode::XOR, Opcode::TIME}) {
    for (int v0 = 0; v0 < 2; ++v0) {
      for (int v1 = 0; v1 < 2; ++v1) {
        ScaleTracker st{StConfig{}};
        in = {Opcode::LOADI, 1, 0, 0, 24, 0};
        if (v0) st.track(in);
        in = {Opcode::LOADI, 2, 0, 0, 5, 0};
        if (v1) st.track(in);
        in = {op, 6, 1, 2, 3, 0};
        st.track(in);
        const RegTrack& t = st.reg(6);
        if (!(t.fva_valid || t.sc_valid)) {
          detail = "rule table left a register with no live track";
          return false;
        }
        if (!t.fva_valid && (!t.sc_valid || t.sc < 1)) {
          detail = "rule table produced an unusable scale";
          return false;
        }
      }
    }
  }

  // Stride soundness: for addr = base + k*i with loaded i, the tracked
  // scale divides every observed address delta over i = 0..63.
  SplitMix64 rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    uint64_t base = 0x100000 + rng.next_below(256) * 0x1000;
    uint64_t k = 1 + rng.next_below(1023);
    uint64_t prev_addr = 0;
    for (uint64_t i = 0; i < 64; ++i) {
      SimConfig cfg;
      Simulator sim(cfg);
      sim.poke(0x80000, i);
      Program p;
      Addr pc = 0x8000;
      auto push = [&](Opcode op, uint8_t rd, uint8_t rs0, uint8_t rs1, int64_t imm) {
        p.push_back({op, rd, rs0, rs1, imm, pc});
        pc += 8;
      };
      push(Opcode::LOADI, 0, 0, 0, 0x80000);
      push(Opcode::LOAD, 1, 0, 0, 0);
      push(Opcode::LOADI, 2, 0, 0, static_cast<int64_t>(base));
      push(Opcode::LOADI, 3, 0, 0, static_cast<int64_t>(k));
      push(Opcode::MUL, 4, 1, 3, 0);
      push(Opcode::ADD, 5, 2, 4, 0);
      push(Opcode::HALT, 0, 0, 0, 0);
      sim.run(p);
      uint64_t sc = sim.scale_tracker().reg(5).sc;
      if (!sim.scale_tracker().reg(5).sc_valid || sc == 0) {
        detail = "address register lost its scale";
        return false;
      }
      if (i > 0 && (sim.reg(5) - prev_addr) % sc != 0) {
        snprintf(buf_detail, sizeof(buf_detail), "scale %llu does not divide delta at k=%llu",
                 (unsigned long long)sc, (unsigned long long)k);
        detail = buf_detail;
        return false;
      }
      prev_addr = sim.reg(5);
    }
  }
  detail = "rule-table sweep + 100 stride-soundness programs";
  return true;
}

bool c8_diff_min_oracle(std::string& detail) {
  SplitMix64 rng(8);
  AtConfig cfg;
  for (int iter = 0; iter < 10000; ++iter) {
    AccessTracker at(cfg);
    AccessBuffer* buf = at.activate(0x8000, 0);
    uint32_t n = 2 + rng.next_below(10);
    for (uint32_t i = 0; i < n; ++i) {
      at.record(*buf, rng.next_below(1 << 15) * 64);
      at.update_diff_min(*buf);
    }
    std::vector<Addr> blks;
    for (const auto& e : buf->entries)
      if (e.valid) blks.push_back(e.blk);
    uint64_t brute = UINT64_MAX;
    for (size_t i = 0; i < blks.size(); ++i)
      for (size_t j = i + 1; j < blks.size(); ++j)
        brute = std::min(brute, blks[i] > blks[j] ? blks[i] - blks[j] : blks[j] - blks[i]);
    if (blks.size() >= cfg.valid_threshold) {
      if (!buf->diff_min || *buf->diff_min != brute) {
        detail = "diff_min diverged from brute force";
        return false;
      }
    } else if (buf->diff_min) {
      detail = "diff_min set below the threshold";
      return false;
    }
  }

  // worked example: entries 0x1000/0x1F00/0x1600/0x1C00 give 0x300 and the
  // prefetch lands at 0x1900
  AccessTracker at(cfg);
  AccessBuffer* buf = at.activate(0x8008, 0);
  for (Addr a : {0x1000, 0x1F00, 0x1600, 0x1C00}) {
    at.record(*buf, a);
    at.update_diff_min(*buf);
  }
  auto cand = at.candidate(*buf, 0x1C00, [](Addr) { return false; });
  bool ok = buf->diff_min && *buf->diff_min == 0x300 && cand && *cand == 0x1900;
  detail = ok ? "10^4 random buffers + worked example (0x300 -> 0x1900)"
              : "worked example diverged";
  return ok;
}

bool c9_modulus_oracles(std::string& detail) {
  SplitMix64 rng(9);
  // match_scale against direct arithmetic
  for (int iter = 0; iter < 10000; ++iter) {
    RecordProtector rp(RpConfig{});
    std::vector<std::pair<uint64_t, Addr>> pats;
    uint32_t n = 1 + rng.next_below(6);
    for (uint32_t i = 0; i < n; ++i)
      rp.record_scale(128ULL << rng.next_below(5), rng.next_below(512) * 64);
    for (const auto& e : rp.entries())
      if (e.valid) pats.push_back({e.sc, e.anchor});
    Addr blk = rng.next_below(1024) * 64;
    bool expect = false;
    for (auto& [sc, anchor] : pats)
      expect = expect || RecordProtector::on_pattern(blk, sc, anchor);
    if (rp.match_scale(blk).has_value() != expect) {
      detail = "match_scale diverged from direct arithmetic";
      return false;
    }
    // the subsumption invariant holds after every step
    for (size_t a = 0; a < pats.size(); ++a)
      for (size_t b = a + 1; b < pats.size(); ++b)
        if (RecordProtector::on_pattern(pats[a].second, std::min(pats[a].first, pats[b].first),
                                        pats[b].second)) {
          detail = "scale buffer holds mutually subsuming entries";
          return false;
        }
  }

  // worked examples: 0x2400 hits (0x400, 0x1000); recording (0x400, 0x1000)
  // over (0x100, 0x2000) replaces the entry
  RecordProtector rp(RpConfig{});
  rp.record_scale(0x100, 0x2000);
  rp.record_scale(0x400, 0x1000);
  auto hit = rp.match_scale(0x2400);
  bool ok = rp.entries()[0].valid && rp.entries()[0].sc == 0x400 &&
            rp.entries()[0].anchor == 0x1000 && hit && hit->sc == 0x400 &&
            !rp.match_scale(0x2500).has_value();
  detail = ok ? "10^4 random cases + worked examples" : "worked example diverged";
  return ok;
}

bool c10_source_ordering(std::string& detail) {
  bool ok = true;
  std::string parts;
  for (AttackKind kind :
       {AttackKind::FLUSH_RELOAD, AttackKind::EVICT_RELOAD, AttackKind::PRIME_PROBE}) {
    SimConfig cfg = base_config(kind);
    cfg.attack.c2_random_order = true;
    cfg.attack.c3_noisy_instr = true;
    cfg.attack.c4_noisy_access = true;
    cfg.attack.seed = 10;
    ScenarioRun run = run_scenario(cfg.attack, cfg, 20);
    uint64_t st = run.counters.accepted[static_cast<size_t>(PrefetchSource::ST)];
    uint64_t at = run.counters.accepted[static_cast<size_t>(PrefetchSource::AT)];
    uint64_t rp = run.counters.accepted[static_cast<size_t>(PrefetchSource::RP_GUIDED)];
    snprintf(buf_detail, sizeof(buf_detail), "%s AT=%llu RP=%llu ST=%llu ",
             attack_kind_name(kind), (unsigned long long)at, (unsigned long long)rp,
             (unsigned long long)st);
    parts += buf_detail;
    ok = ok && at > rp && rp > st;
  }
  detail = parts;
  return ok;
}

bool c11_benign(std::string& detail) {
  auto t0 = std::chrono::steady_clock::now();
  auto bench = [&](WorkloadKind kind, bool st, bool at, bool rp, BasePrefetcher base) {
    SimConfig cfg;
    cfg.st.enabled = st;
    cfg.at.enabled = at;
    cfg.rp.enabled = rp;
    cfg.base = base;
    cfg.workload.kind = kind;
    cfg.workload.length = 100000;
    cfg.workload.seed = 11;
    return run_workload(cfg.workload, cfg);
  };

  bool ok = true;
  std::string parts;
  for (WorkloadKind kind : {WorkloadKind::SEQUENTIAL, WorkloadKind::STRIDED}) {
    auto stride_only = bench(kind, false, false, false, BasePrefetcher::STRIDE);
    auto defended = bench(kind, true, true, true, BasePrefetcher::STRIDE);
    double ratio = static_cast<double>(defended.summary.demand_misses) /
                   std::max<uint64_t>(1, stride_only.summary.demand_misses);
    snprintf(buf_detail, sizeof(buf_detail), "%s miss-ratio=%.3f ", workload_kind_name(kind), ratio);
    parts += buf_detail;
    ok = ok && ratio <= 1.05;
  }
  {
    auto plain = bench(WorkloadKind::NESTED_2D, false, false, false, BasePrefetcher::NONE);
    auto defended = bench(WorkloadKind::NESTED_2D, true, true, true, BasePrefetcher::NONE);
    snprintf(buf_detail, sizeof(buf_detail), "nested_2d miss %llu -> %llu ",
             (unsigned long long)plain.summary.demand_misses,
             (unsigned long long)defended.summary.demand_misses);
    parts += buf_detail;
    ok = ok && defended.summary.demand_misses < plain.summary.demand_misses;
  }
  for (WorkloadKind kind : {WorkloadKind::RANDOM, WorkloadKind::DEP_CHAIN}) {
    auto plain = bench(kind, false, false, false, BasePrefetcher::NONE);
    auto defended = bench(kind, true, true, true, BasePrefetcher::NONE);
    double ratio = static_cast<double>(defended.summary.total_miss_latency) /
                   std::max<uint64_t>(1, plain.summary.total_miss_latency);
    snprintf(buf_detail, sizeof(buf_detail), "%s latency-ratio=%.3f ", workload_kind_name(kind),
             ratio);
    parts += buf_detail;
    ok = ok && ratio <= 1.10;
  }
  double secs = seconds_since(t0);
  snprintf(buf_detail, sizeof(buf_detail), "(%.1fs)", secs);
  parts += buf_detail;
  detail = parts;
  return ok && secs < 30.0;
}

bool c12_determinism(std::string& detail) {
  SimConfig cfg = base_config(AttackKind::FLUSH_RELOAD);
  cfg.attack.c2_random_order = true;
  cfg.attack.c3_noisy_instr = true;
  cfg.attack.c4_noisy_access = true;
  cfg.attack.seed = 12;
  ScenarioRun a = run_scenario(cfg.attack, cfg, 10);
  ScenarioRun b = run_scenario(cfg.attack, cfg, 10);
  bool jsonl_ok = emit_report(a.report, ReportFormat::JSON_LINES) ==
                  emit_report(b.report, ReportFormat::JSON_LINES);
  bool csv_ok =
      emit_report(a.report, ReportFormat::CSV) == emit_report(b.report, ReportFormat::CSV);

  SimConfig wcfg;
  wcfg.workload.kind = WorkloadKind::RANDOM;
  wcfg.workload.length = 20000;
  wcfg.workload.seed = 12;
  WorkloadRun wa = run_workload(wcfg.workload, wcfg);
  WorkloadRun wb = run_workload(wcfg.workload, wcfg);
  bool bench_ok = emit_report(wa.report, ReportFormat::JSON_LINES) ==
                  emit_report(wb.report, ReportFormat::JSON_LINES);

  detail = std::string("attack jsonl ") + (jsonl_ok ? "identical" : "DIVERGED") + ", csv " +
           (csv_ok ? "identical" : "DIVERGED") + ", bench jsonl " +
           (bench_ok ? "identical" : "DIVERGED");
  return jsonl_ok && csv_ok && bench_ok;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* label;
    std::function<bool(std::string&)> fn;
  };
  std::vector<Criterion> criteria = {
      {1, "baseline attacks succeed with defenses off", c1_baseline},
      {2, "scale tracker defeats reload attacks with centered ties", c2_st_defense},
      {3, "access tracker defeats randomized probing", c3_at_defense},
      {4, "noisy-instruction differential (8 noisy loads per probe)", c4_noisy_instructions},
      {5, "noisy-access differential (offset 0x100)", c5_noisy_accesses},
      {6, "full gauntlet holds the defense", c6_full_gauntlet},
      {7, "rule-table coverage and stride soundness oracle", c7_rule_table},
      {8, "DiffMin matches brute force", c8_diff_min_oracle},
      {9, "scale-buffer modulus and subsumption oracles", c9_modulus_oracles},
      {10, "prefetch source ordering AT > RP > ST", c10_source_ordering},
      {11, "benign workloads keep their miss behavior", c11_benign},
      {12, "reports are byte-stable under replay", c12_determinism},
  };

  int failures = 0;
  for (auto& c : criteria) {
    std::string detail;
    bool ok = false;
    try {
      ok = c.fn(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    printf("[%s] C%-2d %s -- %s\n", ok ? "PASS" : "FAIL", c.id, c.label, detail.c_str());
    if (!ok) ++failures;
  }
  printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
         criteria.size());
  return failures;
}
