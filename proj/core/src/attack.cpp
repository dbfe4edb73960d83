#include "prefender/attack.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_set>

namespace prefender {

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::SUCCESS: return "SUCCESS";
    case Verdict::DEFEATED: return "DEFEATED";
    case Verdict::WRONG: return "WRONG";
  }
  return "?";
}

InferenceResult infer_secret(const std::vector<uint32_t>& latencies, AttackKind kind) {
  InferenceResult out;
  if (latencies.empty()) return out;
  bool probe = kind == AttackKind::PRIME_PROBE;
  uint32_t best = latencies[0];
  uint32_t best_idx = 0;
  for (uint32_t i = 1; i < latencies.size(); ++i) {
    if ((probe && latencies[i] > best) || (!probe && latencies[i] < best)) {
      best = latencies[i];
      best_idx = i;
    }
  }
  uint32_t ties = 0;
  for (uint32_t l : latencies) {
    uint32_t d = l > best ? l - best : best - l;
    if (d <= 1) ++ties;
  }
  out.extremum_count = ties;
  if (ties == 1) {
    out.inferred = best_idx;
    out.verdict = Verdict::SUCCESS;  // caller downgrades to WRONG on mismatch
  } else {
    out.verdict = Verdict::DEFEATED;
  }
  return out;
}

namespace {

// Register conventions for generated programs.
constexpr uint8_t kRegInit = 7;        // phase 1 address staging
constexpr uint8_t kRegInitVal = 12;    // phase 1 load sink
constexpr uint8_t kRegSecretPtr = 0;
constexpr uint8_t kRegSecret = 1;
constexpr uint8_t kRegBase = 2;
constexpr uint8_t kRegStride = 3;
constexpr uint8_t kRegOffset = 4;
constexpr uint8_t kRegTarget = 5;
constexpr uint8_t kRegVictimVal = 6;
constexpr uint8_t kRegProbeAddr = 8;
constexpr uint8_t kRegT1 = 9;
constexpr uint8_t kRegProbeVal = 10;
constexpr uint8_t kRegT2 = 11;
constexpr uint8_t kRegNoiseAddr = 13;
constexpr uint8_t kRegNoiseVal = 14;

constexpr Addr kVictimBase = 0x100000;
constexpr Addr kSecretCell = 0x80000;
constexpr Addr kConflictRegion = 0x1000000;   // evict+reload conflictors
constexpr Addr kPrimeRegion = 0x2000000;      // prime+probe probe lines
constexpr Addr kFillerRegion = 0x3000000;     // prime+probe way fillers
constexpr Addr kNoiseRegion = 0x4000000;      // c3 noise loads

class ProgramBuilder {
 public:
  Addr fresh_pc() { return next_pc_ += 8; }

  size_t emit(Opcode op, uint8_t rd, uint8_t rs0, uint8_t rs1, int64_t imm, Addr pc) {
    prog_.push_back({op, rd, rs0, rs1, imm, pc});
    return prog_.size() - 1;
  }
  size_t loadi(uint8_t rd, uint64_t imm, Addr pc) {
    return emit(Opcode::LOADI, rd, 0, 0, static_cast<int64_t>(imm), pc);
  }
  size_t load(uint8_t rd, uint8_t rs, int64_t imm, Addr pc) {
    return emit(Opcode::LOAD, rd, rs, 0, imm, pc);
  }

  Program take() { return std::move(prog_); }
  size_t size() const { return prog_.size(); }

 private:
  Program prog_;
  Addr next_pc_ = 0x8000 - 8;
};

}  // namespace

AttackProgram gen_attack(const AttackSpec& spec, const CacheConfig& cache,
                         uint32_t secret, uint64_t seed) {
  if (spec.k_lines < 2) throw std::invalid_argument("attack: k_lines must be >= 2");
  if (secret >= spec.k_lines) throw std::invalid_argument("attack: secret out of range");
  if (spec.stride_bytes < cache.line_size)
    throw std::invalid_argument("attack: stride_bytes must be >= line_size");

  const uint32_t K = spec.k_lines;
  const uint64_t S = spec.stride_bytes;
  const uint64_t l1_span = cache.l1_sets() * cache.line_size;

  AttackProgram out;
  out.kind = spec.kind;
  out.secret = secret;
  out.victim_base = kVictimBase;
  out.probe_base = spec.kind == AttackKind::PRIME_PROBE ? kVictimBase + kPrimeRegion
                                                        : kVictimBase;

  Addr top = std::max({kNoiseRegion + 0x1000000,
                       kFillerRegion + kVictimBase + K * S + cache.l1_ways * l1_span,
                       kConflictRegion + kVictimBase + K * S + (cache.l1_ways + 3) * l1_span});
  if (top > cache.phys_mem)
    throw std::invalid_argument("attack: eviction set does not fit in physical memory");

  if (spec.kind == AttackKind::PRIME_PROBE) {
    // Each probed index needs its own L1 set and a spare way for the filler
    // line that the victim's fill will not displace.
    if (cache.l1_ways < 2)
      throw std::invalid_argument("attack: prime+probe needs at least 2 L1 ways");
    std::unordered_set<uint32_t> sets;
    for (uint32_t j = 0; j < K; ++j) {
      Addr line = kVictimBase + j * S;
      if (!sets.insert(static_cast<uint32_t>((line / cache.line_size) % cache.l1_sets())).second)
        throw std::invalid_argument(
            "attack: prime+probe eviction set is not constructible: probed lines "
            "alias in the L1 (need k_lines * stride_bytes <= l1 sets * line_size)");
    }
  }

  // The secret cell must not conflict with any probed or victim line's L1
  // set; otherwise the victim's pointer load perturbs the measured state.
  std::unordered_set<uint32_t> used_sets;
  for (uint32_t j = 0; j < K; ++j) {
    used_sets.insert(static_cast<uint32_t>(((kVictimBase + j * S) / cache.line_size) % cache.l1_sets()));
    used_sets.insert(static_cast<uint32_t>(((out.probe_base + j * S) / cache.line_size) % cache.l1_sets()));
  }
  Addr secret_cell = kSecretCell;
  while (used_sets.count(static_cast<uint32_t>((secret_cell / cache.line_size) % cache.l1_sets())))
    secret_cell += cache.line_size;

  SplitMix64 rng(seed ^ 0x5eedULL);
  ProgramBuilder b;

  // ---- Phase 1: initialize cache state (unique pcs throughout).
  switch (spec.kind) {
    case AttackKind::FLUSH_RELOAD: {
      b.loadi(kRegInit, kVictimBase, b.fresh_pc());
      for (uint32_t j = 0; j < K; ++j)
        b.emit(Opcode::FLUSH, 0, kRegInit, 0, static_cast<int64_t>(j * S), b.fresh_pc());
      for (uint32_t j = 0; j < K; ++j)
        out.eviction_lines.push_back(kVictimBase + j * S);
      break;
    }
    case AttackKind::EVICT_RELOAD: {
      // Fill each victim line's set with l1_ways + 2 conflicting tags.
      for (uint32_t j = 0; j < K; ++j) {
        for (uint32_t t = 1; t <= cache.l1_ways + 2; ++t) {
          Addr addr = kVictimBase + j * S + kConflictRegion + t * l1_span;
          b.loadi(kRegInit, addr, b.fresh_pc());
          b.load(kRegInitVal, kRegInit, 0, b.fresh_pc());
        }
        out.eviction_lines.push_back(kVictimBase + j * S);
      }
      break;
    }
    case AttackKind::PRIME_PROBE: {
      // Probe line first so the victim's fill evicts it; the remaining ways
      // are pinned with fillers.
      for (uint32_t j = 0; j < K; ++j) {
        Addr probe_line = out.probe_base + j * S;
        b.loadi(kRegInit, probe_line, b.fresh_pc());
        b.load(kRegInitVal, kRegInit, 0, b.fresh_pc());
        for (uint32_t w = 0; w + 1 < cache.l1_ways; ++w) {
          Addr filler = kVictimBase + j * S + kFillerRegion + w * l1_span;
          b.loadi(kRegInit, filler, b.fresh_pc());
          b.load(kRegInitVal, kRegInit, 0, b.fresh_pc());
        }
        out.eviction_lines.push_back(probe_line);
      }
      break;
    }
  }
  out.phase1_end = b.size();
  Cycle drain = 2 * cache.lat_mem + 16;
  out.skips.push_back({b.size(), drain});

  // ---- Phase 2: the victim's single secret-dependent load,
  //      address = base + secret * S computed from a loaded (unknown) value.
  out.pokes.push_back({secret_cell, secret});
  b.loadi(kRegSecretPtr, secret_cell, b.fresh_pc());
  b.load(kRegSecret, kRegSecretPtr, 0, b.fresh_pc());
  b.loadi(kRegBase, kVictimBase, b.fresh_pc());
  b.loadi(kRegStride, S, b.fresh_pc());
  b.emit(Opcode::MUL, kRegOffset, kRegSecret, kRegStride, 0, b.fresh_pc());
  b.emit(Opcode::ADD, kRegTarget, kRegBase, kRegOffset, 0, b.fresh_pc());
  out.victim_load_idx = b.load(kRegVictimVal, kRegTarget, 0, b.fresh_pc());
  out.skips.push_back({b.size(), drain});

  // ---- Phase 3: timed probe sweep. The probe loop body shares its pcs
  // across iterations; under C4 the off-pattern load reuses the probe pc.
  out.probe_order.resize(K);
  for (uint32_t j = 0; j < K; ++j) out.probe_order[j] = j;
  if (spec.c2_random_order) {
    for (uint32_t j = K - 1; j > 0; --j) {
      uint32_t r = static_cast<uint32_t>(rng.next_below(j + 1));
      std::swap(out.probe_order[j], out.probe_order[r]);
    }
  }

  Addr pc_addr_slot = b.fresh_pc();
  Addr pc_t1_slot = b.fresh_pc();
  Addr pc_probe = b.fresh_pc();
  Addr pc_t2_slot = b.fresh_pc();
  Addr pc_c4_addr_slot = b.fresh_pc();
  std::vector<std::pair<Addr, Addr>> noise_slots;  // (loadi pc, load pc)
  for (uint32_t k = 0; k < spec.noise_instr_count; ++k)
    noise_slots.push_back({b.fresh_pc(), b.fresh_pc()});
  out.probe_pc = pc_probe;

  for (uint32_t t = 0; t < K; ++t) {
    uint32_t j = out.probe_order[t];
    b.loadi(kRegProbeAddr, out.probe_base + j * S, pc_addr_slot);
    b.emit(Opcode::TIME, kRegT1, 0, 0, 0, pc_t1_slot);
    size_t li = b.load(kRegProbeVal, kRegProbeAddr, 0, pc_probe);
    out.probe_loads.push_back({li, j});
    b.emit(Opcode::TIME, kRegT2, 0, 0, 0, pc_t2_slot);

    if (spec.c4_noisy_access) {
      Addr noisy = out.probe_base + j * S + spec.noise_offset;
      b.loadi(kRegProbeAddr, noisy, pc_c4_addr_slot);
      b.load(kRegProbeVal, kRegProbeAddr, 0, pc_probe);
    }
    if (spec.c3_noisy_instr) {
      for (uint32_t k = 0; k < spec.noise_instr_count; ++k) {
        // Lines in a set-residue class disjoint from the eviction lines.
        Addr addr = kNoiseRegion + rng.next_below(32768) * 0x200 + 0x100;
        b.loadi(kRegNoiseAddr, addr, noise_slots[k].first);
        b.load(kRegNoiseVal, kRegNoiseAddr, 0, noise_slots[k].second);
      }
    }
  }
  b.emit(Opcode::HALT, 0, 0, 0, 0, b.fresh_pc());

  out.prog = b.take();
  return out;
}

ScenarioRun run_scenario(const AttackSpec& spec, const SimConfig& cfg, uint32_t trials) {
  ScenarioRun run;
  ScenarioReport& rep = run.report;
  rep.scenario = std::string("attack:") + attack_kind_name(spec.kind);
  rep.trials = trials;
  rep.bucket_cycles = cfg.bucket_cycles;
  rep.per_index_latency.assign(spec.k_lines, 0.0);

  std::array<std::vector<uint64_t>, kPrefetchSourceCount> bucket_counts;
  std::vector<double> prot_timeline;
  uint64_t success = 0, defeated = 0, wrong = 0;
  uint64_t total_instr = 0, total_cycles = 0;

  for (uint32_t trial = 0; trial < trials; ++trial) {
    uint64_t trial_seed = spec.seed ^ (0x9e3779b97f4a7c15ULL * (trial + 1));
    SplitMix64 rng(trial_seed);

    uint32_t secret;
    if (spec.secret >= 0) {
      secret = static_cast<uint32_t>(spec.secret);
    } else if (spec.secret_domain == SecretDomain::IN_PAGE) {
      // Secrets whose +-stride neighbors stay within the same page.
      uint64_t per_page = cfg.cache.page_size / spec.stride_bytes;
      if (per_page < 3) throw std::invalid_argument("attack: no in-page secrets exist");
      std::vector<uint32_t> eligible;
      for (uint32_t s = 0; s < spec.k_lines; ++s) {
        uint64_t pos = s % per_page;
        if (pos != 0 && pos != per_page - 1) eligible.push_back(s);
      }
      secret = eligible[rng.next_below(eligible.size())];
    } else {
      secret = static_cast<uint32_t>(rng.next_below(spec.k_lines));
    }

    AttackProgram atk = gen_attack(spec, cfg.cache, secret, rng.next());
    Simulator sim(cfg);
    for (auto& [addr, val] : atk.pokes) sim.poke(addr, val);

    TrialResult tr;
    tr.secret = secret;
    tr.latencies.assign(spec.k_lines, 0);

    size_t next_skip = 0;
    size_t next_probe = 0;
    uint64_t trial_probe_hits = 0;
    Cycle next_bucket = cfg.bucket_cycles;
    auto sample_buckets = [&](Cycle now) {
      while (now >= next_bucket) {
        sim.pipeline().tick(next_bucket);
        size_t bucket = static_cast<size_t>(next_bucket / cfg.bucket_cycles) - 1;
        if (prot_timeline.size() <= bucket) prot_timeline.resize(bucket + 1, 0.0);
        prot_timeline[bucket] += sim.access_tracker().protected_count();
        next_bucket += cfg.bucket_cycles;
      }
    };

    for (size_t idx = 0; idx < atk.prog.size(); ++idx) {
      while (next_skip < atk.skips.size() && atk.skips[next_skip].first == idx) {
        sim.skip_cycles(atk.skips[next_skip].second);
        ++next_skip;
      }
      if (idx == atk.phase1_end && cfg.base == BasePrefetcher::NONE) {
        bool ok = true;
        for (Addr line : atk.eviction_lines) {
          bool l1 = sim.hierarchy().contains(CacheLevel::L1, line, sim.cycle());
          bool l2 = sim.hierarchy().contains(CacheLevel::L2, line, sim.cycle());
          switch (spec.kind) {
            case AttackKind::FLUSH_RELOAD: ok = ok && !l1 && !l2; break;
            case AttackKind::EVICT_RELOAD: ok = ok && !l1; break;
            case AttackKind::PRIME_PROBE: ok = ok && l1; break;
          }
        }
        tr.phase1_verified = ok;
        if (!ok) throw std::logic_error("attack: phase 1 cache state verification failed");
      }
      StepResult sr = sim.step(atk.prog);
      if (sr.fault) throw std::logic_error("attack: unexpected fault: " + sim.summary().fault_msg);
      if (next_probe < atk.probe_loads.size() && atk.probe_loads[next_probe].first == idx) {
        uint32_t index = atk.probe_loads[next_probe].second;
        tr.latencies[index] = sr.latency;
        if (sr.hit_level == HitLevel::L1) ++trial_probe_hits;
        ++next_probe;
      }
      sample_buckets(sim.cycle());
      if (sr.halted) break;
    }

    tr.inference = infer_secret(tr.latencies, spec.kind);
    if (tr.inference.verdict == Verdict::SUCCESS && tr.inference.inferred != secret)
      tr.inference.verdict = Verdict::WRONG;
    switch (tr.inference.verdict) {
      case Verdict::SUCCESS: ++success; break;
      case Verdict::DEFEATED: ++defeated; break;
      case Verdict::WRONG: ++wrong; break;
    }

    for (uint32_t i = 0; i < spec.k_lines; ++i)
      rep.per_index_latency[i] += tr.latencies[i];

    for (const auto& issue : sim.pipeline().issues()) {
      run.issues.push_back(issue);
      if (issue.status != PrefetchStatus::ACCEPTED) continue;
      size_t src = static_cast<size_t>(issue.source);
      size_t bucket = static_cast<size_t>(issue.at / cfg.bucket_cycles);
      if (bucket_counts[src].size() <= bucket) bucket_counts[src].resize(bucket + 1, 0);
      ++bucket_counts[src][bucket];
    }
    const PortCounters& pc = sim.hierarchy().counters();
    for (size_t s = 0; s < kPrefetchSourceCount; ++s) {
      run.counters.attempts[s] += pc.attempts[s];
      run.counters.accepted[s] += pc.accepted[s];
    }

    tr.probe_l1_hit_fraction = static_cast<double>(trial_probe_hits) / spec.k_lines;

    total_instr += sim.summary().instructions;
    total_cycles += sim.summary().cycles;
    rep.demand_miss_count += sim.summary().demand_misses;
    rep.demand_merge_count += sim.summary().demand_merges;
    rep.total_miss_latency += sim.summary().total_miss_latency;

    run.trial_results.push_back(std::move(tr));
  }

  for (auto& v : rep.per_index_latency) v /= trials;
  rep.success_rate = static_cast<double>(success) / trials;
  rep.defeated_rate = static_cast<double>(defeated) / trials;
  rep.wrong_rate = static_cast<double>(wrong) / trials;
  rep.ipc_proxy = total_cycles == 0 ? 0.0
                                    : static_cast<double>(total_instr) / static_cast<double>(total_cycles);

  static const PrefetchSource kOrder[] = {PrefetchSource::ST, PrefetchSource::AT,
                                          PrefetchSource::RP_GUIDED, PrefetchSource::TAGGED,
                                          PrefetchSource::STRIDE};
  for (PrefetchSource s : kOrder)
    rep.prefetch_counts.push_back(
        {prefetch_source_name(s), bucket_counts[static_cast<size_t>(s)]});

  for (double& v : prot_timeline) v /= trials;
  rep.protected_buffer_timeline = std::move(prot_timeline);
  return run;
}

}  // namespace prefender
