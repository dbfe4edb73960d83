#include "prefender/workload.hpp"

#include <algorithm>
#include <stdexcept>

namespace prefender {

namespace {

constexpr Addr kRegionBase = 0x200000;
constexpr Addr kChainBase = 0x1000000;
constexpr Addr kCellBase = 0x80000;

struct SlotAlloc {
  Addr next = 0x8000 - 8;
  Addr fresh() { return next += 8; }
};

}  // namespace

WorkloadProgram gen_workload(const WorkloadSpec& spec, const CacheConfig& cache) {
  WorkloadProgram out;
  SlotAlloc pc;
  Program& p = out.prog;
  const uint64_t L = spec.length;

  auto emit = [&](Opcode op, uint8_t rd, uint8_t rs0, uint8_t rs1, int64_t imm, Addr at) {
    p.push_back({op, rd, rs0, rs1, imm, at});
  };

  switch (spec.kind) {
    case WorkloadKind::SEQUENTIAL:
    case WorkloadKind::STRIDED: {
      uint64_t step = spec.kind == WorkloadKind::SEQUENTIAL ? cache.line_size
                                                            : spec.stride_bytes;
      if (L == 0) break;
      uint64_t span = L * step + 64;
      Addr base = kRegionBase;
      if (base + span > cache.phys_mem)
        throw std::invalid_argument("workload: footprint exceeds physical memory");
      Addr init_pc = pc.fresh();
      Addr load_pc = pc.fresh();
      Addr add_pc = pc.fresh();
      emit(Opcode::LOADI, 1, 0, 0, static_cast<int64_t>(base), init_pc);
      for (uint64_t i = 0; i < L; ++i) {
        emit(Opcode::LOAD, 2, 1, 0, 0, load_pc);
        emit(Opcode::ADDI, 1, 1, 0, static_cast<int64_t>(step), add_pc);
      }
      break;
    }
    case WorkloadKind::RANDOM: {
      SplitMix64 rng(spec.seed);
      Addr addr_pc = pc.fresh();
      Addr load_pc = pc.fresh();
      uint64_t lines = 1 << 18;  // 16 MiB working set
      for (uint64_t i = 0; i < L; ++i) {
        Addr a = kRegionBase + rng.next_below(lines) * cache.line_size;
        emit(Opcode::LOADI, 1, 0, 0, static_cast<int64_t>(a), addr_pc);
        emit(Opcode::LOAD, 2, 1, 0, 0, load_pc);
      }
      break;
    }
    case WorkloadKind::DEP_CHAIN: {
      if (L == 0) break;
      // Pointer chain over a seed-shuffled set of lines.
      SplitMix64 rng(spec.seed);
      uint64_t cells = std::min<uint64_t>(L, 1 << 16);
      std::vector<Addr> order(cells);
      for (uint64_t i = 0; i < cells; ++i) order[i] = kChainBase + i * cache.line_size;
      for (uint64_t i = cells - 1; i > 0; --i)
        std::swap(order[i], order[rng.next_below(i + 1)]);
      for (uint64_t i = 0; i < cells; ++i)
        out.pokes.push_back({order[i], order[(i + 1) % cells]});
      Addr init_pc = pc.fresh();
      Addr load_pc = pc.fresh();
      emit(Opcode::LOADI, 1, 0, 0, static_cast<int64_t>(order[0]), init_pc);
      for (uint64_t i = 0; i < L; ++i) emit(Opcode::LOAD, 1, 1, 0, 0, load_pc);
      break;
    }
    case WorkloadKind::NESTED_2D: {
      if (L == 0) break;
      // address = base + 128*i + 32*j with i, j loaded (unknown) indices.
      const uint64_t J = 64;
      uint64_t I = (L + J - 1) / J;
      out.pokes.push_back({kCellBase, 0});        // i cell
      out.pokes.push_back({kCellBase + 64, 0});   // j cell
      Addr p0 = pc.fresh(), p1 = pc.fresh(), p2 = pc.fresh(), p3 = pc.fresh();
      emit(Opcode::LOADI, 1, 0, 0, static_cast<int64_t>(kCellBase), p0);
      emit(Opcode::LOAD, 2, 1, 0, 0, p1);  // i (unknown)
      emit(Opcode::LOADI, 3, 0, 0, static_cast<int64_t>(kCellBase + 64), p2);
      emit(Opcode::LOAD, 4, 3, 0, 0, p3);  // j (unknown)
      Addr pb = pc.fresh();
      emit(Opcode::LOADI, 5, 0, 0, static_cast<int64_t>(kRegionBase), pb);
      Addr s_mul_i = pc.fresh(), s_mul_j = pc.fresh(), s_add = pc.fresh();
      Addr s_addb = pc.fresh(), s_load = pc.fresh(), s_incj = pc.fresh();
      Addr s_inci = pc.fresh(), s_rstj = pc.fresh();
      uint64_t emitted = 0;
      for (uint64_t i = 0; i < I && emitted < L; ++i) {
        for (uint64_t j = 0; j < J && emitted < L; ++j) {
          emit(Opcode::MULI, 6, 2, 0, 128, s_mul_i);
          emit(Opcode::MULI, 7, 4, 0, 32, s_mul_j);
          emit(Opcode::ADD, 8, 6, 7, 0, s_add);
          emit(Opcode::ADD, 9, 5, 8, 0, s_addb);
          emit(Opcode::LOAD, 10, 9, 0, 0, s_load);
          emit(Opcode::ADDI, 4, 4, 0, 1, s_incj);
          ++emitted;
        }
        emit(Opcode::LOAD, 4, 3, 0, 0, s_rstj);  // j = 0 again
        emit(Opcode::ADDI, 2, 2, 0, 1, s_inci);
      }
      break;
    }
  }
  if (!p.empty()) emit(Opcode::HALT, 0, 0, 0, 0, pc.fresh());
  return out;
}

WorkloadRun run_workload(const WorkloadSpec& spec, const SimConfig& cfg) {
  WorkloadProgram wp = gen_workload(spec, cfg.cache);
  Simulator sim(cfg);
  for (auto& [a, v] : wp.pokes) sim.poke(a, v);

  WorkloadRun out;
  ScenarioReport& rep = out.report;
  rep.scenario = std::string("bench:") + workload_kind_name(spec.kind);
  rep.trials = 1;
  rep.bucket_cycles = cfg.bucket_cycles;

  std::array<std::vector<uint64_t>, kPrefetchSourceCount> bucket_counts;
  std::vector<double> prot_timeline;
  Cycle next_bucket = cfg.bucket_cycles;
  while (!sim.halted() && sim.pc_index() < wp.prog.size()) {
    StepResult sr = sim.step(wp.prog);
    if (sr.fault) break;
    while (sim.cycle() >= next_bucket) {
      sim.pipeline().tick(next_bucket);
      size_t bucket = static_cast<size_t>(next_bucket / cfg.bucket_cycles) - 1;
      if (prot_timeline.size() <= bucket) prot_timeline.resize(bucket + 1, 0.0);
      prot_timeline[bucket] = sim.access_tracker().protected_count();
      next_bucket += cfg.bucket_cycles;
    }
  }

  out.summary = sim.summary();
  rep.demand_miss_count = out.summary.demand_misses;
  rep.demand_merge_count = out.summary.demand_merges;
  rep.total_miss_latency = out.summary.total_miss_latency;
  rep.ipc_proxy = out.summary.ipc();

  for (const auto& issue : sim.pipeline().issues()) {
    if (issue.status != PrefetchStatus::ACCEPTED) continue;
    size_t src = static_cast<size_t>(issue.source);
    size_t bucket = static_cast<size_t>(issue.at / cfg.bucket_cycles);
    if (bucket_counts[src].size() <= bucket) bucket_counts[src].resize(bucket + 1, 0);
    ++bucket_counts[src][bucket];
  }
  static const PrefetchSource kOrder[] = {PrefetchSource::ST, PrefetchSource::AT,
                                          PrefetchSource::RP_GUIDED, PrefetchSource::TAGGED,
                                          PrefetchSource::STRIDE};
  for (PrefetchSource s : kOrder)
    rep.prefetch_counts.push_back(
        {prefetch_source_name(s), bucket_counts[static_cast<size_t>(s)]});
  rep.protected_buffer_timeline = std::move(prot_timeline);
  return out;
}

}  // namespace prefender
