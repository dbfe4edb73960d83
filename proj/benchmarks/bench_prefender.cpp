#include "benchmark/benchmark.h"
#include "prefender/attack.hpp"
#include "prefender/sim.hpp"
#include "prefender/workload.hpp"

using namespace prefender;

static void BM_CacheAccess(benchmark::State& state) {
  CacheConfig cc;
  MemoryHierarchy hier(cc);
  SplitMix64 rng(1);
  Cycle now = 0;
  for (auto _ : state) {
    now += 4;
    benchmark::DoNotOptimize(hier.access(rng.next_below(1 << 16) * 64, now));
  }
}
BENCHMARK(BM_CacheAccess);

static void BM_RuleTableUpdate(benchmark::State& state) {
  ScaleTracker st{StConfig{}};
  SplitMix64 rng(2);
  for (auto _ : state) {
    MicroInstruction in{static_cast<Opcode>(rng.next_below(13)),
                        static_cast<uint8_t>(rng.next_below(32)),
                        static_cast<uint8_t>(rng.next_below(32)),
                        static_cast<uint8_t>(rng.next_below(32)),
                        static_cast<int64_t>(rng.next_below(1024)), 0x8000};
    st.track(in);
    benchmark::DoNotOptimize(st.reg(in.rd));
  }
}
BENCHMARK(BM_RuleTableUpdate);

static void BM_DiffMinRecompute(benchmark::State& state) {
  AtConfig cfg;
  AccessTracker at(cfg);
  AccessBuffer* buf = at.activate(0x8000, 0);
  SplitMix64 rng(3);
  for (int i = 0; i < 8; ++i) at.record(*buf, rng.next_below(1 << 15) * 64);
  for (auto _ : state) {
    at.update_diff_min(*buf);
    benchmark::DoNotOptimize(buf->diff_min);
  }
}
BENCHMARK(BM_DiffMinRecompute);

static void BM_AttackTrial(benchmark::State& state) {
  SimConfig cfg;
  cfg.attack.kind = AttackKind::FLUSH_RELOAD;
  cfg.attack.c2_random_order = true;
  cfg.attack.seed = 4;
  for (auto _ : state) {
    ScenarioRun run = run_scenario(cfg.attack, cfg, 1);
    benchmark::DoNotOptimize(run.report.defeated_rate);
  }
}
BENCHMARK(BM_AttackTrial);

static void BM_StridedWorkload(benchmark::State& state) {
  SimConfig cfg;
  cfg.base = BasePrefetcher::STRIDE;
  cfg.workload.kind = WorkloadKind::STRIDED;
  cfg.workload.length = static_cast<uint64_t>(state.range(0));
  for (auto _ : state) {
    WorkloadRun run = run_workload(cfg.workload, cfg);
    benchmark::DoNotOptimize(run.summary.cycles);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_StridedWorkload)->Arg(10000)->Arg(100000);

BENCHMARK_MAIN();
