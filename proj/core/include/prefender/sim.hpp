#ifndef PREFENDER_SIM_HPP_
#define PREFENDER_SIM_HPP_

#include <array>
#include <cstdint>
#include <string>
#include <unordered_map>

#include "prefender/cache.hpp"
#include "prefender/config.hpp"
#include "prefender/isa.hpp"
#include "prefender/pipeline.hpp"

namespace prefender {

struct StepResult {
  size_t instr_index = 0;
  Opcode op = Opcode::HALT;
  Addr pc = 0;
  Cycle cost = 1;           // cycles this instruction consumed
  bool is_load = false;
  Addr eff_addr = 0;
  uint32_t latency = 0;     // observed load latency
  HitLevel hit_level = HitLevel::MEM;
  bool halted = false;
  bool fault = false;
};

struct RunSummary {
  uint64_t instructions = 0;
  Cycle cycles = 0;
  uint64_t loads = 0;
  uint64_t demand_misses = 0;      // L2 or MEM
  uint64_t demand_merges = 0;      // completed against an in-flight fill
  uint64_t total_miss_latency = 0; // cycles spent on non-L1-hit demand accesses
  bool fault = false;
  std::string fault_msg;

  double ipc() const {
    return cycles == 0 ? 0.0 : static_cast<double>(instructions) / static_cast<double>(cycles);
  }
};

// One in-order core, blocking on demand loads: non-memory instructions
// retire in 1 cycle, a load retires after the hierarchy-reported latency.
// Replaying a program against the same configuration is bit-identical.
class Simulator {
 public:
  explicit Simulator(const SimConfig& cfg);

  StepResult step(const Program& prog);
  RunSummary run(const Program& prog, uint64_t max_steps = UINT64_MAX);

  void skip_cycles(Cycle n) { cycle_ += n; }
  void poke(Addr a, uint64_t v) { memory_[a] = v; }
  uint64_t peek(Addr a) const {
    auto it = memory_.find(a);
    return it == memory_.end() ? 0 : it->second;
  }

  Cycle cycle() const { return cycle_; }
  uint64_t reg(uint8_t r) const { return regs_[r]; }
  bool halted() const { return halted_; }
  size_t pc_index() const { return pc_index_; }
  const RunSummary& summary() const { return summary_; }

  MemoryHierarchy& hierarchy() { return hier_; }
  Pipeline& pipeline() { return pipe_; }
  ScaleTracker& scale_tracker() { return st_; }
  AccessTracker& access_tracker() { return at_; }
  RecordProtector& record_protector() { return rp_; }
  const SimConfig& config() const { return cfg_; }

 private:
  SimConfig cfg_;
  MemoryHierarchy hier_;
  ScaleTracker st_;
  AccessTracker at_;
  RecordProtector rp_;
  TaggedPrefetcher tagged_;
  StridePrefetcher stride_;
  Pipeline pipe_;

  std::array<uint64_t, 32> regs_{};
  Cycle cycle_ = 0;
  size_t pc_index_ = 0;
  bool halted_ = false;
  RunSummary summary_;
  std::unordered_map<Addr, uint64_t> memory_;
};

}  // namespace prefender

#endif  // PREFENDER_SIM_HPP_
