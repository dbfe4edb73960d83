#include "prefender/sim.hpp"

namespace prefender {

Simulator::Simulator(const SimConfig& cfg)
    : cfg_(cfg),
      hier_(cfg.cache),
      st_(cfg.st),
      at_(cfg.at),
      rp_(cfg.rp),
      tagged_(cfg.cache.line_size),
      stride_(cfg.stride_table_size, cfg.cache.line_size),
      pipe_(hier_, st_, at_, rp_, cfg.base, tagged_, stride_, cfg.st.enabled,
            cfg.at.enabled, cfg.rp.enabled) {}

StepResult Simulator::step(const Program& prog) {
  StepResult sr;
  if (halted_ || summary_.fault || pc_index_ >= prog.size()) {
    sr.halted = true;
    sr.fault = summary_.fault;
    return sr;
  }

  const MicroInstruction& in = prog[pc_index_];
  sr.instr_index = pc_index_;
  sr.op = in.op;
  sr.pc = in.pc;
  ++pc_index_;
  ++summary_.instructions;

  auto alu = [&](uint64_t v) {
    regs_[in.rd] = v;
    pipe_.reg_write(in);
    cycle_ += 1;
    sr.cost = 1;
  };

  switch (in.op) {
    case Opcode::LOADI:
      alu(static_cast<uint64_t>(in.imm));
      break;
    case Opcode::ADD:
      alu(regs_[in.rs0] + regs_[in.rs1]);
      break;
    case Opcode::ADDI:
      alu(regs_[in.rs0] + static_cast<uint64_t>(in.imm));
      break;
    case Opcode::SUB:
      alu(regs_[in.rs0] - regs_[in.rs1]);
      break;
    case Opcode::SUBI:
      alu(regs_[in.rs0] - static_cast<uint64_t>(in.imm));
      break;
    case Opcode::MUL:
      alu(regs_[in.rs0] * regs_[in.rs1]);
      break;
    case Opcode::MULI:
      alu(regs_[in.rs0] * static_cast<uint64_t>(in.imm));
      break;
    case Opcode::SHL:
      alu(regs_[in.rs0] << (regs_[in.rs1] & 63));
      break;
    case Opcode::SHLI:
      alu(regs_[in.rs0] << (static_cast<uint64_t>(in.imm) & 63));
      break;
    case Opcode::SHR:
      alu(regs_[in.rs0] >> (regs_[in.rs1] & 63));
      break;
    case Opcode::SHRI:
      alu(regs_[in.rs0] >> (static_cast<uint64_t>(in.imm) & 63));
      break;
    case Opcode::XOR:
      alu(regs_[in.rs0] ^ regs_[in.rs1]);
      break;
    case Opcode::TIME:
      alu(cycle_);
      break;
    case Opcode::LOAD: {
      Addr eff = regs_[in.rs0] + static_cast<uint64_t>(in.imm);
      sr.is_load = true;
      sr.eff_addr = eff;
      if (eff + 8 > cfg_.cache.phys_mem) {
        summary_.fault = true;
        summary_.fault_msg = "load address " + std::to_string(eff) + " out of range";
        halted_ = true;
        sr.fault = true;
        return sr;
      }
      AccessResult res = pipe_.load_access(in.pc, eff, in.rs0, in.rd, cycle_);
      regs_[in.rd] = peek(eff);
      cycle_ += res.latency;
      sr.cost = res.latency;
      sr.latency = res.latency;
      sr.hit_level = res.hit_level;
      ++summary_.loads;
      if (res.hit_level == HitLevel::L2 || res.hit_level == HitLevel::MEM) {
        ++summary_.demand_misses;
        summary_.total_miss_latency += res.latency;
      } else if (res.hit_level == HitLevel::MSHR_MERGE) {
        ++summary_.demand_merges;
        summary_.total_miss_latency += res.latency;
      }
      break;
    }
    case Opcode::FLUSH: {
      Addr eff = regs_[in.rs0] + static_cast<uint64_t>(in.imm);
      sr.eff_addr = eff;
      pipe_.flush(eff);
      cycle_ += 1;
      sr.cost = 1;
      break;
    }
    case Opcode::HALT:
      halted_ = true;
      sr.halted = true;
      cycle_ += 1;
      sr.cost = 1;
      break;
  }
  summary_.cycles = cycle_;
  return sr;
}

RunSummary Simulator::run(const Program& prog, uint64_t max_steps) {
  for (uint64_t i = 0; i < max_steps; ++i) {
    StepResult sr = step(prog);
    if (sr.halted || sr.fault) break;
    if (halted_ || pc_index_ >= prog.size()) break;
  }
  summary_.cycles = cycle_;
  return summary_;
}

}  // namespace prefender
