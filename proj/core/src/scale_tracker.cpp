#include "prefender/scale_tracker.hpp"

#include <algorithm>

namespace prefender {

namespace {

constexpr uint64_t kScMax = (1ULL << 63) - 1;

enum class ScOp { MUL, SHL, SHR };

uint64_t clamp_sc(uint64_t v) {
  if (v == 0) return 1;
  return std::min(v, kScMax);
}

uint64_t magnitude(uint64_t value) {
  int64_t s = static_cast<int64_t>(value);
  if (s == INT64_MIN) return kScMax;
  return s < 0 ? static_cast<uint64_t>(-s) : static_cast<uint64_t>(s);
}

// Saturating scale arithmetic; operands are magnitudes.
uint64_t sc_apply(ScOp op, uint64_t a, uint64_t b) {
  switch (op) {
    case ScOp::MUL: {
      if (a == 0 || b == 0) return 1;
      if (a > kScMax / b) return kScMax;
      return clamp_sc(a * b);
    }
    case ScOp::SHL: {
      uint64_t sh = b & 63;
      if (a == 0) return 1;
      if (sh >= 63 || a > (kScMax >> sh)) return kScMax;
      return clamp_sc(a << sh);
    }
    case ScOp::SHR:
      return clamp_sc(a >> (b & 63));
  }
  return 1;
}

// Value arithmetic mirrors the core: wrapping adds/muls, masked shifts.
uint64_t val_add(uint64_t a, uint64_t b) { return a + b; }
uint64_t val_sub(uint64_t a, uint64_t b) { return a - b; }
uint64_t val_apply(ScOp op, uint64_t a, uint64_t b) {
  switch (op) {
    case ScOp::MUL: return a * b;
    case ScOp::SHL: return a << (b & 63);
    case ScOp::SHR: return a >> (b & 63);
  }
  return 0;
}

}  // namespace

void ScaleTracker::reset() {
  for (auto& t : tracks_) t = RegTrack::initial();
}

uint64_t ScaleTracker::apply_width(uint64_t v) const {
  return cfg_.bit_width >= 64 ? v : v & ((1ULL << cfg_.bit_width) - 1);
}

void ScaleTracker::assign(uint8_t rd, RegTrack t) {
  if (t.fva_valid) t.fva = apply_width(t.fva);
  if (t.sc_valid) {
    t.sc = apply_width(t.sc);
    if (t.sc == 0) t.sc = 1;
  }
  tracks_[rd] = t;
}

void ScaleTracker::on_load_dest(uint8_t rd) {
  assign(rd, RegTrack{0, 1, false, true});
}

void ScaleTracker::track(const MicroInstruction& in) {
  if (!writes_register(in.op)) return;

  const RegTrack& a = tracks_[in.rs0];
  const RegTrack& b = tracks_[in.rs1];
  RegTrack out;

  auto reg_imm_add = [&](bool sub) {
    if (!a.fva_valid) {
      out = RegTrack{0, a.sc, false, a.sc_valid};
    } else {
      uint64_t imm = static_cast<uint64_t>(in.imm);
      out = RegTrack{sub ? val_sub(a.fva, imm) : val_add(a.fva, imm), 1, true, true};
    }
  };
  auto reg_reg_add = [&](bool sub) {
    if (a.fva_valid && b.fva_valid) {
      out = RegTrack{sub ? val_sub(a.fva, b.fva) : val_add(a.fva, b.fva), 0, true, false};
    } else if (!a.fva_valid && b.fva_valid) {
      out = RegTrack{0, a.sc, false, a.sc_valid};
    } else if (a.fva_valid && !b.fva_valid) {
      out = RegTrack{0, b.sc, false, b.sc_valid};
    } else {
      // fva=NA implies a valid sc, so min() never sees an NA operand.
      uint64_t sa = a.sc_valid ? a.sc : 1;
      uint64_t sb = b.sc_valid ? b.sc : 1;
      out = RegTrack{0, std::min(sa, sb), false, true};
    }
  };
  auto reg_imm_mul = [&](ScOp op) {
    uint64_t imm = static_cast<uint64_t>(in.imm);
    if (!a.fva_valid) {
      uint64_t sa = a.sc_valid ? a.sc : 1;
      uint64_t factor = op == ScOp::MUL ? magnitude(imm) : imm;
      out = RegTrack{0, sc_apply(op, sa, factor), false, true};
    } else {
      out = RegTrack{val_apply(op, a.fva, imm), 1, true, true};
    }
  };
  auto reg_reg_mul = [&](ScOp op) {
    if (a.fva_valid && b.fva_valid) {
      out = RegTrack{val_apply(op, a.fva, b.fva), 0, true, false};
    } else if (!a.fva_valid && b.fva_valid) {
      uint64_t sa = a.sc_valid ? a.sc : 1;
      uint64_t factor = op == ScOp::MUL ? magnitude(b.fva) : b.fva;
      out = RegTrack{0, sc_apply(op, sa, factor), false, true};
    } else if (a.fva_valid && !b.fva_valid) {
      uint64_t sb = b.sc_valid ? b.sc : 1;
      uint64_t factor = op == ScOp::MUL ? magnitude(a.fva) : a.fva;
      out = RegTrack{0, sc_apply(op, factor, sb), false, true};
    } else {
      uint64_t sa = a.sc_valid ? a.sc : 1;
      uint64_t sb = b.sc_valid ? b.sc : 1;
      out = RegTrack{0, sc_apply(op, sa, sb), false, true};
    }
  };

  switch (in.op) {
    case Opcode::LOADI:
      out = RegTrack{static_cast<uint64_t>(in.imm), 1, true, true};
      break;
    case Opcode::LOAD:
      out = RegTrack{0, 1, false, true};
      break;
    case Opcode::ADD: reg_reg_add(false); break;
    case Opcode::SUB: reg_reg_add(true); break;
    case Opcode::ADDI: reg_imm_add(false); break;
    case Opcode::SUBI: reg_imm_add(true); break;
    case Opcode::MUL: reg_reg_mul(ScOp::MUL); break;
    case Opcode::MULI: reg_imm_mul(ScOp::MUL); break;
    case Opcode::SHL: reg_reg_mul(ScOp::SHL); break;
    case Opcode::SHLI: reg_imm_mul(ScOp::SHL); break;
    case Opcode::SHR: reg_reg_mul(ScOp::SHR); break;
    case Opcode::SHRI: reg_imm_mul(ScOp::SHR); break;
    case Opcode::XOR:
    case Opcode::TIME:
    default:
      // Unsupported calculation: reinitialize.
      out = RegTrack{0, 1, false, true};
      break;
  }
  assign(in.rd, out);
}

std::vector<StCandidate> ScaleTracker::candidates_for_load(uint8_t rs, Addr eff,
                                                           const CacheConfig& cache) const {
  std::vector<StCandidate> out;
  const RegTrack& t = tracks_[rs];
  if (!t.sc_valid) return out;
  uint64_t sc = t.sc;
  if (sc <= cache.line_size || sc >= cache.page_size) return out;

  Addr anchor = block_of(eff, cache.line_size);
  uint64_t page = page_of(eff, cache.page_size);
  if (eff >= sc && page_of(eff - sc, cache.page_size) == page)
    out.push_back({block_of(eff - sc, cache.line_size), anchor, sc});
  if (eff + sc >= eff && page_of(eff + sc, cache.page_size) == page)
    out.push_back({block_of(eff + sc, cache.line_size), anchor, sc});
  return out;
}

}  // namespace prefender
