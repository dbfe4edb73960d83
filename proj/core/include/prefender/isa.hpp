#ifndef PREFENDER_ISA_HPP_
#define PREFENDER_ISA_HPP_

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "prefender/common.hpp"

namespace prefender {

// Straight-line micro-ISA. There are no branches; program generators emit
// unrolled loop bodies and may reuse a pc value to model one static
// instruction executed many times.
enum class Opcode : uint8_t {
  LOADI,  // rd <- imm
  LOAD,   // rd <- mem[reg[rs0] + imm]
  ADD,    // rd <- rs0 + rs1
  ADDI,   // rd <- rs0 + imm
  SUB,
  SUBI,
  MUL,
  MULI,
  SHL,
  SHLI,
  SHR,
  SHRI,
  XOR,    // rd <- rs0 ^ rs1
  FLUSH,  // invalidate line of reg[rs0] + imm at all levels
  TIME,   // rd <- current cycle
  HALT,
};

const char* opcode_name(Opcode op);

struct MicroInstruction {
  Opcode op = Opcode::HALT;
  uint8_t rd = 0;
  uint8_t rs0 = 0;
  uint8_t rs1 = 0;
  int64_t imm = 0;
  Addr pc = 0;
};

using Program = std::vector<MicroInstruction>;

inline bool writes_register(Opcode op) {
  return op != Opcode::FLUSH && op != Opcode::HALT;
}

inline bool is_load(Opcode op) { return op == Opcode::LOAD; }

struct ParseError : std::runtime_error {
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// One instruction per line, `#` starts a comment, registers are r0..r31,
// immediates are decimal or 0x-prefixed hex (optionally negative).
// pc is assigned as 0x8000 + 8 * line-index (0-based source line).
//
//   loadi r3, 0x200
//   load  r6, 0(r5)
//   add   r5, r2, r4
//   muli  r4, r1, 0x200
//   flush 0x40(r7)
//   time  r9
//   halt
Program parse_program(const std::string& text);

}  // namespace prefender

#endif  // PREFENDER_ISA_HPP_
