#include "prefender/isa.hpp"

#include <cctype>
#include <charconv>

namespace prefender {

const char* opcode_name(Opcode op) {
  switch (op) {
    case Opcode::LOADI: return "loadi";
    case Opcode::LOAD: return "load";
    case Opcode::ADD: return "add";
    case Opcode::ADDI: return "addi";
    case Opcode::SUB: return "sub";
    case Opcode::SUBI: return "subi";
    case Opcode::MUL: return "mul";
    case Opcode::MULI: return "muli";
    case Opcode::SHL: return "shl";
    case Opcode::SHLI: return "shli";
    case Opcode::SHR: return "shr";
    case Opcode::SHRI: return "shri";
    case Opcode::XOR: return "xor";
    case Opcode::FLUSH: return "flush";
    case Opcode::TIME: return "time";
    case Opcode::HALT: return "halt";
  }
  return "?";
}

namespace {

struct Cursor {
  const std::string& s;
  size_t pos = 0;
  size_t line_no;  // 1-based, for diagnostics

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError("line " + std::to_string(line_no) + ": " + msg);
  }

  void skip_ws() {
    while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t')) ++pos;
  }

  bool done() {
    skip_ws();
    return pos >= s.size();
  }

  void expect(char c) {
    skip_ws();
    if (pos >= s.size() || s[pos] != c)
      fail(std::string("expected '") + c + "'");
    ++pos;
  }

  bool accept(char c) {
    skip_ws();
    if (pos < s.size() && s[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }

  std::string word() {
    skip_ws();
    size_t start = pos;
    while (pos < s.size() && (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_'))
      ++pos;
    if (pos == start) fail("expected a token");
    return s.substr(start, pos - start);
  }

  uint8_t reg() {
    std::string w = word();
    if (w.size() < 2 || (w[0] != 'r' && w[0] != 'R'))
      fail("expected a register, got '" + w + "'");
    int v = 0;
    auto [p, ec] = std::from_chars(w.data() + 1, w.data() + w.size(), v, 10);
    if (ec != std::errc() || p != w.data() + w.size() || v < 0 || v > 31)
      fail("register out of range in '" + w + "'");
    return static_cast<uint8_t>(v);
  }

  int64_t immediate() {
    skip_ws();
    bool neg = accept('-');
    skip_ws();
    size_t start = pos;
    int base = 10;
    if (pos + 1 < s.size() && s[pos] == '0' && (s[pos + 1] == 'x' || s[pos + 1] == 'X')) {
      pos += 2;
      start = pos;
      base = 16;
    }
    uint64_t mag = 0;
    auto is_digit = [&](char c) {
      return base == 10 ? std::isdigit(static_cast<unsigned char>(c))
                        : std::isxdigit(static_cast<unsigned char>(c));
    };
    while (pos < s.size() && is_digit(s[pos])) ++pos;
    if (pos == start) fail("expected an immediate");
    auto [p, ec] = std::from_chars(s.data() + start, s.data() + pos, mag, base);
    if (ec != std::errc() || p != s.data() + pos) fail("bad immediate");
    int64_t v = static_cast<int64_t>(mag);
    return neg ? -v : v;
  }
};

}  // namespace

Program parse_program(const std::string& text) {
  Program prog;
  size_t line_start = 0;
  size_t line_index = 0;
  while (line_start <= text.size()) {
    size_t nl = text.find('\n', line_start);
    if (nl == std::string::npos) nl = text.size();
    std::string line = text.substr(line_start, nl - line_start);
    size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);

    Cursor cur{line, 0, line_index + 1};
    if (!cur.done()) {
      std::string mn = cur.word();
      MicroInstruction in;
      in.pc = 0x8000 + 8 * line_index;

      auto rd_rs_rs = [&](Opcode op) {
        in.op = op;
        in.rd = cur.reg();
        cur.expect(',');
        in.rs0 = cur.reg();
        cur.expect(',');
        in.rs1 = cur.reg();
      };
      auto rd_rs_imm = [&](Opcode op) {
        in.op = op;
        in.rd = cur.reg();
        cur.expect(',');
        in.rs0 = cur.reg();
        cur.expect(',');
        in.imm = cur.immediate();
      };
      auto mem_operand = [&]() {
        // imm(rs)
        in.imm = cur.immediate();
        cur.expect('(');
        in.rs0 = cur.reg();
        cur.expect(')');
      };

      if (mn == "loadi") {
        in.op = Opcode::LOADI;
        in.rd = cur.reg();
        cur.expect(',');
        in.imm = cur.immediate();
      } else if (mn == "load") {
        in.op = Opcode::LOAD;
        in.rd = cur.reg();
        cur.expect(',');
        mem_operand();
      } else if (mn == "add") {
        rd_rs_rs(Opcode::ADD);
      } else if (mn == "addi") {
        rd_rs_imm(Opcode::ADDI);
      } else if (mn == "sub") {
        rd_rs_rs(Opcode::SUB);
      } else if (mn == "subi") {
        rd_rs_imm(Opcode::SUBI);
      } else if (mn == "mul") {
        rd_rs_rs(Opcode::MUL);
      } else if (mn == "muli") {
        rd_rs_imm(Opcode::MULI);
      } else if (mn == "shl") {
        rd_rs_rs(Opcode::SHL);
      } else if (mn == "shli") {
        rd_rs_imm(Opcode::SHLI);
      } else if (mn == "shr") {
        rd_rs_rs(Opcode::SHR);
      } else if (mn == "shri") {
        rd_rs_imm(Opcode::SHRI);
      } else if (mn == "xor") {
        rd_rs_rs(Opcode::XOR);
      } else if (mn == "flush") {
        in.op = Opcode::FLUSH;
        mem_operand();
      } else if (mn == "time") {
        in.op = Opcode::TIME;
        in.rd = cur.reg();
      } else if (mn == "halt") {
        in.op = Opcode::HALT;
      } else {
        cur.fail("unknown mnemonic '" + mn + "'");
      }
      if (!cur.done()) cur.fail("trailing operands");
      prog.push_back(in);
    }

    if (nl == text.size()) break;
    line_start = nl + 1;
    ++line_index;
  }
  return prog;
}

}  // namespace prefender
