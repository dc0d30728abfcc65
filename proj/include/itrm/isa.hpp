#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "itrm/nat.hpp"

namespace itrm {

enum class Opcode : std::uint8_t { Zero = 0, Inc = 1, Copy = 2, Jeq = 3, Qry = 4 };

// One machine instruction. Fields beyond the opcode's arity are zero.
//   zero r      — register r := 0
//   inc r       — register r := r + 1
//   copy r s    — register s := register r
//   jeq r s t   — if registers r and s are equal, jump to line t, else fall
//                 through; t may equal the program length (explicit halt)
//   qry r s     — register s := oracle bit at position (value of register r)
struct Instruction {
  Opcode op = Opcode::Zero;
  std::uint32_t r = 0;
  std::uint32_t s = 0;
  std::uint32_t target = 0;

  bool operator==(const Instruction&) const = default;
};

class ProgramError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Assembly syntax error carrying a 1-based source position.
class AsmError : public std::runtime_error {
 public:
  AsmError(const std::string& what, std::size_t line, std::size_t column)
      : std::runtime_error("line " + std::to_string(line) + ", column " +
                           std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

// A validated program: every register index is below register_count and
// every jump target is at most the program length. Immutable.
class Program {
 public:
  Program(std::uint32_t register_count, std::vector<Instruction> lines);

  std::uint32_t register_count() const { return register_count_; }
  const std::vector<Instruction>& lines() const { return lines_; }
  std::size_t length() const { return lines_.size(); }

  bool operator==(const Program&) const = default;

 private:
  std::uint32_t register_count_;
  std::vector<Instruction> lines_;
};

// Parses assembly text: a `registers <n>` header followed by one instruction
// per line. Labels (`name:`) may prefix instructions and may stand alone, in
// which case they bind to the next instruction (or to the program length at
// end of file). Comments run from ';' to end of line.
Program parse_program(std::string_view text);

// Canonical text: header plus one instruction per line, numeric targets.
// parse_program(render_program(p)) == p.
std::string render_program(const Program& p);

// Goedel numbering of n-register programs, built from Cantor pairing:
//   instruction  |->  p(opcode, p(arg1, p(arg2, arg3)))
//   program      |->  p(length, p(c_0, p(c_1, ... p(c_{k-1}, 0))))
// decode_program is total: opcodes, register indices and jump targets are
// reduced modulo their legal ranges. encode_program is its right inverse.
Nat encode_program(const Program& p);
Program decode_program(const Nat& code, std::uint32_t register_count);

}  // namespace itrm
