#include "itrm/isa.hpp"

#include <cctype>
#include <map>
#include <optional>

#include "itrm/oracle.hpp"

namespace itrm {

namespace {

int arity(Opcode op) {
  switch (op) {
    case Opcode::Zero:
    case Opcode::Inc:
      return 1;
    case Opcode::Copy:
    case Opcode::Qry:
      return 2;
    case Opcode::Jeq:
      return 3;
  }
  return 0;
}

std::string_view mnemonic(Opcode op) {
  switch (op) {
    case Opcode::Zero: return "zero";
    case Opcode::Inc: return "inc";
    case Opcode::Copy: return "copy";
    case Opcode::Jeq: return "jeq";
    case Opcode::Qry: return "qry";
  }
  return "?";
}

}  // namespace

Program::Program(std::uint32_t register_count, std::vector<Instruction> lines)
    : register_count_(register_count), lines_(std::move(lines)) {
  if (register_count_ < 1) throw ProgramError("program must declare at least one register");
  for (std::size_t i = 0; i < lines_.size(); ++i) {
    const Instruction& ins = lines_[i];
    auto bad_reg = [&](std::uint32_t reg) { return reg >= register_count_; };
    bool invalid = false;
    switch (ins.op) {
      case Opcode::Zero:
      case Opcode::Inc:
        invalid = bad_reg(ins.r) || ins.s != 0 || ins.target != 0;
        break;
      case Opcode::Copy:
      case Opcode::Qry:
        invalid = bad_reg(ins.r) || bad_reg(ins.s) || ins.target != 0;
        break;
      case Opcode::Jeq:
        invalid = bad_reg(ins.r) || bad_reg(ins.s) || ins.target > lines_.size();
        break;
      default:
        invalid = true;
    }
    if (invalid)
      throw ProgramError("invalid instruction at line " + std::to_string(i) + ": " +
                         std::string(mnemonic(ins.op)) + " with out-of-range argument");
  }
}

namespace {

struct RawLine {
  std::size_t source_line;          // 1-based
  std::string mnemonic;
  std::size_t mnemonic_col;         // 1-based
  std::vector<std::string> args;
  std::vector<std::size_t> arg_cols;
};

bool is_label_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

bool is_label_name(std::string_view s) {
  if (s.empty()) return false;
  if (std::isdigit(static_cast<unsigned char>(s[0]))) return false;
  for (char c : s)
    if (!is_label_char(c)) return false;
  return true;
}

std::optional<std::uint64_t> parse_number(std::string_view s) {
  if (s.empty() || s.find_first_not_of("0123456789") != std::string_view::npos)
    return std::nullopt;
  if (s.size() > 1 && s[0] == '0') return std::nullopt;
  std::uint64_t v = 0;
  for (char c : s) {
    if (v > (UINT64_MAX - 9) / 10) return std::nullopt;
    v = v * 10 + static_cast<std::uint64_t>(c - '0');
  }
  return v;
}

}  // namespace

Program parse_program(std::string_view text) {
  // Pass 1: split into significant tokens per line, collecting label
  // definitions against the index of the next instruction.
  std::vector<RawLine> raw;
  std::map<std::string, std::size_t, std::less<>> labels;
  bool header_seen = false;
  std::uint64_t register_count = 0;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    ++line_no;

    std::size_t comment = line.find(';');
    if (comment != std::string_view::npos) line = line.substr(0, comment);

    // Tokenize on blanks, remembering 1-based columns.
    std::vector<std::pair<std::string, std::size_t>> tokens;
    std::size_t i = 0;
    while (i < line.size()) {
      if (line[i] == ' ' || line[i] == '\t' || line[i] == '\r') {
        ++i;
        continue;
      }
      std::size_t start = i;
      while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
      tokens.emplace_back(std::string(line.substr(start, i - start)), start + 1);
    }

    if (!tokens.empty()) {
      std::size_t t = 0;
      if (!header_seen) {
        if (tokens[0].first != "registers")
          throw AsmError("expected 'registers <n>' header", line_no, tokens[0].second);
        if (tokens.size() != 2)
          throw AsmError("'registers' takes exactly one argument", line_no, tokens[0].second);
        auto n = parse_number(tokens[1].first);
        if (!n || *n < 1 || *n > UINT32_MAX)
          throw AsmError("bad register count '" + tokens[1].first + "'", line_no,
                         tokens[1].second);
        register_count = *n;
        header_seen = true;
      } else {
        while (t < tokens.size() && tokens[t].first.back() == ':') {
          std::string name = tokens[t].first.substr(0, tokens[t].first.size() - 1);
          if (!is_label_name(name))
            throw AsmError("bad label name '" + name + "'", line_no, tokens[t].second);
          if (labels.count(name))
            throw AsmError("duplicate label '" + name + "'", line_no, tokens[t].second);
          labels[name] = raw.size();
          ++t;
        }
        if (t < tokens.size()) {
          RawLine rl;
          rl.source_line = line_no;
          rl.mnemonic = tokens[t].first;
          rl.mnemonic_col = tokens[t].second;
          for (std::size_t k = t + 1; k < tokens.size(); ++k) {
            rl.args.push_back(tokens[k].first);
            rl.arg_cols.push_back(tokens[k].second);
          }
          raw.push_back(std::move(rl));
        }
      }
    }

    if (eol == text.size()) break;
    pos = eol + 1;
  }

  if (!header_seen) throw AsmError("missing 'registers <n>' header", line_no, 1);

  // Pass 2: assemble instructions, resolving label targets.
  std::vector<Instruction> lines;
  lines.reserve(raw.size());
  for (const RawLine& rl : raw) {
    Opcode op;
    if (rl.mnemonic == "zero") op = Opcode::Zero;
    else if (rl.mnemonic == "inc") op = Opcode::Inc;
    else if (rl.mnemonic == "copy") op = Opcode::Copy;
    else if (rl.mnemonic == "jeq") op = Opcode::Jeq;
    else if (rl.mnemonic == "qry") op = Opcode::Qry;
    else
      throw AsmError("unknown mnemonic '" + rl.mnemonic + "'", rl.source_line,
                     rl.mnemonic_col);

    std::size_t want = static_cast<std::size_t>(arity(op));
    if (rl.args.size() != want)
      throw AsmError("'" + rl.mnemonic + "' takes " + std::to_string(want) +
                         " argument(s), got " + std::to_string(rl.args.size()),
                     rl.source_line, rl.mnemonic_col);

    auto reg_arg = [&](std::size_t k) -> std::uint32_t {
      auto v = parse_number(rl.args[k]);
      if (!v || *v >= register_count)
        throw AsmError("register index '" + rl.args[k] + "' out of range (program has " +
                           std::to_string(register_count) + " register(s))",
                       rl.source_line, rl.arg_cols[k]);
      return static_cast<std::uint32_t>(*v);
    };

    Instruction ins;
    ins.op = op;
    ins.r = reg_arg(0);
    if (op == Opcode::Copy || op == Opcode::Qry || op == Opcode::Jeq) ins.s = reg_arg(1);
    if (op == Opcode::Jeq) {
      const std::string& t = rl.args[2];
      if (auto v = parse_number(t)) {
        if (*v > raw.size())
          throw AsmError("jump target " + t + " beyond program length " +
                             std::to_string(raw.size()),
                         rl.source_line, rl.arg_cols[2]);
        ins.target = static_cast<std::uint32_t>(*v);
      } else if (is_label_name(t)) {
        auto it = labels.find(t);
        if (it == labels.end())
          throw AsmError("undefined label '" + t + "'", rl.source_line, rl.arg_cols[2]);
        ins.target = static_cast<std::uint32_t>(it->second);
      } else {
        throw AsmError("bad jump target '" + t + "'", rl.source_line, rl.arg_cols[2]);
      }
    }
    lines.push_back(ins);
  }

  try {
    return Program(static_cast<std::uint32_t>(register_count), std::move(lines));
  } catch (const ProgramError& e) {
    throw AsmError(e.what(), line_no, 1);
  }
}

std::string render_program(const Program& p) {
  std::string out = "registers " + std::to_string(p.register_count()) + "\n";
  for (const Instruction& ins : p.lines()) {
    out += mnemonic(ins.op);
    out += ' ';
    out += std::to_string(ins.r);
    if (arity(ins.op) >= 2) {
      out += ' ';
      out += std::to_string(ins.s);
    }
    if (arity(ins.op) >= 3) {
      out += ' ';
      out += std::to_string(ins.target);
    }
    out += '\n';
  }
  return out;
}

namespace {

Nat instruction_code(const Instruction& ins) {
  Nat a3 = ins.target;
  Nat a2 = ins.s;
  Nat a1 = ins.r;
  return cantor_pair(Nat(static_cast<unsigned>(ins.op)),
                     cantor_pair(a1, cantor_pair(a2, a3)));
}

}  // namespace

Nat encode_program(const Program& p) {
  Nat body = 0;
  for (auto it = p.lines().rbegin(); it != p.lines().rend(); ++it)
    body = cantor_pair(instruction_code(*it), body);
  return cantor_pair(Nat(p.length()), body);
}

Program decode_program(const Nat& code, std::uint32_t register_count) {
  if (register_count < 1) throw ProgramError("decode_program: register count must be >= 1");
  auto [len_nat, body] = cantor_unpair(code);
  if (len_nat > (1 << 26))
    throw std::length_error("decode_program: decoded program length is impractically large");
  std::size_t len = static_cast<std::size_t>(len_nat);

  std::vector<Instruction> lines;
  lines.reserve(len);
  Nat rest = body;
  for (std::size_t i = 0; i < len; ++i) {
    auto [c, next] = cantor_unpair(rest);
    rest = next;
    auto [op_raw, args] = cantor_unpair(c);
    auto [a1, tail] = cantor_unpair(args);
    auto [a2, a3] = cantor_unpair(tail);

    Instruction ins;
    ins.op = static_cast<Opcode>(static_cast<unsigned>(op_raw % 5));
    ins.r = static_cast<std::uint32_t>(a1 % register_count);
    if (ins.op == Opcode::Copy || ins.op == Opcode::Qry || ins.op == Opcode::Jeq)
      ins.s = static_cast<std::uint32_t>(a2 % register_count);
    if (ins.op == Opcode::Jeq)
      ins.target = static_cast<std::uint32_t>(a3 % Nat(len + 1));
    lines.push_back(ins);
  }
  return Program(register_count, std::move(lines));
}

}  // namespace itrm
