#include "catto/normalized_body.hpp"

#include "catto/fingerprint.hpp"

#include <array>
#include <sstream>

namespace catto {

namespace {

struct OpcodeInfo {
  Opcode op;
  const char* name;
};

constexpr std::array<OpcodeInfo, 20> kOpcodes = {{
    {Opcode::Block, "block"},
    {Opcode::LetLocal, "let"},
    {Opcode::AssignLocal, "store"},
    {Opcode::AssignStatic, "sstore"},
    {Opcode::ExprStmt, "expr"},
    {Opcode::Return, "ret"},
    {Opcode::If, "if"},
    {Opcode::While, "while"},
    {Opcode::Assert, "assert"},
    {Opcode::IntLit, "int"},
    {Opcode::BoolLit, "bool"},
    {Opcode::StrLit, "str"},
    {Opcode::LocalRef, "load"},
    {Opcode::StaticGet, "sload"},
    {Opcode::FieldGet, "fload"},
    {Opcode::SelfCall, "callself"},
    {Opcode::MethodCall, "callmethod"},
    {Opcode::New, "new"},
    {Opcode::Binary, "binop"},
    {Opcode::Unary, "unop"},
}};

int to_int(const std::string& s) { return std::stoi(s); }

} // namespace

const char* opcode_name(Opcode op) {
  for (const auto& info : kOpcodes)
    if (info.op == op)
      return info.name;
  return "?";
}

std::optional<Opcode> opcode_from_name(const std::string& name) {
  for (const auto& info : kOpcodes)
    if (name == info.name)
      return info.op;
  return std::nullopt;
}

int Instruction::child_count() const {
  switch (op) {
  case Opcode::Block:
    return to_int(operands.at(0));
  case Opcode::LetLocal:
  case Opcode::AssignLocal:
  case Opcode::AssignStatic:
  case Opcode::ExprStmt:
  case Opcode::Assert:
  case Opcode::FieldGet:
  case Opcode::Unary:
    return 1;
  case Opcode::Return:
    return to_int(operands.at(0));
  case Opcode::If:
    return 2 + to_int(operands.at(0));
  case Opcode::While:
  case Opcode::Binary:
    return 2;
  case Opcode::IntLit:
  case Opcode::BoolLit:
  case Opcode::StrLit:
  case Opcode::LocalRef:
  case Opcode::StaticGet:
    return 0;
  case Opcode::SelfCall:
    return to_int(operands.at(1));
  case Opcode::MethodCall:
    return 1 + to_int(operands.at(1));
  case Opcode::New:
    return to_int(operands.at(2));
  }
  return 0;
}

std::string Instruction::str() const {
  std::ostringstream os;
  os << opcode_name(op);
  for (const auto& operand : operands)
    os << ' ' << operand;
  return os.str();
}

NormalizedBody NormalizedBody::from_instructions(std::vector<Instruction> instrs) {
  NormalizedBody body;
  body.fingerprint = fingerprint_instructions(instrs);
  body.instructions = std::move(instrs);
  return body;
}

uint64_t fingerprint_instructions(const std::vector<Instruction>& instrs) {
  Fnv1a64 hash;
  for (const auto& instr : instrs) {
    hash.update_byte(static_cast<unsigned char>(instr.op));
    for (const auto& operand : instr.operands) {
      hash.update(operand);
      hash.update_byte(0x1f); // operand separator
    }
    hash.update_byte(0x1e); // instruction separator
  }
  return hash.digest();
}

uint64_t fingerprint_field(const std::string& declared_type,
                           const std::vector<Instruction>& initializer) {
  Fnv1a64 hash;
  hash.update(declared_type);
  hash.update_byte(0x1d);
  uint64_t body = fingerprint_instructions(initializer);
  for (int i = 0; i < 8; ++i)
    hash.update_byte(static_cast<unsigned char>(body >> (8 * i)));
  return hash.digest();
}

} // namespace catto
