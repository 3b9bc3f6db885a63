#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace catto {

// Canonical instruction stream for a method body: a preorder encoding of
// the body's syntax tree with cosmetic information erased. Whitespace,
// comments and local/parameter names never appear; locals are slot indices,
// literal values are kept verbatim, call targets stay unresolved
// (package?, name, arity). The stream is faithful: child counts are
// derivable from (opcode, operands), so the tree can be decoded back and
// re-rendered to source.
enum class Opcode : uint8_t {
  // statements
  Block,       // [count]
  LetLocal,    // [slot, declared-type-or-"_"]            1 child
  AssignLocal, // [slot]                                  1 child
  AssignStatic,// [package-or-"-", class, field]          1 child
  ExprStmt,    // []                                      1 child
  Return,      // ["0"|"1"]                               0 or 1 child
  If,          // ["0"|"1" has-else]                      cond, then, (else)
  While,       // []                                      cond, body
  Assert,      // []                                      1 child
  // expressions
  IntLit,      // [verbatim decimal text]
  BoolLit,     // ["true"|"false"]
  StrLit,      // [decoded value]
  LocalRef,    // [slot]
  StaticGet,   // [package-or-"-", class, field]
  FieldGet,    // [field]                                 1 child (base)
  SelfCall,    // [name, argc]                            argc children
  MethodCall,  // [name, argc]                            1 + argc children
  New,         // [package-or-"-", class, argc]           argc children
  Binary,      // [op token]                              2 children
  Unary,       // ["!"|"-"]                               1 child
};

const char* opcode_name(Opcode op);
std::optional<Opcode> opcode_from_name(const std::string& name);

struct Instruction {
  Opcode op;
  std::vector<std::string> operands;

  auto operator<=>(const Instruction&) const = default;

  // Number of tree children following this instruction in preorder.
  int child_count() const;

  std::string str() const;
};

struct NormalizedBody {
  std::vector<Instruction> instructions;
  uint64_t fingerprint = 0;

  bool operator==(const NormalizedBody& other) const = default;

  static NormalizedBody from_instructions(std::vector<Instruction> instrs);
};

// Digest of an instruction list; the single fingerprint routine used for
// method bodies and static-field initializers alike.
uint64_t fingerprint_instructions(const std::vector<Instruction>& instrs);

// Initializer digests fold in the declared type, so retyping a field is a
// modification even when the initializer expression is unchanged.
uint64_t fingerprint_field(const std::string& declared_type,
                           const std::vector<Instruction>& initializer);

} // namespace catto
