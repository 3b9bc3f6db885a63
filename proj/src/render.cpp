#include "catto/render.hpp"

#include "catto/diagnostics.hpp"

namespace catto {

using namespace ast;

namespace {

[[noreturn]] void corrupt(const std::string& why) {
  throw CattoError("corrupt instruction stream: " + why, kExitInternal);
}

TypeRef type_from_canonical(const std::string& name) {
  TypeRef ref;
  size_t last_dot = name.rfind('.');
  if (last_dot == std::string::npos) {
    ref.name = name;
  } else {
    ref.package = name.substr(0, last_dot);
    ref.name = name.substr(last_dot + 1);
  }
  return ref;
}

class Decoder {
public:
  Decoder(const std::vector<Instruction>& instrs, int param_count,
          std::string expected_package)
      : instrs_(instrs), param_count_(param_count),
        package_(std::move(expected_package)) {}

  std::unique_ptr<Block> decode_block() {
    const Instruction& instr = next();
    if (instr.op != Opcode::Block)
      corrupt("expected block, got " + instr.str());
    int count = operand_int(instr, 0);
    auto block = std::make_unique<Block>();
    for (int i = 0; i < count; ++i)
      block->stmts.push_back(decode_stmt());
    return block;
  }

  ExprPtr decode_expr() {
    const Instruction& instr = next();
    switch (instr.op) {
    case Opcode::IntLit: {
      auto node = make_expr(ExprKind::IntLit);
      node->text = operand(instr, 0);
      return node;
    }
    case Opcode::BoolLit: {
      auto node = make_expr(ExprKind::BoolLit);
      node->bool_value = operand(instr, 0) == "true";
      return node;
    }
    case Opcode::StrLit: {
      auto node = make_expr(ExprKind::StrLit);
      node->text = operand(instr, 0);
      return node;
    }
    case Opcode::LocalRef: {
      auto node = make_expr(ExprKind::LocalRef);
      node->name = slot_name(operand_int(instr, 0));
      return node;
    }
    case Opcode::StaticGet: {
      check_package(instr, 0);
      auto node = make_expr(ExprKind::StaticGet);
      node->class_ref = operand(instr, 1);
      node->name = operand(instr, 2);
      return node;
    }
    case Opcode::FieldGet: {
      auto node = make_expr(ExprKind::FieldGet);
      node->name = operand(instr, 0);
      node->base = decode_expr();
      return node;
    }
    case Opcode::SelfCall: {
      auto node = make_expr(ExprKind::SelfCall);
      node->name = operand(instr, 0);
      decode_args(node->args, operand_int(instr, 1));
      return node;
    }
    case Opcode::MethodCall: {
      auto node = make_expr(ExprKind::MethodCall);
      node->name = operand(instr, 0);
      node->base = decode_expr();
      decode_args(node->args, operand_int(instr, 1));
      return node;
    }
    case Opcode::New: {
      auto node = make_expr(ExprKind::New);
      node->type_ref.package = operand(instr, 0);
      node->type_ref.name = operand(instr, 1);
      decode_args(node->args, operand_int(instr, 2));
      return node;
    }
    case Opcode::Binary: {
      auto node = make_expr(ExprKind::Binary);
      auto op = binary_op_from_token(operand(instr, 0));
      if (!op)
        corrupt("unknown binary operator '" + operand(instr, 0) + "'");
      node->binary_op = *op;
      node->lhs = decode_expr();
      node->rhs = decode_expr();
      return node;
    }
    case Opcode::Unary: {
      auto node = make_expr(ExprKind::Unary);
      node->unary_op = operand(instr, 0) == "!" ? UnaryOp::Not : UnaryOp::Neg;
      node->lhs = decode_expr();
      return node;
    }
    default:
      corrupt("expected expression, got " + instr.str());
    }
  }

  void expect_end() {
    if (pos_ != instrs_.size())
      corrupt("trailing instructions");
  }

private:
  const std::vector<Instruction>& instrs_;
  int param_count_;
  std::string package_;
  size_t pos_ = 0;

  const Instruction& next() {
    if (pos_ >= instrs_.size())
      corrupt("unexpected end of stream");
    return instrs_[pos_++];
  }

  static ExprPtr make_expr(ExprKind kind) { return std::make_unique<Expr>(kind); }

  static const std::string& operand(const Instruction& instr, size_t i) {
    if (i >= instr.operands.size())
      corrupt("missing operand in " + instr.str());
    return instr.operands[i];
  }

  static int operand_int(const Instruction& instr, size_t i) {
    try {
      return std::stoi(operand(instr, i));
    } catch (const std::exception&) {
      corrupt("non-numeric operand in " + instr.str());
    }
  }

  void check_package(const Instruction& instr, size_t i) const {
    if (operand(instr, i) != package_)
      corrupt("static reference to foreign package '" + operand(instr, i) + "'");
  }

  std::string slot_name(int slot) const {
    if (slot < 0)
      corrupt("negative slot");
    if (slot < param_count_)
      return render_param_name(slot);
    return "v" + std::to_string(slot - param_count_);
  }

  void decode_args(std::vector<ExprPtr>& out, int argc) {
    for (int i = 0; i < argc; ++i)
      out.push_back(decode_expr());
  }

  StmtPtr decode_stmt() {
    const Instruction& instr = next();
    switch (instr.op) {
    case Opcode::Block: {
      --pos_; // decode_block re-reads the header
      auto stmt = std::make_unique<Stmt>(StmtKind::Block);
      stmt->body = decode_block();
      return stmt;
    }
    case Opcode::LetLocal: {
      auto stmt = std::make_unique<Stmt>(StmtKind::Let);
      stmt->name = slot_name(operand_int(instr, 0));
      if (operand(instr, 1) != "_")
        stmt->declared_type = type_from_canonical(operand(instr, 1));
      stmt->expr = decode_expr();
      return stmt;
    }
    case Opcode::AssignLocal: {
      auto stmt = std::make_unique<Stmt>(StmtKind::AssignLocal);
      stmt->name = slot_name(operand_int(instr, 0));
      stmt->expr = decode_expr();
      return stmt;
    }
    case Opcode::AssignStatic: {
      check_package(instr, 0);
      auto stmt = std::make_unique<Stmt>(StmtKind::AssignStatic);
      stmt->class_ref = operand(instr, 1);
      stmt->name = operand(instr, 2);
      stmt->expr = decode_expr();
      return stmt;
    }
    case Opcode::ExprStmt: {
      auto stmt = std::make_unique<Stmt>(StmtKind::ExprStmt);
      stmt->expr = decode_expr();
      return stmt;
    }
    case Opcode::Return: {
      auto stmt = std::make_unique<Stmt>(StmtKind::Return);
      if (operand(instr, 0) == "1")
        stmt->expr = decode_expr();
      return stmt;
    }
    case Opcode::If: {
      auto stmt = std::make_unique<Stmt>(StmtKind::If);
      bool has_else = operand(instr, 0) == "1";
      stmt->expr = decode_expr();
      stmt->body = decode_block();
      if (has_else)
        stmt->else_body = decode_block();
      return stmt;
    }
    case Opcode::While: {
      auto stmt = std::make_unique<Stmt>(StmtKind::While);
      stmt->expr = decode_expr();
      stmt->body = decode_block();
      return stmt;
    }
    case Opcode::Assert: {
      auto stmt = std::make_unique<Stmt>(StmtKind::Assert);
      stmt->expr = decode_expr();
      return stmt;
    }
    default:
      corrupt("expected statement, got " + instr.str());
    }
  }
};

} // namespace

std::string render_param_name(int index) { return "p" + std::to_string(index); }

std::unique_ptr<Block> decode_body(const std::vector<Instruction>& instrs,
                                   int param_count,
                                   const std::string& expected_package) {
  Decoder decoder(instrs, param_count, expected_package);
  auto block = decoder.decode_block();
  decoder.expect_end();
  return block;
}

std::unique_ptr<Expr> decode_initializer(const std::vector<Instruction>& instrs,
                                         const std::string& expected_package) {
  if (instrs.empty())
    return nullptr;
  Decoder decoder(instrs, 0, expected_package);
  auto expr = decoder.decode_expr();
  decoder.expect_end();
  return expr;
}

} // namespace catto
