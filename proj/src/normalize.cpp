#include "catto/normalize.hpp"

#include "catto/diagnostics.hpp"
#include "catto/printer.hpp"

#include <algorithm>

namespace catto {

using namespace ast;

namespace {

class Lowering {
public:
  Lowering(const std::string& current_package) : package_(current_package) {}

  std::vector<Instruction> take() { return std::move(out_); }

  void declare(const std::string& name) { slots_.push_back(name); }

  void lower_block(const Block& block) {
    emit(Opcode::Block, {std::to_string(block.stmts.size())});
    for (const auto& stmt : block.stmts)
      lower_stmt(*stmt);
  }

  void lower_expr(const Expr& expr) {
    switch (expr.kind) {
    case ExprKind::IntLit:
      emit(Opcode::IntLit, {expr.text});
      break;
    case ExprKind::BoolLit:
      emit(Opcode::BoolLit, {expr.bool_value ? "true" : "false"});
      break;
    case ExprKind::StrLit:
      emit(Opcode::StrLit, {expr.text});
      break;
    case ExprKind::LocalRef:
      emit(Opcode::LocalRef, {std::to_string(slot_of(expr.name))});
      break;
    case ExprKind::StaticGet:
      emit(Opcode::StaticGet, {package_, expr.class_ref, expr.name});
      break;
    case ExprKind::FieldGet:
      emit(Opcode::FieldGet, {expr.name});
      lower_expr(*expr.base);
      break;
    case ExprKind::SelfCall:
      emit(Opcode::SelfCall, {expr.name, std::to_string(expr.args.size())});
      for (const auto& arg : expr.args)
        lower_expr(*arg);
      break;
    case ExprKind::MethodCall:
      emit(Opcode::MethodCall, {expr.name, std::to_string(expr.args.size())});
      lower_expr(*expr.base);
      for (const auto& arg : expr.args)
        lower_expr(*arg);
      break;
    case ExprKind::New: {
      std::string pkg = expr.type_ref.package.empty() ? package_ : expr.type_ref.package;
      emit(Opcode::New, {pkg, expr.type_ref.name, std::to_string(expr.args.size())});
      for (const auto& arg : expr.args)
        lower_expr(*arg);
      break;
    }
    case ExprKind::Binary:
      emit(Opcode::Binary, {binary_op_token(expr.binary_op)});
      lower_expr(*expr.lhs);
      lower_expr(*expr.rhs);
      break;
    case ExprKind::Unary:
      emit(Opcode::Unary, {unary_op_token(expr.unary_op)});
      lower_expr(*expr.lhs);
      break;
    }
  }

private:
  std::string package_;
  std::vector<std::string> slots_;
  std::vector<Instruction> out_;

  void emit(Opcode op, std::vector<std::string> operands) {
    out_.push_back({op, std::move(operands)});
  }

  int slot_of(const std::string& name) const {
    auto it = std::find(slots_.begin(), slots_.end(), name);
    if (it == slots_.end())
      throw CattoError("internal: reference to undeclared local '" + name + "'",
                       kExitInternal);
    return static_cast<int>(it - slots_.begin());
  }

  void lower_stmt(const Stmt& stmt) {
    switch (stmt.kind) {
    case StmtKind::Let: {
      std::string type =
          stmt.declared_type ? canonical_type_name(*stmt.declared_type, package_) : "_";
      declare(stmt.name);
      emit(Opcode::LetLocal, {std::to_string(slot_of(stmt.name)), type});
      lower_expr(*stmt.expr);
      break;
    }
    case StmtKind::AssignLocal:
      emit(Opcode::AssignLocal, {std::to_string(slot_of(stmt.name))});
      lower_expr(*stmt.expr);
      break;
    case StmtKind::AssignStatic:
      emit(Opcode::AssignStatic, {package_, stmt.class_ref, stmt.name});
      lower_expr(*stmt.expr);
      break;
    case StmtKind::ExprStmt:
      emit(Opcode::ExprStmt, {});
      lower_expr(*stmt.expr);
      break;
    case StmtKind::If:
      emit(Opcode::If, {stmt.else_body ? "1" : "0"});
      lower_expr(*stmt.expr);
      lower_block(*stmt.body);
      if (stmt.else_body)
        lower_block(*stmt.else_body);
      break;
    case StmtKind::While:
      emit(Opcode::While, {});
      lower_expr(*stmt.expr);
      lower_block(*stmt.body);
      break;
    case StmtKind::Return:
      emit(Opcode::Return, {stmt.expr ? "1" : "0"});
      if (stmt.expr)
        lower_expr(*stmt.expr);
      break;
    case StmtKind::Assert:
      emit(Opcode::Assert, {});
      lower_expr(*stmt.expr);
      break;
    case StmtKind::Block:
      lower_block(*stmt.body);
      break;
    }
  }
};

} // namespace

std::string canonical_type_name(const TypeRef& ref, const std::string& current_package) {
  if (ref.package.empty())
    return ref.is_builtin() ? ref.name : current_package + "." + ref.name;
  return ref.package + "." + ref.name;
}

NormalizedBody normalize_body(const Block& body,
                              const std::vector<std::string>& param_names,
                              const std::string& current_package) {
  Lowering lowering(current_package);
  for (const auto& name : param_names)
    lowering.declare(name);
  lowering.lower_block(body);
  return NormalizedBody::from_instructions(lowering.take());
}

std::vector<Instruction> normalize_initializer(const Expr* initializer,
                                               const std::string& current_package) {
  if (!initializer)
    return {};
  Lowering lowering(current_package);
  lowering.lower_expr(*initializer);
  return lowering.take();
}

} // namespace catto
