#include "catto/printer.hpp"

#include <sstream>

namespace catto {
namespace ast {

const char* binary_op_token(BinaryOp op) {
  switch (op) {
  case BinaryOp::Add: return "+";
  case BinaryOp::Sub: return "-";
  case BinaryOp::Mul: return "*";
  case BinaryOp::Div: return "/";
  case BinaryOp::Mod: return "%";
  case BinaryOp::Lt: return "<";
  case BinaryOp::Le: return "<=";
  case BinaryOp::Gt: return ">";
  case BinaryOp::Ge: return ">=";
  case BinaryOp::Eq: return "==";
  case BinaryOp::Ne: return "!=";
  case BinaryOp::And: return "&&";
  case BinaryOp::Or: return "||";
  }
  return "?";
}

const char* unary_op_token(UnaryOp op) {
  return op == UnaryOp::Not ? "!" : "-";
}

std::optional<BinaryOp> binary_op_from_token(const std::string& token) {
  for (BinaryOp op : {BinaryOp::Add, BinaryOp::Sub, BinaryOp::Mul, BinaryOp::Div,
                      BinaryOp::Mod, BinaryOp::Lt, BinaryOp::Le, BinaryOp::Gt,
                      BinaryOp::Ge, BinaryOp::Eq, BinaryOp::Ne, BinaryOp::And,
                      BinaryOp::Or})
    if (token == binary_op_token(op))
      return op;
  return std::nullopt;
}

} // namespace ast

using namespace ast;

namespace {

int binary_precedence(BinaryOp op) {
  switch (op) {
  case BinaryOp::Or: return 1;
  case BinaryOp::And: return 2;
  case BinaryOp::Eq:
  case BinaryOp::Ne: return 3;
  case BinaryOp::Lt:
  case BinaryOp::Le:
  case BinaryOp::Gt:
  case BinaryOp::Ge: return 4;
  case BinaryOp::Add:
  case BinaryOp::Sub: return 5;
  case BinaryOp::Mul:
  case BinaryOp::Div:
  case BinaryOp::Mod: return 6;
  }
  return 0;
}

constexpr int kUnaryPrecedence = 7;
constexpr int kPostfixPrecedence = 8;

int expr_precedence(const Expr& expr) {
  switch (expr.kind) {
  case ExprKind::Binary: return binary_precedence(expr.binary_op);
  case ExprKind::Unary: return kUnaryPrecedence;
  case ExprKind::FieldGet:
  case ExprKind::MethodCall: return kPostfixPrecedence;
  default: return 9; // atoms never need parens
  }
}

void write_expr(std::ostringstream& out, const Expr& expr, int min_precedence);

void write_child(std::ostringstream& out, const Expr& child, int min_precedence) {
  bool parens = expr_precedence(child) < min_precedence;
  if (parens)
    out << '(';
  write_expr(out, child, 0);
  if (parens)
    out << ')';
}

void write_args(std::ostringstream& out, const std::vector<ExprPtr>& args) {
  out << '(';
  for (size_t i = 0; i < args.size(); ++i) {
    if (i)
      out << ", ";
    write_expr(out, *args[i], 0);
  }
  out << ')';
}

void write_expr(std::ostringstream& out, const Expr& expr, int min_precedence) {
  bool parens = expr_precedence(expr) < min_precedence;
  if (parens)
    out << '(';
  switch (expr.kind) {
  case ExprKind::IntLit:
    out << expr.text;
    break;
  case ExprKind::BoolLit:
    out << (expr.bool_value ? "true" : "false");
    break;
  case ExprKind::StrLit:
    out << quote_string(expr.text);
    break;
  case ExprKind::LocalRef:
    out << expr.name;
    break;
  case ExprKind::StaticGet:
    out << expr.class_ref << '.' << expr.name;
    break;
  case ExprKind::FieldGet:
    write_child(out, *expr.base, kPostfixPrecedence);
    out << '.' << expr.name;
    break;
  case ExprKind::SelfCall:
    out << expr.name;
    write_args(out, expr.args);
    break;
  case ExprKind::MethodCall:
    write_child(out, *expr.base, kPostfixPrecedence);
    out << '.' << expr.name;
    write_args(out, expr.args);
    break;
  case ExprKind::New:
    out << "new " << expr.type_ref.str();
    write_args(out, expr.args);
    break;
  case ExprKind::Binary: {
    int prec = binary_precedence(expr.binary_op);
    // left-associative: left child may sit at the same level, right must bind tighter
    write_child(out, *expr.lhs, prec);
    out << ' ' << binary_op_token(expr.binary_op) << ' ';
    write_child(out, *expr.rhs, prec + 1);
    break;
  }
  case ExprKind::Unary:
    out << unary_op_token(expr.unary_op);
    write_child(out, *expr.lhs, kUnaryPrecedence);
    break;
  }
  if (parens)
    out << ')';
}

void write_indent(std::ostringstream& out, int indent) {
  for (int i = 0; i < indent; ++i)
    out << "    ";
}

void write_block(std::ostringstream& out, const Block& block, int indent);

void write_stmt(std::ostringstream& out, const Stmt& stmt, int indent) {
  write_indent(out, indent);
  switch (stmt.kind) {
  case StmtKind::Let:
    out << "let " << stmt.name;
    if (stmt.declared_type)
      out << ": " << stmt.declared_type->str();
    out << " = ";
    write_expr(out, *stmt.expr, 0);
    out << ";\n";
    break;
  case StmtKind::AssignLocal:
    out << stmt.name << " = ";
    write_expr(out, *stmt.expr, 0);
    out << ";\n";
    break;
  case StmtKind::AssignStatic:
    out << stmt.class_ref << '.' << stmt.name << " = ";
    write_expr(out, *stmt.expr, 0);
    out << ";\n";
    break;
  case StmtKind::ExprStmt:
    write_expr(out, *stmt.expr, 0);
    out << ";\n";
    break;
  case StmtKind::If:
    out << "if (";
    write_expr(out, *stmt.expr, 0);
    out << ") ";
    write_block(out, *stmt.body, indent);
    if (stmt.else_body) {
      out << " else ";
      write_block(out, *stmt.else_body, indent);
    }
    out << '\n';
    break;
  case StmtKind::While:
    out << "while (";
    write_expr(out, *stmt.expr, 0);
    out << ") ";
    write_block(out, *stmt.body, indent);
    out << '\n';
    break;
  case StmtKind::Return:
    out << "return";
    if (stmt.expr) {
      out << ' ';
      write_expr(out, *stmt.expr, 0);
    }
    out << ";\n";
    break;
  case StmtKind::Assert:
    out << "assert ";
    write_expr(out, *stmt.expr, 0);
    out << ";\n";
    break;
  case StmtKind::Block:
    write_block(out, *stmt.body, indent);
    out << '\n';
    break;
  }
}

void write_block(std::ostringstream& out, const Block& block, int indent) {
  out << "{\n";
  for (const auto& stmt : block.stmts)
    write_stmt(out, *stmt, indent + 1);
  write_indent(out, indent);
  out << '}';
}

void write_method(std::ostringstream& out, const MethodAst& method, int indent) {
  write_indent(out, indent);
  switch (method.annotation) {
  case Annotation::Test: out << "@test\n"; write_indent(out, indent); break;
  case Annotation::Before: out << "@before\n"; write_indent(out, indent); break;
  case Annotation::After: out << "@after\n"; write_indent(out, indent); break;
  case Annotation::None: break;
  }
  out << "fn " << method.name << '(';
  for (size_t i = 0; i < method.params.size(); ++i) {
    if (i)
      out << ", ";
    out << method.params[i].name << ": " << method.params[i].type.str();
  }
  out << ')';
  if (method.return_type)
    out << ": " << method.return_type->str();
  out << ' ';
  write_block(out, *method.body, indent);
  out << '\n';
}

void write_class(std::ostringstream& out, const ClassAst& cls) {
  out << "class " << cls.name;
  if (cls.extends)
    out << " extends " << cls.extends->str();
  out << " {\n";
  bool first = true;
  for (const auto& field : cls.fields) {
    write_indent(out, 1);
    out << "static let " << field.name << ": " << field.type.str();
    if (field.initializer) {
      out << " = ";
      write_expr(out, *field.initializer, 0);
    }
    out << ";\n";
    first = false;
  }
  for (const auto& method : cls.methods) {
    if (!first)
      out << '\n';
    write_method(out, method, 1);
    first = false;
  }
  out << "}\n";
}

} // namespace

std::string quote_string(const std::string& value) {
  std::string out = "\"";
  for (char c : value) {
    switch (c) {
    case '\n': out += "\\n"; break;
    case '\t': out += "\\t"; break;
    case '\\': out += "\\\\"; break;
    case '"': out += "\\\""; break;
    default: out += c;
    }
  }
  out += '"';
  return out;
}

std::string print_expr(const Expr& expr) {
  std::ostringstream out;
  write_expr(out, expr, 0);
  return out.str();
}

std::string print_block(const Block& block, int indent) {
  std::ostringstream out;
  write_block(out, block, indent);
  return out.str();
}

std::string print_class(const ClassAst& cls) {
  std::ostringstream out;
  write_class(out, cls);
  return out.str();
}

std::string print_source_unit(const SourceUnit& unit) {
  std::ostringstream out;
  out << "package " << unit.package_name << ";\n";
  for (const auto& cls : unit.classes) {
    out << '\n';
    write_class(out, cls);
  }
  return out.str();
}

} // namespace catto
