#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace catto::ast {

// Reference to a type or class as written in source: builtin name, bare
// class name (same package) or fully qualified "pkg.path.Name".
struct TypeRef {
  std::string package; // empty when unqualified
  std::string name;

  auto operator<=>(const TypeRef&) const = default;

  std::string str() const { return package.empty() ? name : package + "." + name; }
  bool is_builtin() const {
    return package.empty() &&
           (name == "int" || name == "bool" || name == "string" || name == "void");
  }
};

// ---------------------------------------------------------------------------
// Expressions

enum class ExprKind {
  IntLit,
  BoolLit,
  StrLit,
  LocalRef,   // bare name resolved to a parameter or local
  StaticGet,  // ClassName.field
  FieldGet,   // expr.field where expr is not a class reference
  SelfCall,   // name(args) on the current instance
  MethodCall, // expr.name(args)
  New,        // new Class(args)
  Binary,
  Unary,
};

enum class BinaryOp { Add, Sub, Mul, Div, Mod, Lt, Le, Gt, Ge, Eq, Ne, And, Or };
enum class UnaryOp { Not, Neg };

const char* binary_op_token(BinaryOp op);
const char* unary_op_token(UnaryOp op);
std::optional<BinaryOp> binary_op_from_token(const std::string& token);

struct Expr;
using ExprPtr = std::unique_ptr<Expr>;

struct Expr {
  ExprKind kind;
  int line = 0;

  // literals
  std::string text;  // IntLit: verbatim digits; StrLit: decoded value
  bool bool_value = false;

  // names
  std::string name;     // LocalRef, FieldGet/StaticGet field, call method name
  std::string class_ref; // StaticGet class (bare), unused elsewhere
  TypeRef type_ref;      // New: class reference

  ExprPtr base; // FieldGet/MethodCall receiver
  ExprPtr lhs;
  ExprPtr rhs;
  BinaryOp binary_op = BinaryOp::Add;
  UnaryOp unary_op = UnaryOp::Not;
  std::vector<ExprPtr> args;

  explicit Expr(ExprKind k) : kind(k) {}
};

// ---------------------------------------------------------------------------
// Statements

enum class StmtKind { Let, AssignLocal, AssignStatic, ExprStmt, If, While, Return, Assert, Block };

struct Stmt;
using StmtPtr = std::unique_ptr<Stmt>;

struct Block {
  std::vector<StmtPtr> stmts;
};

struct Stmt {
  StmtKind kind;
  int line = 0;

  std::string name;       // Let/AssignLocal: local name; AssignStatic: field
  std::string class_ref;  // AssignStatic class (bare)
  std::optional<TypeRef> declared_type; // Let annotation
  ExprPtr expr;           // initializer / value / condition / returned / asserted
  std::unique_ptr<Block> body;      // If then, While body, Block
  std::unique_ptr<Block> else_body; // If else

  explicit Stmt(StmtKind k) : kind(k) {}
};

// ---------------------------------------------------------------------------
// Declarations

enum class Annotation { None, Test, Before, After };

struct ParamAst {
  std::string name;
  TypeRef type;
};

struct MethodAst {
  Annotation annotation = Annotation::None;
  std::string name;
  std::vector<ParamAst> params;
  std::optional<TypeRef> return_type; // absent means void
  std::shared_ptr<Block> body;
  int line = 0;
};

struct FieldAst {
  std::string name;
  TypeRef type;
  std::shared_ptr<Expr> initializer; // may be null
  int line = 0;
};

struct ClassAst {
  std::string name;
  std::optional<TypeRef> extends;
  std::vector<FieldAst> fields;
  std::vector<MethodAst> methods;
  int line = 0;
};

struct SourceUnit {
  std::string file_path;
  std::string package_name;
  std::vector<ClassAst> classes;
};

} // namespace catto::ast
