#include "catto/typing.hpp"

#include "catto/normalize.hpp"

#include <algorithm>

namespace catto {

using namespace ast;

std::string StaticType::str() const {
  switch (kind) {
  case Kind::Int: return "int";
  case Kind::Bool: return "bool";
  case Kind::String: return "string";
  case Kind::Void: return "void";
  case Kind::Class: return cls.str();
  case Kind::Unknown: return "?";
  }
  return "?";
}

StaticType type_from_canonical(const std::string& name, const SnapshotIndex& index) {
  if (name == "int")
    return StaticType::builtin(StaticType::Kind::Int);
  if (name == "bool")
    return StaticType::builtin(StaticType::Kind::Bool);
  if (name == "string")
    return StaticType::builtin(StaticType::Kind::String);
  if (name == "void")
    return StaticType::builtin(StaticType::Kind::Void);
  ClassKey key;
  size_t last_dot = name.rfind('.');
  if (last_dot == std::string::npos) {
    key.class_name = name;
  } else {
    key.package_name = name.substr(0, last_dot);
    key.class_name = name.substr(last_dot + 1);
  }
  return StaticType::of_class(key, index.find_class(key) == nullptr);
}

namespace {

class BodyChecker {
public:
  BodyChecker(const SnapshotIndex& index, ClassKey owner, std::string file)
      : index_(index), owner_(std::move(owner)), file_(std::move(file)) {}

  BodyAnalysis finish() {
    std::sort(out_.static_refs.begin(), out_.static_refs.end());
    out_.static_refs.erase(std::unique(out_.static_refs.begin(), out_.static_refs.end()),
                           out_.static_refs.end());
    return std::move(out_);
  }

  void declare(const std::string& name, StaticType type) {
    scope_.emplace_back(name, std::move(type));
  }

  void set_return_type(StaticType type) { return_type_ = std::move(type); }

  void check_block(const Block& block) {
    for (const auto& stmt : block.stmts)
      check_stmt(*stmt);
  }

  StaticType check_expr(const Expr& expr) {
    switch (expr.kind) {
    case ExprKind::IntLit:
      check_int_literal(expr);
      return StaticType::builtin(StaticType::Kind::Int);
    case ExprKind::BoolLit:
      return StaticType::builtin(StaticType::Kind::Bool);
    case ExprKind::StrLit:
      return StaticType::builtin(StaticType::Kind::String);
    case ExprKind::LocalRef:
      return local_type(expr);
    case ExprKind::StaticGet:
      return check_static_get(expr);
    case ExprKind::FieldGet:
      error(expr.line, "objects have no instance fields; use ClassName.field for "
                       "static access");
      check_expr(*expr.base);
      return StaticType::unknown();
    case ExprKind::SelfCall:
      return check_self_call(expr);
    case ExprKind::MethodCall:
      return check_method_call(expr);
    case ExprKind::New:
      return check_new(expr);
    case ExprKind::Binary:
      return check_binary(expr);
    case ExprKind::Unary:
      return check_unary(expr);
    }
    return StaticType::unknown();
  }

private:
  const SnapshotIndex& index_;
  ClassKey owner_;
  std::string file_;
  BodyAnalysis out_;
  std::vector<std::pair<std::string, StaticType>> scope_;
  StaticType return_type_ = StaticType::builtin(StaticType::Kind::Void);

  void error(int line, const std::string& msg) {
    out_.diagnostics.push_back({file_, line, 0, msg, Severity::Error});
  }

  // True when key's superclass chain leaves the snapshot, so a failed member
  // lookup may legitimately resolve outside it.
  bool ancestry_open(const ClassKey& key) const {
    const ClassDecl* cls = index_.find_class(key);
    if (!cls)
      return true;
    while (cls) {
      if (cls->superclass_external)
        return true;
      if (!cls->superclass)
        return false;
      cls = index_.find_class(*cls->superclass);
      if (!cls)
        return true;
    }
    return false;
  }

  bool assignable(const StaticType& from, const StaticType& to) const {
    using Kind = StaticType::Kind;
    if (from.kind == Kind::Unknown || to.kind == Kind::Unknown)
      return true;
    if (from.kind != to.kind)
      return false;
    if (from.kind != Kind::Class)
      return true;
    if (from.is_external || to.is_external)
      return true;
    if (from.cls == to.cls)
      return true;
    auto chain = index_.ancestry(from.cls);
    return std::find(chain.begin(), chain.end(), to.cls) != chain.end();
  }

  void check_int_literal(const Expr& expr) {
    try {
      (void)std::stoll(expr.text);
    } catch (const std::exception&) {
      error(expr.line, "integer literal out of range: " + expr.text);
    }
  }

  StaticType local_type(const Expr& expr) {
    for (auto it = scope_.rbegin(); it != scope_.rend(); ++it)
      if (it->first == expr.name)
        return it->second;
    error(expr.line, "unknown local '" + expr.name + "'");
    return StaticType::unknown();
  }

  StaticType resolve_static_field(int line, const std::string& class_name,
                                  const std::string& field_name) {
    ClassKey key{owner_.package_name, class_name};
    if (!index_.find_class(key)) {
      error(line, "unknown class '" + class_name + "' in static access");
      return StaticType::unknown();
    }
    const ClassKey* field_owner = nullptr;
    const FieldDecl* field = index_.resolve_field_up(key, field_name, &field_owner);
    if (!field) {
      error(line, "class '" + key.str() + "' has no static field '" + field_name + "'");
      return StaticType::unknown();
    }
    out_.static_refs.push_back(*field_owner);
    return type_from_canonical(field->declared_type, index_);
  }

  StaticType check_static_get(const Expr& expr) {
    return resolve_static_field(expr.line, expr.class_ref, expr.name);
  }

  void check_args(int line, const std::string& name, const MethodDecl& target,
                  const std::vector<ExprPtr>& args) {
    for (size_t i = 0; i < args.size(); ++i) {
      StaticType arg = check_expr(*args[i]);
      StaticType want = type_from_canonical(target.sig.param_types[i], index_);
      if (!assignable(arg, want))
        error(line, "argument " + std::to_string(i + 1) + " of '" + name +
                        "' expects " + want.str() + ", got " + arg.str());
    }
  }

  void check_args_untyped(const std::vector<ExprPtr>& args) {
    for (const auto& arg : args)
      check_expr(*arg);
  }

  StaticType check_self_call(const Expr& expr) {
    out_.calls.push_back(
        {CallSiteInfo::Kind::Self, owner_, expr.name, expr.args.size()});
    const MethodDecl* target = index_.resolve_up(owner_, expr.name, expr.args.size());
    if (!target) {
      if (!ancestry_open(owner_))
        error(expr.line, "unknown method '" + expr.name + "' taking " +
                             std::to_string(expr.args.size()) + " arguments");
      check_args_untyped(expr.args);
      return StaticType::unknown();
    }
    check_args(expr.line, expr.name, *target, expr.args);
    return type_from_canonical(target->sig.return_type, index_);
  }

  StaticType check_method_call(const Expr& expr) {
    StaticType base = check_expr(*expr.base);
    if (base.kind == StaticType::Kind::Unknown) {
      check_args_untyped(expr.args);
      return StaticType::unknown();
    }
    if (!base.is_class()) {
      error(expr.line, "type '" + base.str() + "' has no methods");
      check_args_untyped(expr.args);
      return StaticType::unknown();
    }
    out_.calls.push_back(
        {CallSiteInfo::Kind::Virtual, base.cls, expr.name, expr.args.size()});
    if (base.is_external) {
      check_args_untyped(expr.args);
      return StaticType::unknown();
    }
    const MethodDecl* target = index_.resolve_up(base.cls, expr.name, expr.args.size());
    if (!target) {
      if (!ancestry_open(base.cls))
        error(expr.line, "class '" + base.cls.str() + "' has no method '" + expr.name +
                             "' taking " + std::to_string(expr.args.size()) +
                             " arguments");
      check_args_untyped(expr.args);
      return StaticType::unknown();
    }
    check_args(expr.line, expr.name, *target, expr.args);
    return type_from_canonical(target->sig.return_type, index_);
  }

  StaticType check_new(const Expr& expr) {
    TypeRef ref = expr.type_ref;
    if (ref.package.empty() && ref.is_builtin()) {
      error(expr.line, "cannot construct builtin type '" + ref.name + "'");
      check_args_untyped(expr.args);
      return StaticType::unknown();
    }
    ClassKey key{ref.package.empty() ? owner_.package_name : ref.package, ref.name};
    out_.calls.push_back(
        {CallSiteInfo::Kind::Construct, key, kConstructorName, expr.args.size()});
    out_.static_refs.push_back(key);
    const ClassDecl* cls = index_.find_class(key);
    if (!cls) {
      check_args_untyped(expr.args);
      return StaticType::of_class(key, true);
    }
    const MethodDecl* ctor =
        cls->find_method_arity(kConstructorName, expr.args.size());
    if (!ctor) {
      if (!expr.args.empty() || cls->find_method_arity(kConstructorName, 0) ||
          has_any_constructor(*cls))
        error(expr.line, "class '" + key.str() + "' has no constructor taking " +
                             std::to_string(expr.args.size()) + " arguments");
      check_args_untyped(expr.args);
    } else {
      check_args(expr.line, "new " + key.str(), *ctor, expr.args);
    }
    return StaticType::of_class(key, false);
  }

  static bool has_any_constructor(const ClassDecl& cls) {
    for (const auto& method : cls.methods)
      if (method.kind == MethodKind::Constructor)
        return true;
    return false;
  }

  StaticType check_binary(const Expr& expr) {
    using Kind = StaticType::Kind;
    StaticType lhs = check_expr(*expr.lhs);
    StaticType rhs = check_expr(*expr.rhs);
    const char* token = binary_op_token(expr.binary_op);
    auto require = [&](const StaticType& got, Kind want) {
      if (got.kind != Kind::Unknown && got.kind != want)
        error(expr.line, std::string("operator '") + token + "' requires " +
                             StaticType::builtin(want).str() + " operands, got " +
                             got.str());
    };
    switch (expr.binary_op) {
    case BinaryOp::And:
    case BinaryOp::Or:
      require(lhs, Kind::Bool);
      require(rhs, Kind::Bool);
      return StaticType::builtin(Kind::Bool);
    case BinaryOp::Eq:
    case BinaryOp::Ne:
      if (lhs.kind != Kind::Unknown && rhs.kind != Kind::Unknown &&
          lhs.kind != rhs.kind)
        error(expr.line, std::string("operator '") + token +
                             "' requires operands of the same type, got " + lhs.str() +
                             " and " + rhs.str());
      if (lhs.kind == Kind::Void || rhs.kind == Kind::Void)
        error(expr.line, "void value used in comparison");
      return StaticType::builtin(Kind::Bool);
    case BinaryOp::Lt:
    case BinaryOp::Le:
    case BinaryOp::Gt:
    case BinaryOp::Ge:
      require(lhs, Kind::Int);
      require(rhs, Kind::Int);
      return StaticType::builtin(Kind::Bool);
    default:
      require(lhs, Kind::Int);
      require(rhs, Kind::Int);
      return StaticType::builtin(Kind::Int);
    }
  }

  StaticType check_unary(const Expr& expr) {
    using Kind = StaticType::Kind;
    StaticType operand = check_expr(*expr.lhs);
    Kind want = expr.unary_op == UnaryOp::Not ? Kind::Bool : Kind::Int;
    if (operand.kind != Kind::Unknown && operand.kind != want)
      error(expr.line, std::string("operator '") + unary_op_token(expr.unary_op) +
                           "' requires " + StaticType::builtin(want).str() +
                           " operand, got " + operand.str());
    return StaticType::builtin(want);
  }

  void check_stmt(const Stmt& stmt) {
    switch (stmt.kind) {
    case StmtKind::Let: {
      StaticType init = check_expr(*stmt.expr);
      StaticType declared = init;
      if (stmt.declared_type) {
        declared = type_from_canonical(
            canonical_type_name(*stmt.declared_type, owner_.package_name), index_);
        if (declared.kind == StaticType::Kind::Void) {
          error(stmt.line, "local '" + stmt.name + "' cannot have type void");
          declared = StaticType::unknown();
        } else if (!assignable(init, declared)) {
          error(stmt.line, "cannot initialize " + declared.str() + " local '" +
                               stmt.name + "' with " + init.str());
        }
      } else if (init.kind == StaticType::Kind::Void) {
        error(stmt.line, "cannot bind void value to '" + stmt.name + "'");
        declared = StaticType::unknown();
      }
      declare(stmt.name, declared);
      break;
    }
    case StmtKind::AssignLocal: {
      StaticType value = check_expr(*stmt.expr);
      StaticType target = StaticType::unknown();
      bool found = false;
      for (auto it = scope_.rbegin(); it != scope_.rend(); ++it)
        if (it->first == stmt.name) {
          target = it->second;
          found = true;
          break;
        }
      if (!found)
        error(stmt.line, "assignment to undeclared name '" + stmt.name + "'");
      else if (!assignable(value, target))
        error(stmt.line, "cannot assign " + value.str() + " to " + target.str() +
                             " local '" + stmt.name + "'");
      break;
    }
    case StmtKind::AssignStatic: {
      StaticType value = check_expr(*stmt.expr);
      StaticType target = resolve_static_field(stmt.line, stmt.class_ref, stmt.name);
      if (!assignable(value, target))
        error(stmt.line, "cannot assign " + value.str() + " to " + target.str() +
                             " field '" + stmt.class_ref + "." + stmt.name + "'");
      break;
    }
    case StmtKind::ExprStmt:
      check_expr(*stmt.expr);
      break;
    case StmtKind::If: {
      StaticType cond = check_expr(*stmt.expr);
      if (cond.kind != StaticType::Kind::Unknown &&
          cond.kind != StaticType::Kind::Bool)
        error(stmt.line, "if condition must be bool, got " + cond.str());
      check_block(*stmt.body);
      if (stmt.else_body)
        check_block(*stmt.else_body);
      break;
    }
    case StmtKind::While: {
      StaticType cond = check_expr(*stmt.expr);
      if (cond.kind != StaticType::Kind::Unknown &&
          cond.kind != StaticType::Kind::Bool)
        error(stmt.line, "while condition must be bool, got " + cond.str());
      check_block(*stmt.body);
      break;
    }
    case StmtKind::Return: {
      bool returns_void = return_type_.kind == StaticType::Kind::Void;
      if (stmt.expr) {
        StaticType value = check_expr(*stmt.expr);
        if (returns_void)
          error(stmt.line, "void method returns a value");
        else if (!assignable(value, return_type_))
          error(stmt.line,
                "return type mismatch: expected " + return_type_.str() + ", got " +
                    value.str());
      } else if (!returns_void) {
        error(stmt.line, "missing return value (method returns " +
                             return_type_.str() + ")");
      }
      break;
    }
    case StmtKind::Assert: {
      StaticType cond = check_expr(*stmt.expr);
      if (cond.kind != StaticType::Kind::Unknown &&
          cond.kind != StaticType::Kind::Bool)
        error(stmt.line, "assert condition must be bool, got " + cond.str());
      break;
    }
    case StmtKind::Block:
      check_block(*stmt.body);
      break;
    }
  }
};

} // namespace

BodyAnalysis analyze_body(const Block& body, const ClassKey& owner,
                          const std::vector<std::string>& param_names,
                          const std::vector<std::string>& param_types,
                          const std::optional<std::string>& return_type,
                          const SnapshotIndex& index, const std::string& file_path) {
  BodyChecker checker(index, owner, file_path);
  for (size_t i = 0; i < param_names.size(); ++i)
    checker.declare(param_names[i],
                    i < param_types.size() ? type_from_canonical(param_types[i], index)
                                           : StaticType::unknown());
  checker.set_return_type(return_type ? type_from_canonical(*return_type, index)
                                      : StaticType::builtin(StaticType::Kind::Void));
  checker.check_block(body);
  return checker.finish();
}

BodyAnalysis analyze_initializer(const Expr& initializer, const ClassKey& owner,
                                 const std::string& declared_type,
                                 const SnapshotIndex& index,
                                 const std::string& file_path) {
  BodyChecker checker(index, owner, file_path);
  StaticType want = type_from_canonical(declared_type, index);
  StaticType got = checker.check_expr(initializer);
  BodyAnalysis out = checker.finish();
  bool ok = want.kind == StaticType::Kind::Unknown ||
            got.kind == StaticType::Kind::Unknown;
  if (!ok) {
    if (want.kind != got.kind)
      ok = false;
    else if (want.kind != StaticType::Kind::Class)
      ok = true;
    else
      ok = want.is_external || got.is_external || want.cls == got.cls ||
           [&] {
             auto chain = index.ancestry(got.cls);
             return std::find(chain.begin(), chain.end(), want.cls) != chain.end();
           }();
  }
  if (!ok)
    out.diagnostics.push_back({file_path, initializer.line, 0,
                               "initializer type mismatch: field is " + want.str() +
                                   ", initializer is " + got.str(),
                               Severity::Error});
  return out;
}

} // namespace catto
