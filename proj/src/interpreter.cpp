#include "catto/interpreter.hpp"

#include "catto/diagnostics.hpp"
#include "catto/render.hpp"

#include <algorithm>
#include <cstdint>
#include <sstream>
#include <variant>

namespace catto {

const char* test_status_name(TestStatus status) {
  switch (status) {
    case TestStatus::Passed: return "passed";
    case TestStatus::Failed: return "failed";
    case TestStatus::Errored: return "errored";
  }
  return "?";
}

ExecutableProgram::ExecutableProgram(const ProjectSnapshot& snapshot)
    : snapshot_(&snapshot), index_(snapshot) {
  if (!snapshot.has_bodies())
    throw CattoError("snapshot '" + snapshot.version_label +
                     "' has fingerprint-only method bodies and is not executable");
  for (const auto& [key, decl] : snapshot.classes) {
    for (const auto& method : decl.methods) {
      MethodCode code;
      code.decl = &method;
      if (method.body_ast) {
        code.body = method.body_ast.get();
        code.param_names = method.param_names;
      } else {
        auto block = decode_body(method.body.instructions,
                                 static_cast<int>(method.sig.param_types.size()),
                                 key.package_name);
        code.body = block.get();
        decoded_.push_back(std::move(block));
        for (size_t i = 0; i < method.sig.param_types.size(); ++i)
          code.param_names.push_back(render_param_name(static_cast<int>(i)));
      }
      methods_.emplace(method.sig, std::move(code));
    }
    for (const auto& field : decl.static_fields) {
      if (field.init_instrs.empty()) continue;
      initializers_.emplace(std::make_pair(key, field.name),
                            decode_initializer(field.init_instrs, key.package_name));
    }
  }
}

const ExecutableProgram::MethodCode* ExecutableProgram::method(const MethodSig& sig) const {
  auto it = methods_.find(sig);
  return it == methods_.end() ? nullptr : &it->second;
}

const ast::Expr* ExecutableProgram::initializer(const ClassKey& cls,
                                                const std::string& field) const {
  auto it = initializers_.find(std::make_pair(cls, field));
  return it == initializers_.end() ? nullptr : it->second.get();
}

namespace {

using ast::Expr;
using ast::ExprKind;
using ast::Stmt;
using ast::StmtKind;

// id 0 is the null reference (default value of class-typed statics).
struct ObjectRef {
  ClassKey cls;
  int64_t id = 0;
};

using Value = std::variant<std::monostate, int64_t, bool, std::string, ObjectRef>;

struct FaultSignal {
  std::string message;
};
struct AssertSignal {
  std::string message;
};

struct Frame {
  Value self;
  const std::string* package = nullptr; // package of the executing code
  std::map<std::string, Value> locals;
};

std::string kind_of(const Value& v) {
  switch (v.index()) {
    case 0: return "void";
    case 1: return "int";
    case 2: return "bool";
    case 3: return "string";
    default: return "object";
  }
}

class Interp {
 public:
  Interp(const ExecutableProgram& prog, const InterpreterOptions& opts,
         std::set<MethodSig>* trace)
      : prog_(prog), opts_(opts), trace_(trace) {}

  TestOutcome run(const TestEntry& entry) {
    TestOutcome out;
    out.test = entry.test_method;
    bool failed = false;

    auto attempt = [&](const auto& fn) {
      if (failed) return;
      failed = !guard(out, fn);
    };

    const ClassKey test_cls = entry.test_method.class_key();
    Value instance;
    attempt([&] {
      ensure_statics(test_cls, 0);
      instance = construct_test_instance(test_cls);
    });
    for (const auto& sig : entry.prologue)
      attempt([&] { invoke_exact(sig, instance); });
    attempt([&] { invoke_exact(entry.test_method, instance); });
    // The epilogue always runs; only the first failure is reported.
    for (const auto& sig : entry.epilogue) {
      bool ok = guard(out, [&] { invoke_exact(sig, instance); });
      failed = failed || !ok;
    }
    return out;
  }

 private:
  template <typename Fn>
  bool guard(TestOutcome& out, const Fn& fn) {
    try {
      fn();
      return true;
    } catch (const AssertSignal& sig) {
      record(out, TestStatus::Failed, sig.message);
      return false;
    } catch (const FaultSignal& sig) {
      record(out, TestStatus::Errored, sig.message);
      return false;
    }
  }

  void record(TestOutcome& out, TestStatus status, const std::string& message) {
    if (out.status != TestStatus::Passed) {
      stack_.clear();
      return;
    }
    out.status = status;
    out.failure_message = message;
    out.failure_trace.assign(stack_.rbegin(), stack_.rend()); // innermost first
    stack_.clear();
  }

  [[noreturn]] void fault(int line, const std::string& msg) {
    std::ostringstream os;
    os << msg;
    if (line > 0) os << " (line " << line << ")";
    throw FaultSignal{os.str()};
  }

  void step(int line) {
    if (++steps_ > opts_.max_steps)
      fault(line, "execution step limit exceeded; possible infinite loop");
  }

  Value construct_test_instance(const ClassKey& cls) {
    Value obj = ObjectRef{cls, next_id_++};
    const ClassDecl* decl = prog_.snapshot().find_class(cls);
    if (!decl) fault(0, "unknown class '" + cls.str() + "'");
    if (const MethodDecl* ctor = decl->find_method_arity(kConstructorName, 0))
      invoke(ctor->sig, obj, {});
    return obj;
  }

  // Runs sig exactly as resolved by the test entry (no re-dispatch).
  void invoke_exact(const MethodSig& sig, const Value& self) { invoke(sig, self, {}); }

  Value invoke(const MethodSig& sig, const Value& self, std::vector<Value> args) {
    if (static_cast<int>(stack_.size()) >= opts_.max_stack)
      throw FaultSignal{"call stack depth limit exceeded"};
    const ExecutableProgram::MethodCode* code = prog_.method(sig);
    if (!code) throw FaultSignal{"no executable body for '" + sig.str() + "'"};
    ensure_statics(sig.class_key(), 0);
    stack_.push_back(sig);
    if (trace_) trace_->insert(sig);

    if (args.size() != code->param_names.size())
      throw FaultSignal{"arity mismatch calling '" + sig.str() + "'"};
    Frame frame;
    frame.self = self;
    frame.package = &code->decl->sig.package_name;
    for (size_t i = 0; i < args.size(); ++i)
      frame.locals.emplace(code->param_names[i], std::move(args[i]));

    Flow flow = exec_block(*code->body, frame);
    stack_.pop_back();
    return flow.returned ? std::move(flow.value) : Value{};
  }

  // Default-initializes, then runs initializers. Java-like laziness: entering
  // a method of the class, constructing it, or touching one of its fields
  // triggers this. No superclass chaining; inherited fields are triggered at
  // the access site through their owner class.
  void ensure_statics(const ClassKey& cls, int line) {
    auto [it, inserted] = init_state_.emplace(cls, State::Running);
    if (!inserted) return; // running (cycle: defaults visible) or done
    const ClassDecl* decl = prog_.snapshot().find_class(cls);
    if (!decl) {
      init_state_.erase(cls);
      fault(line, "unknown class '" + cls.str() + "'");
    }
    for (const auto& field : decl->static_fields)
      statics_[{cls, field.name}] = default_value(field.declared_type);
    for (const auto& field : decl->static_fields) {
      if (const Expr* init = prog_.initializer(cls, field.name)) {
        Frame frame;
        frame.package = &decl->key.package_name;
        statics_[{cls, field.name}] = eval(*init, frame);
      }
    }
    it->second = State::Done;
  }

  Value default_value(const std::string& declared_type) {
    if (declared_type == "int") return Value{int64_t{0}};
    if (declared_type == "bool") return Value{false};
    if (declared_type == "string") return Value{std::string()};
    return Value{ObjectRef{}}; // null reference
  }

  // Owner class of `cls_name.field` as seen from frame's package.
  const ClassKey& static_owner(const Frame& frame, const std::string& cls_name,
                               const std::string& field, int line) {
    ClassKey key{*frame.package, cls_name};
    const ClassKey* owner = nullptr;
    const FieldDecl* decl = prog_.index().resolve_field_up(key, field, &owner);
    if (!decl) fault(line, "unknown static field '" + key.str() + "." + field + "'");
    return *owner;
  }

  struct Flow {
    bool returned = false;
    Value value;
  };

  Flow exec_block(const ast::Block& block, Frame& frame) {
    for (const auto& stmt : block.stmts) {
      Flow flow = exec_stmt(*stmt, frame);
      if (flow.returned) return flow;
    }
    return {};
  }

  Flow exec_stmt(const Stmt& stmt, Frame& frame) {
    step(stmt.line);
    switch (stmt.kind) {
      case StmtKind::Let:
      case StmtKind::AssignLocal:
        frame.locals[stmt.name] = eval(*stmt.expr, frame);
        return {};
      case StmtKind::AssignStatic: {
        Value v = eval(*stmt.expr, frame);
        const ClassKey& owner = static_owner(frame, stmt.class_ref, stmt.name, stmt.line);
        ensure_statics(owner, stmt.line);
        statics_[{owner, stmt.name}] = std::move(v);
        return {};
      }
      case StmtKind::ExprStmt:
        eval(*stmt.expr, frame);
        return {};
      case StmtKind::If:
        if (as_bool(eval(*stmt.expr, frame), stmt.line))
          return exec_block(*stmt.body, frame);
        if (stmt.else_body) return exec_block(*stmt.else_body, frame);
        return {};
      case StmtKind::While:
        while (true) {
          step(stmt.line);
          if (!as_bool(eval(*stmt.expr, frame), stmt.line)) return {};
          Flow flow = exec_block(*stmt.body, frame);
          if (flow.returned) return flow;
        }
      case StmtKind::Return: {
        Flow flow;
        flow.returned = true;
        if (stmt.expr) flow.value = eval(*stmt.expr, frame);
        return flow;
      }
      case StmtKind::Assert:
        if (!as_bool(eval(*stmt.expr, frame), stmt.line)) {
          std::ostringstream os;
          os << "assert failed (line " << stmt.line << ")";
          throw AssertSignal{os.str()};
        }
        return {};
      case StmtKind::Block:
        return exec_block(*stmt.body, frame);
    }
    return {};
  }

  Value eval(const Expr& expr, Frame& frame) {
    step(expr.line);
    switch (expr.kind) {
      case ExprKind::IntLit:
        return Value{static_cast<int64_t>(std::stoll(expr.text))};
      case ExprKind::BoolLit:
        return Value{expr.bool_value};
      case ExprKind::StrLit:
        return Value{expr.text};
      case ExprKind::LocalRef: {
        auto it = frame.locals.find(expr.name);
        if (it == frame.locals.end())
          fault(expr.line, "unbound name '" + expr.name + "'");
        return it->second;
      }
      case ExprKind::StaticGet: {
        const ClassKey& owner = static_owner(frame, expr.class_ref, expr.name, expr.line);
        ensure_statics(owner, expr.line);
        return statics_.at({owner, expr.name});
      }
      case ExprKind::FieldGet:
        fault(expr.line, "objects have no instance fields");
      case ExprKind::SelfCall: {
        const ObjectRef& self = as_object(frame.self, expr.line, "self");
        return dispatch(self, expr.name, expr.args, frame, expr.line);
      }
      case ExprKind::MethodCall: {
        Value base = eval(*expr.base, frame);
        const ObjectRef& receiver = as_object(base, expr.line, "receiver");
        return dispatch(receiver, expr.name, expr.args, frame, expr.line);
      }
      case ExprKind::New: {
        ClassKey key{expr.type_ref.package.empty() ? *frame.package : expr.type_ref.package,
                     expr.type_ref.name};
        const ClassDecl* decl = prog_.snapshot().find_class(key);
        if (!decl) fault(expr.line, "unknown class '" + key.str() + "'");
        ensure_statics(key, expr.line);
        Value obj = ObjectRef{key, next_id_++};
        const MethodDecl* ctor = decl->find_method_arity(kConstructorName, expr.args.size());
        if (ctor) {
          invoke(ctor->sig, obj, eval_args(expr.args, frame));
        } else if (!expr.args.empty()) {
          fault(expr.line, "class '" + key.str() + "' has no constructor taking " +
                               std::to_string(expr.args.size()) + " arguments");
        }
        return obj;
      }
      case ExprKind::Binary:
        return eval_binary(expr, frame);
      case ExprKind::Unary: {
        Value v = eval(*expr.lhs, frame);
        if (expr.unary_op == ast::UnaryOp::Not) return Value{!as_bool(v, expr.line)};
        return Value{static_cast<int64_t>(
            -static_cast<uint64_t>(as_int(v, expr.line)))};
      }
    }
    fault(expr.line, "unevaluable expression");
  }

  std::vector<Value> eval_args(const std::vector<ast::ExprPtr>& args, Frame& frame) {
    std::vector<Value> out;
    out.reserve(args.size());
    for (const auto& a : args) out.push_back(eval(*a, frame));
    return out;
  }

  Value dispatch(const ObjectRef& receiver, const std::string& name,
                 const std::vector<ast::ExprPtr>& args, Frame& frame, int line) {
    if (receiver.id == 0) fault(line, "method call on null reference");
    const MethodDecl* target = prog_.index().resolve_up(receiver.cls, name, args.size());
    if (!target)
      fault(line, "class '" + receiver.cls.str() + "' has no method '" + name + "' taking " +
                      std::to_string(args.size()) + " arguments");
    return invoke(target->sig, Value{receiver}, eval_args(args, frame));
  }

  Value eval_binary(const Expr& expr, Frame& frame) {
    using ast::BinaryOp;
    const int line = expr.line;
    if (expr.binary_op == BinaryOp::And || expr.binary_op == BinaryOp::Or) {
      bool l = as_bool(eval(*expr.lhs, frame), line);
      if (expr.binary_op == BinaryOp::And && !l) return Value{false};
      if (expr.binary_op == BinaryOp::Or && l) return Value{true};
      return Value{as_bool(eval(*expr.rhs, frame), line)};
    }
    Value lv = eval(*expr.lhs, frame);
    Value rv = eval(*expr.rhs, frame);
    switch (expr.binary_op) {
      case BinaryOp::Eq:
        return Value{values_equal(lv, rv, line)};
      case BinaryOp::Ne:
        return Value{!values_equal(lv, rv, line)};
      default:
        break;
    }
    int64_t l = as_int(lv, line);
    int64_t r = as_int(rv, line);
    // Arithmetic wraps in two's complement; division truncates toward zero.
    uint64_t ul = static_cast<uint64_t>(l);
    uint64_t ur = static_cast<uint64_t>(r);
    switch (expr.binary_op) {
      case BinaryOp::Add: return Value{static_cast<int64_t>(ul + ur)};
      case BinaryOp::Sub: return Value{static_cast<int64_t>(ul - ur)};
      case BinaryOp::Mul: return Value{static_cast<int64_t>(ul * ur)};
      case BinaryOp::Div:
        if (r == 0) fault(line, "division by zero");
        if (l == INT64_MIN && r == -1) return Value{INT64_MIN};
        return Value{l / r};
      case BinaryOp::Mod:
        if (r == 0) fault(line, "division by zero");
        if (l == INT64_MIN && r == -1) return Value{int64_t{0}};
        return Value{l % r};
      case BinaryOp::Lt: return Value{l < r};
      case BinaryOp::Le: return Value{l <= r};
      case BinaryOp::Gt: return Value{l > r};
      case BinaryOp::Ge: return Value{l >= r};
      default:
        fault(line, "unevaluable operator");
    }
  }

  bool values_equal(const Value& l, const Value& r, int line) {
    if (l.index() != r.index())
      fault(line, "cannot compare " + kind_of(l) + " with " + kind_of(r));
    if (std::holds_alternative<int64_t>(l))
      return std::get<int64_t>(l) == std::get<int64_t>(r);
    if (std::holds_alternative<bool>(l)) return std::get<bool>(l) == std::get<bool>(r);
    if (std::holds_alternative<std::string>(l))
      return std::get<std::string>(l) == std::get<std::string>(r);
    if (std::holds_alternative<ObjectRef>(l))
      return std::get<ObjectRef>(l).id == std::get<ObjectRef>(r).id; // identity
    fault(line, "cannot compare void values");
  }

  bool as_bool(const Value& v, int line) {
    if (!std::holds_alternative<bool>(v))
      fault(line, "expected bool, got " + kind_of(v));
    return std::get<bool>(v);
  }

  int64_t as_int(const Value& v, int line) {
    if (!std::holds_alternative<int64_t>(v))
      fault(line, "expected int, got " + kind_of(v));
    return std::get<int64_t>(v);
  }

  const ObjectRef& as_object(const Value& v, int line, const char* what) {
    if (!std::holds_alternative<ObjectRef>(v))
      fault(line, std::string("expected an object as ") + what + ", got " + kind_of(v));
    const ObjectRef& ref = std::get<ObjectRef>(v);
    if (ref.id == 0) fault(line, std::string("null ") + what);
    return ref;
  }

  enum class State { Running, Done };

  const ExecutableProgram& prog_;
  InterpreterOptions opts_;
  std::set<MethodSig>* trace_;
  std::map<std::pair<ClassKey, std::string>, Value> statics_;
  std::map<ClassKey, State> init_state_;
  std::vector<MethodSig> stack_;
  long long steps_ = 0;
  int64_t next_id_ = 1;
};

} // namespace

TestOutcome run_test_entry(const ExecutableProgram& program, const TestEntry& entry,
                           const InterpreterOptions& options, std::set<MethodSig>* trace) {
  Interp interp(program, options, trace);
  return interp.run(entry);
}

} // namespace catto
