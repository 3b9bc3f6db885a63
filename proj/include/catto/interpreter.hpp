#pragma once

#include "catto/ast.hpp"
#include "catto/callgraph.hpp"
#include "catto/project_model.hpp"

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace catto {

enum class TestStatus { Passed, Failed, Errored };

const char* test_status_name(TestStatus status);

// Failed means an assert evaluated false; Errored means a runtime fault
// (missing method, type mismatch, division by zero, stack or step limit).
struct TestOutcome {
  MethodSig test;
  TestStatus status = TestStatus::Passed;
  std::optional<std::string> failure_message;
  // Call stack at the failure point, innermost frame first.
  std::vector<MethodSig> failure_trace;
};

// Immutable executable view of a snapshot: every method body and static-field
// initializer decoded to a syntax tree, plus the hierarchy index. Built once,
// shared read-only across any number of concurrently running interpreters.
class ExecutableProgram {
public:
  // Throws CattoError when the snapshot has fingerprint-only bodies (facts
  // ingested): such snapshots are not executable.
  explicit ExecutableProgram(const ProjectSnapshot& snapshot);

  struct MethodCode {
    const MethodDecl* decl = nullptr;
    const ast::Block* body = nullptr;
    std::vector<std::string> param_names;
  };

  const ProjectSnapshot& snapshot() const { return *snapshot_; }
  const SnapshotIndex& index() const { return index_; }
  const MethodCode* method(const MethodSig& sig) const;
  // Decoded initializer expression, or null when the field has none.
  const ast::Expr* initializer(const ClassKey& cls, const std::string& field) const;

private:
  const ProjectSnapshot* snapshot_;
  SnapshotIndex index_;
  std::map<MethodSig, MethodCode> methods_;
  std::map<std::pair<ClassKey, std::string>, std::unique_ptr<ast::Expr>> initializers_;
  std::vector<std::unique_ptr<ast::Block>> decoded_; // owns bodies without an AST
};

struct InterpreterOptions {
  // Call depth above which execution faults (runaway recursion). The
  // evaluator recurses natively, roughly 2 KB of host stack per frame, so
  // this default stays well inside a typical 8 MB thread stack.
  int max_stack = 1000;
  // Node-evaluation budget per test; converts runaway loops into Errored.
  long long max_steps = 10000000;
};

// Executes one test entry on fresh state: statics are default-initialized and
// lazily run per class, a fresh instance of the test class is created (its
// zero-argument constructor runs if declared), prologue fixtures run
// superclass-first, then the body, then epilogue fixtures, which run even
// when an earlier phase failed. The first failure decides the outcome.
// When `trace` is non-null it receives every method whose body began
// evaluation.
TestOutcome run_test_entry(const ExecutableProgram& program, const TestEntry& entry,
                           const InterpreterOptions& options = {},
                           std::set<MethodSig>* trace = nullptr);

} // namespace catto
