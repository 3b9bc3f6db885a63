#pragma once

#include "catto/interpreter.hpp"
#include "catto/project_model.hpp"

#include <set>
#include <string>
#include <utility>
#include <vector>

namespace catto {

struct TestReport {
  std::vector<TestOutcome> outcomes; // sorted by test sig
  int passed = 0;
  int failed = 0;
  int errored = 0;
  long long wall_ms = 0;

  bool all_passed() const { return failed == 0 && errored == 0; }
  int total() const { return passed + failed + errored; }
};

// Methods whose body began evaluation while running one test, the test and
// its fixtures included. Always a subset of the static reachable set of the
// test's entry.
struct ExecutionTrace {
  MethodSig test;
  std::set<MethodSig> executed_methods;
};

struct RunOptions {
  int threads = 1;
  InterpreterOptions interpreter;
};

// Executes the given tests on isolated interpreters (fresh statics and fresh
// test-class instance per test). Tests may run in parallel; the report is
// sorted by test sig, so its content does not depend on the worker count.
// Throws CattoError when the snapshot is not executable or a requested test
// does not exist in it.
TestReport run_tests(const std::vector<MethodSig>& tests, const ProjectSnapshot& snapshot,
                     const RunOptions& options = {});

// Identical outcomes to run_tests, plus one trace per test (sorted by sig).
std::pair<TestReport, std::vector<ExecutionTrace>> run_tests_traced(
    const std::vector<MethodSig>& tests, const ProjectSnapshot& snapshot,
    const RunOptions& options = {});

// One status line per test plus a summary; failure traces indented under the
// failing test. Omits wall time unless with_timing (keeps output
// byte-comparable across runs and worker counts).
std::string render_report_text(const TestReport& report, bool with_timing = false);
std::string render_report_json(const TestReport& report);

} // namespace catto
