#include "catto/runner.hpp"

#include "catto/callgraph.hpp"
#include "catto/diagnostics.hpp"
#include "catto/parallel.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <sstream>

#include "json.hpp"

namespace catto {

namespace {

struct RunPlan {
  ExecutableProgram program;
  std::vector<TestEntry> entries; // one per requested test, sorted by sig

  RunPlan(const std::vector<MethodSig>& tests, const ProjectSnapshot& snapshot)
      : program(snapshot) {
    std::map<MethodSig, TestEntry> by_sig;
    for (auto& entry : synthesize_test_entries(snapshot)) by_sig[entry.test_method] = entry;

    std::vector<MethodSig> wanted = tests;
    std::sort(wanted.begin(), wanted.end());
    wanted.erase(std::unique(wanted.begin(), wanted.end()), wanted.end());
    for (const auto& sig : wanted) {
      auto it = by_sig.find(sig);
      if (it == by_sig.end())
        throw CattoError("test '" + sig.str() + "' does not exist in snapshot '" +
                         snapshot.version_label + "'");
      entries.push_back(it->second);
    }
  }
};

void tally(TestReport& report) {
  report.passed = report.failed = report.errored = 0;
  for (const auto& outcome : report.outcomes) {
    switch (outcome.status) {
      case TestStatus::Passed: ++report.passed; break;
      case TestStatus::Failed: ++report.failed; break;
      case TestStatus::Errored: ++report.errored; break;
    }
  }
}

} // namespace

TestReport run_tests(const std::vector<MethodSig>& tests, const ProjectSnapshot& snapshot,
                     const RunOptions& options) {
  auto started = std::chrono::steady_clock::now();
  RunPlan plan(tests, snapshot);

  TestReport report;
  report.outcomes.resize(plan.entries.size());
  parallel_for(plan.entries.size(), options.threads, [&](size_t i) {
    report.outcomes[i] = run_test_entry(plan.program, plan.entries[i], options.interpreter);
  });
  tally(report);
  report.wall_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                       std::chrono::steady_clock::now() - started)
                       .count();
  return report;
}

std::pair<TestReport, std::vector<ExecutionTrace>> run_tests_traced(
    const std::vector<MethodSig>& tests, const ProjectSnapshot& snapshot,
    const RunOptions& options) {
  auto started = std::chrono::steady_clock::now();
  RunPlan plan(tests, snapshot);

  TestReport report;
  report.outcomes.resize(plan.entries.size());
  std::vector<ExecutionTrace> traces(plan.entries.size());
  parallel_for(plan.entries.size(), options.threads, [&](size_t i) {
    traces[i].test = plan.entries[i].test_method;
    report.outcomes[i] = run_test_entry(plan.program, plan.entries[i], options.interpreter,
                                        &traces[i].executed_methods);
  });
  tally(report);
  report.wall_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                       std::chrono::steady_clock::now() - started)
                       .count();
  return {std::move(report), std::move(traces)};
}

std::string render_report_text(const TestReport& report, bool with_timing) {
  std::ostringstream out;
  for (const auto& outcome : report.outcomes) {
    switch (outcome.status) {
      case TestStatus::Passed: out << "[PASS] "; break;
      case TestStatus::Failed: out << "[FAIL] "; break;
      case TestStatus::Errored: out << "[ERROR] "; break;
    }
    out << outcome.test.str();
    if (outcome.failure_message) out << ": " << *outcome.failure_message;
    out << "\n";
    for (const auto& frame : outcome.failure_trace) out << "    at " << frame.str() << "\n";
  }
  out << report.total() << " tests: " << report.passed << " passed, " << report.failed
      << " failed, " << report.errored << " errored";
  if (with_timing) out << " (" << report.wall_ms << " ms)";
  out << "\n";
  return out.str();
}

std::string render_report_json(const TestReport& report) {
  nlohmann::json tests = nlohmann::json::array();
  for (const auto& outcome : report.outcomes) {
    nlohmann::json t{{"sig", outcome.test.str()},
                     {"status", test_status_name(outcome.status)}};
    if (outcome.failure_message) t["message"] = *outcome.failure_message;
    if (!outcome.failure_trace.empty()) {
      nlohmann::json trace = nlohmann::json::array();
      for (const auto& frame : outcome.failure_trace) trace.push_back(frame.str());
      t["trace"] = std::move(trace);
    }
    tests.push_back(std::move(t));
  }
  nlohmann::json doc{{"tests", std::move(tests)},
                     {"passed", report.passed},
                     {"failed", report.failed},
                     {"errored", report.errored},
                     {"wall_ms", report.wall_ms}};
  return doc.dump(2) + "\n";
}

} // namespace catto
