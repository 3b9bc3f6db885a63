#include "doctest.h"

#include "catto/callgraph.hpp"
#include "catto/interpreter.hpp"
#include "catto/runner.hpp"

#include "test_util.hpp"

using namespace catto;
using namespace catto::testutil;

namespace {

const TestEntry& entry_for(const std::vector<TestEntry>& entries,
                           const std::string& name) {
  for (const auto& e : entries)
    if (e.test_method.method_name == name) return e;
  throw std::runtime_error("no entry " + name);
}

TestOutcome run_one(const ProjectSnapshot& snap, const std::string& test,
                    const InterpreterOptions& options = {},
                    std::set<MethodSig>* trace = nullptr) {
  ExecutableProgram program(snap);
  auto entries = synthesize_test_entries(snap);
  return run_test_entry(program, entry_for(entries, test), options, trace);
}

} // namespace

TEST_CASE("passing, failing and erroring tests get distinct outcomes") {
  ProjectSnapshot snap = snapshot_of({
      "package p; class Ops { fn half(x: int): int { return x / 2; }"
      " fn crash(): int { return 1 / 0; } }",
      "package p; class OpsTest {"
      " @test fn good() { let o: Ops = new Ops(); assert o.half(8) == 4; }"
      " @test fn bad() { let o: Ops = new Ops(); assert o.half(8) == 5; }"
      " @test fn ugly() { let o: Ops = new Ops(); assert o.crash() == 0; } }",
  });
  TestOutcome good = run_one(snap, "good");
  CHECK(good.status == TestStatus::Passed);
  CHECK_FALSE(good.failure_message.has_value());

  TestOutcome bad = run_one(snap, "bad");
  CHECK(bad.status == TestStatus::Failed);
  REQUIRE(bad.failure_message.has_value());
  CHECK(bad.failure_message->find("assert") != std::string::npos);

  TestOutcome ugly = run_one(snap, "ugly");
  CHECK(ugly.status == TestStatus::Errored);
  REQUIRE(ugly.failure_message.has_value());
  CHECK(ugly.failure_message->find("division by zero") != std::string::npos);
  // Innermost frame first: the fault is inside crash(), observed from ugly().
  REQUIRE(ugly.failure_trace.size() >= 2);
  CHECK(ugly.failure_trace[0].method_name == "crash");
  CHECK(ugly.failure_trace[1].method_name == "ugly");
}

TEST_CASE("virtual dispatch selects the runtime class override") {
  ProjectSnapshot snap = corpus_snapshot("inherit");
  CHECK(run_one(snap, "rhombusInheritsSides").status == TestStatus::Passed);
  CHECK(run_one(snap, "namesAreOverridden").status == TestStatus::Passed);
  CHECK(run_one(snap, "plainShapeHasNone").status == TestStatus::Passed);
}

TEST_CASE("fixture prologue and constructor run in declaration order") {
  ProjectSnapshot snap = corpus_snapshot("fixtures");
  for (const char* name : {"ctorRanBeforeFixture", "seesWholeChain",
                           "baseSeesOwnFixture", "startsPrimed"}) {
    CAPTURE(name);
    CHECK(run_one(snap, name).status == TestStatus::Passed);
  }
}

TEST_CASE("statics are isolated between tests") {
  ProjectSnapshot snap = snapshot_of({
      "package p; class S { static let n: int = 0;"
      " fn bump(): int { S.n = S.n + 1; return S.n; } }",
      "package p; class STest {"
      " @test fn first() { let s: S = new S(); assert s.bump() == 1; }"
      " @test fn second() { let s: S = new S(); assert s.bump() == 1; } }",
  });
  // Same ExecutableProgram, two runs: the second must not see the first's state.
  ExecutableProgram program(snap);
  auto entries = synthesize_test_entries(snap);
  CHECK(run_test_entry(program, entry_for(entries, "first")).status ==
        TestStatus::Passed);
  CHECK(run_test_entry(program, entry_for(entries, "second")).status ==
        TestStatus::Passed);
}

TEST_CASE("the epilogue runs even when the body fails") {
  ProjectSnapshot snap = snapshot_of({
      "package p; class Probe { static let cleaned: int = 0;"
      " fn clean() { Probe.cleaned = Probe.cleaned + 1; } }",
      "package p; class ProbeTest {"
      " @after fn tidy() { let x: Probe = new Probe(); x.clean(); }"
      " @test fn fails() { assert 1 == 2; } }",
  });
  std::set<MethodSig> trace;
  TestOutcome outcome = run_one(snap, "fails", {}, &trace);
  CHECK(outcome.status == TestStatus::Failed);
  bool saw_tidy = false;
  bool saw_clean = false;
  for (const auto& sig : trace) {
    if (sig.method_name == "tidy") saw_tidy = true;
    if (sig.method_name == "clean") saw_clean = true;
  }
  CHECK(saw_tidy);
  CHECK(saw_clean);
}

TEST_CASE("the first failure wins over a later epilogue failure") {
  ProjectSnapshot snap = snapshot_of({
      "package p; class T1Test {"
      " @after fn boom() { assert false; }"
      " @test fn body() { assert 1 == 2; } }",
  });
  TestOutcome outcome = run_one(snap, "body");
  CHECK(outcome.status == TestStatus::Failed);
  REQUIRE(outcome.failure_message.has_value());
  // line 1 holds the body's assert; the epilogue assert must not override it.
  REQUIRE_FALSE(outcome.failure_trace.empty());
  CHECK(outcome.failure_trace[0].method_name == "body");
}

TEST_CASE("a failing prologue skips the body but still reports through") {
  ProjectSnapshot snap = snapshot_of({
      "package p; class Flag { static let touched: int = 0;"
      " fn touch() { Flag.touched = 1; } }",
      "package p; class SkipTest {"
      " @before fn broken() { assert false; }"
      " @test fn never() { let f: Flag = new Flag(); f.touch(); assert false; } }",
  });
  std::set<MethodSig> trace;
  TestOutcome outcome = run_one(snap, "never", {}, &trace);
  CHECK(outcome.status == TestStatus::Failed);
  REQUIRE_FALSE(outcome.failure_trace.empty());
  CHECK(outcome.failure_trace[0].method_name == "broken");
  // The body never began: touch() must be absent from the trace.
  for (const auto& sig : trace) CHECK(sig.method_name != "touch");
}

TEST_CASE("deep recursion faults instead of crashing") {
  ProjectSnapshot snap = snapshot_of({
      "package p; class Rec { fn dive(n: int): int { return dive(n + 1); } }",
      "package p; class RecTest { @test fn t() {"
      " let r: Rec = new Rec(); assert r.dive(0) == 0; } }",
  });
  TestOutcome outcome = run_one(snap, "t");
  CHECK(outcome.status == TestStatus::Errored);
  REQUIRE(outcome.failure_message.has_value());
  CHECK(outcome.failure_message->find("stack") != std::string::npos);
}

TEST_CASE("runaway loops hit the step budget deterministically") {
  ProjectSnapshot snap = snapshot_of({
      "package p; class Spin { fn forever(): int {"
      " let i: int = 0; while (i >= 0) { i = i + 1; } return i; } }",
      "package p; class SpinTest { @test fn t() {"
      " let s: Spin = new Spin(); assert s.forever() == 0; } }",
  });
  InterpreterOptions tight;
  tight.max_steps = 50000;
  TestOutcome first = run_one(snap, "t", tight);
  TestOutcome second = run_one(snap, "t", tight);
  CHECK(first.status == TestStatus::Errored);
  REQUIRE(first.failure_message.has_value());
  CHECK(first.failure_message->find("step limit") != std::string::npos);
  CHECK(second.status == first.status);
  CHECK(second.failure_message == first.failure_message);
}

TEST_CASE("arithmetic wraps and guards its faults") {
  ProjectSnapshot snap = snapshot_of({
      "package p; class Edge {"
      " fn wrap(): int { return 9223372036854775807 + 1; }"
      " fn minDiv(): int { return (-9223372036854775807 - 1) / (0 - 1); }"
      " fn modZero(x: int): int { return x % 0; } }",
      "package p; class EdgeTest {"
      " @test fn wraps() { let e: Edge = new Edge();"
      "   assert e.wrap() == -9223372036854775807 - 1; }"
      " @test fn minOverflow() { let e: Edge = new Edge();"
      "   assert e.minDiv() == -9223372036854775807 - 1; }"
      " @test fn badMod() { let e: Edge = new Edge();"
      "   assert e.modZero(5) == 0; } }",
  });
  CHECK(run_one(snap, "wraps").status == TestStatus::Passed);
  // INT64_MIN / -1 wraps to INT64_MIN instead of trapping.
  CHECK(run_one(snap, "minOverflow").status == TestStatus::Passed);
  TestOutcome mod = run_one(snap, "badMod");
  CHECK(mod.status == TestStatus::Errored);
  REQUIRE(mod.failure_message.has_value());
  CHECK(mod.failure_message->find("division by zero") != std::string::npos);
}

TEST_CASE("object identity and string equality behave as values") {
  ProjectSnapshot snap = snapshot_of({
      "package p; class Thing { fn id(): int { return 7; } }",
      "package p; class EqTest {"
      " @test fn strings() { let a: string = \"x\"; let b: string = \"x\";"
      "   assert a == b; assert !(a != b); }"
      " @test fn objects() { let t: Thing = new Thing(); let u: Thing = t;"
      "   assert t == u; let v: Thing = new Thing(); assert t != v; } }",
  });
  CHECK(run_one(snap, "strings").status == TestStatus::Passed);
  CHECK(run_one(snap, "objects").status == TestStatus::Passed);
}

TEST_CASE("missing method on the runtime class faults cleanly") {
  FrontendOptions opts;
  opts.allow_external = true;
  ProjectSnapshot snap = snapshot_of(
      {
          "package p; class Gap extends vendor.Lost {"
          " fn go(): int { return inherited(); } }",
          "package p; class GapTest { @test fn t() {"
          " let g: Gap = new Gap(); assert g.go() == 0; } }",
      },
      "mem", opts);
  TestOutcome outcome = run_one(snap, "t");
  CHECK(outcome.status == TestStatus::Errored);
}

TEST_CASE("fingerprint-only snapshots refuse to execute") {
  ProjectSnapshot snap = corpus_snapshot("inherit");
  for (auto& [key, cls] : snap.classes)
    for (auto& m : cls.methods) m.body.instructions.clear();
  CHECK_THROWS_AS(ExecutableProgram{snap}, CattoError);
}

TEST_CASE("lazy static initialization runs a class once per test") {
  ProjectSnapshot snap = snapshot_of({
      "package p; class Tick { static let count: int = 0; }",
      "package p; class Marker { fn mark(): int {"
      " Tick.count = Tick.count + 1; return Tick.count; } }",
      "package p; class Boot { static let stamp: int = new Marker().mark(); }",
      "package p; class LazyTest { @test fn once() {"
      " let b: Boot = new Boot(); let c: Boot = new Boot();"
      " assert Boot.stamp == 1; assert Tick.count == 1; } }",
  });
  CHECK(run_one(snap, "once").status == TestStatus::Passed);
}

TEST_CASE("report rendering is stable and counts outcomes") {
  ProjectSnapshot snap = corpus_snapshot("calculator");
  std::vector<MethodSig> tests;
  for (const auto& entry : synthesize_test_entries(snap))
    tests.push_back(entry.test_method);

  RunOptions serial;
  serial.threads = 1;
  TestReport a = run_tests(tests, snap, serial);
  CHECK(a.total() == 25);
  CHECK(a.passed == 25);
  CHECK(a.all_passed());

  RunOptions parallel;
  parallel.threads = 8;
  TestReport b = run_tests(tests, snap, parallel);
  CHECK(render_report_text(a) == render_report_text(b));
  CHECK(render_report_text(a).find("25 tests: 25 passed, 0 failed, 0 errored") !=
        std::string::npos);
}

TEST_CASE("unknown requested tests are an error") {
  ProjectSnapshot snap = corpus_snapshot("fixtures");
  MethodSig ghost{"fx", "NoTest", "nope", {}, "void"};
  CHECK_THROWS_AS(run_tests({ghost}, snap), CattoError);
}

TEST_CASE("traces stay within the static reachable set") {
  ProjectSnapshot snap = corpus_snapshot("fixtures");
  CallGraph graph = build_call_graph(snap, synthesize_test_entries(snap));
  CoverageMap cov = coverage_map(graph);

  std::vector<MethodSig> tests;
  for (const auto& entry : graph.roots) tests.push_back(entry.test_method);
  auto [report, traces] = run_tests_traced(tests, snap);
  CHECK(report.all_passed());
  REQUIRE(traces.size() == tests.size());
  for (const auto& trace : traces) {
    CAPTURE(trace.test.str());
    for (const auto& m : trace.executed_methods) {
      CAPTURE(m.str());
      // m executed under this test, so this test must statically cover m.
      auto it = cov.find(m);
      REQUIRE(it != cov.end());
      CHECK(it->second.count(trace.test) == 1);
    }
  }
}
