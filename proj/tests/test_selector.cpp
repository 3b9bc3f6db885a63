#include "doctest.h"

#include "catto/change_analyzer.hpp"
#include "catto/selector.hpp"

#include "test_util.hpp"

#include <fstream>

using namespace catto;
using namespace catto::testutil;

namespace {

struct PipelineResult {
  ProjectSnapshot prev;
  ProjectSnapshot cur;
  ChangeSet changes;
  CallGraph graph;
  CoverageMap cur_cov;
  CoverageMap prev_cov;
  SelectedSuite suite;
};

PipelineResult run_pipeline(ProjectSnapshot prev, ProjectSnapshot cur) {
  PipelineResult r{std::move(prev), std::move(cur), {}, {}, {}, {}, {}};
  r.changes = diff_snapshots(r.prev, r.cur);
  CallGraph prev_graph = build_call_graph(r.prev, synthesize_test_entries(r.prev));
  r.prev_cov = coverage_map(prev_graph);
  r.graph = build_call_graph(r.cur, synthesize_test_entries(r.cur));
  r.cur_cov = coverage_map(r.graph);
  r.suite = select_tests(r.changes, r.cur, r.graph, r.cur_cov, &r.prev_cov);
  return r;
}

PipelineResult run_matrix(const std::string& scenario) {
  SnapshotResult prev =
      parse_project_dir(corpus_path("matrix/" + scenario + "/prev"), "prev");
  SnapshotResult cur =
      parse_project_dir(corpus_path("matrix/" + scenario + "/cur"), "cur");
  if (!prev.ok() || !cur.ok())
    throw std::runtime_error("matrix scenario " + scenario + " does not build");
  return run_pipeline(std::move(*prev.snapshot), std::move(*cur.snapshot));
}

std::vector<std::string> expected_tests(const std::string& scenario) {
  std::ifstream in(corpus_path("matrix/" + scenario + "/expected.txt"));
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) out.push_back(line);
  return out;
}

std::vector<std::string> selected_strings(const SelectedSuite& suite) {
  std::vector<std::string> out;
  for (const auto& t : suite.tests) out.push_back(t.str());
  return out;
}

} // namespace

TEST_CASE("matrix scenarios select exactly their recorded suites") {
  const char* scenarios[] = {
      "method_added",        "method_modified",
      "method_deleted",      "method_deleted_in_hierarchy",
      "constructor_changed", "static_field_changed",
      "test_method_added",   "test_method_modified",
      "test_infra_modified",
  };
  for (const char* scenario : scenarios) {
    CAPTURE(scenario);
    PipelineResult r = run_matrix(scenario);
    CHECK(selected_strings(r.suite) == expected_tests(scenario));
    // Every selected test cites at least one change mark as its reason.
    for (const auto& test : r.suite.tests) {
      const auto& reasons = r.suite.reasons.at(test);
      CHECK_FALSE(reasons.empty());
      for (const auto& reason : reasons) CHECK(r.changes.marks.count(reason) == 1);
    }
  }
}

TEST_CASE("an empty change set selects nothing") {
  ProjectSnapshot prev = corpus_snapshot("calculator", "a");
  ProjectSnapshot cur = corpus_snapshot("calculator", "b");
  PipelineResult r = run_pipeline(std::move(prev), std::move(cur));
  CHECK(r.changes.marks.empty());
  CHECK(r.suite.tests.empty());
}

TEST_CASE("selection never names a method absent from the current tests") {
  // The deleted test's previous coverage names only itself; the selection
  // must come out empty rather than resurrect it.
  ProjectSnapshot prev = snapshot_of(
      {"package p; class R { fn f(): int { return 1; } }"
       " class RTest { @test fn gone() { let r: R = new R(); assert r.f() == 1; } }"},
      "prev");
  ProjectSnapshot cur = snapshot_of(
      {"package p; class R { fn f(): int { return 1; } }"
       " class RTest { }"},
      "cur");
  PipelineResult r = run_pipeline(std::move(prev), std::move(cur));
  REQUIRE(r.changes.marks.size() == 1);
  CHECK(r.changes.marks.begin()->kind == ChangeKind::MethodDeleted);
  CHECK(r.suite.tests.empty());
}

TEST_CASE("a deleted test still selects surviving tests that reached it") {
  // helper() was reached both by the deleted test directly and by keep()
  // through production code; prev coverage of the deleted test method itself
  // names only deleted tests, but the deleted *production* path stays live.
  ProjectSnapshot prev = snapshot_of(
      {"package p; class Svc { fn entry(): int { return helper(); }"
       " fn helper(): int { return 7; } }"
       " class SvcTest { @test fn keep() { let s: Svc = new Svc();"
       " assert s.entry() == 7; } @test fn gone() { let s: Svc = new Svc();"
       " assert s.helper() == 7; } }"},
      "prev");
  ProjectSnapshot cur = snapshot_of(
      {"package p; class Svc { fn entry(): int { return 7; } }"
       " class SvcTest { @test fn keep() { let s: Svc = new Svc();"
       " assert s.entry() == 7; } }"},
      "cur");
  PipelineResult r = run_pipeline(std::move(prev), std::move(cur));
  // helper deleted (entry modified, gone deleted as well); keep() covered
  // helper in prev, so it must be selected.
  std::vector<std::string> got = selected_strings(r.suite);
  CHECK(got == std::vector<std::string>{"p.SvcTest.keep():void"});
}

TEST_CASE("deleted method falls back to class coverage without prev coverage") {
  ProjectSnapshot cur = snapshot_of(
      {"package p; class Svc { fn entry(): int { return 7; } }"
       " class SvcTest { @test fn keep() { let s: Svc = new Svc();"
       " assert s.entry() == 7; } }"},
      "cur");
  CallGraph graph = build_call_graph(cur, synthesize_test_entries(cur));
  CoverageMap cov = coverage_map(graph);

  Mark mark;
  mark.kind = ChangeKind::MethodDeleted;
  mark.method = MethodSig{"p", "Svc", "helper", {}, "int"};
  ChangeSet changes;
  changes.marks.insert(mark);

  SelectedSuite with_prev = select_tests(changes, cur, graph, cov, &cov);
  CHECK(with_prev.tests.empty()); // helper never existed in this coverage

  SelectedSuite without_prev = select_tests(changes, cur, graph, cov, nullptr);
  REQUIRE(without_prev.tests.size() == 1);
  CHECK(without_prev.tests[0].str() == "p.SvcTest.keep():void");
}

TEST_CASE("corrupt marks for missing current methods throw") {
  ProjectSnapshot cur = snapshot_of({"package p; class A { fn f(): int { return 1; } }"});
  CallGraph graph = build_call_graph(cur, synthesize_test_entries(cur));
  CoverageMap cov = coverage_map(graph);

  Mark mark;
  mark.kind = ChangeKind::MethodModified;
  mark.method = MethodSig{"p", "A", "nope", {}, "int"};
  ChangeSet changes;
  changes.marks.insert(mark);
  CHECK_THROWS_AS(select_tests(changes, cur, graph, cov, nullptr), CattoError);
}

TEST_CASE("reachable_tests agrees with the coverage map on every node") {
  for (const char* project : {"calculator", "inherit", "fixtures"}) {
    CAPTURE(project);
    ProjectSnapshot snap = corpus_snapshot(project);
    CallGraph graph = build_call_graph(snap, synthesize_test_entries(snap));
    CoverageMap cov = coverage_map(graph);
    TestReachability reach(graph);
    for (const auto& node : graph.nodes) {
      CAPTURE(node.str());
      auto expected = cov.count(node) ? cov.at(node) : std::set<MethodSig>{};
      CHECK(reach.tests_reaching(node) == expected);
    }
  }
}

TEST_CASE("reachable_tests warns about unknown methods") {
  ProjectSnapshot snap = corpus_snapshot("inherit");
  CallGraph graph = build_call_graph(snap, synthesize_test_entries(snap));
  std::vector<Diagnostic> warnings;
  MethodSig ghost{"shapes", "Ghost", "m", {}, "void"};
  CHECK(reachable_tests(ghost, graph, &warnings).empty());
  REQUIRE(warnings.size() == 1);
  CHECK(warnings[0].severity == Severity::Warning);
}

TEST_CASE("selection renders text and json with reasons") {
  PipelineResult r = run_matrix("method_modified");
  std::string text = emit_selection_text(r.suite);
  CHECK(text.find("hello.GreeterTest.saysFarewell():void <- method_modified "
                  "hello.Greeter.farewell():string") != std::string::npos);
  std::string json = emit_selection_json(r.suite);
  CHECK(json.find("\"rule\": \"method_modified\"") != std::string::npos);
  CHECK(json.find("\"entity\": \"hello.Greeter.farewell():string\"") !=
        std::string::npos);
}

TEST_CASE("selected tests are sorted and unique") {
  PipelineResult r = run_matrix("constructor_changed");
  CHECK(std::is_sorted(r.suite.tests.begin(), r.suite.tests.end()));
  CHECK(std::adjacent_find(r.suite.tests.begin(), r.suite.tests.end()) ==
        r.suite.tests.end());
}
