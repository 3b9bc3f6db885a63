#include "doctest.h"

#include "catto/callgraph.hpp"

#include "test_util.hpp"

#include <algorithm>

using namespace catto;
using namespace catto::testutil;

namespace {

MethodSig sig_of(const ProjectSnapshot& snap, const std::string& cls,
                 const std::string& method) {
  for (const auto& [key, decl] : snap.classes) {
    if (key.str() != cls) continue;
    for (const auto& m : decl.methods)
      if (m.sig.method_name == method) return m.sig;
  }
  throw std::runtime_error("no method " + cls + "." + method);
}

// Independent coverage oracle: plain depth-first walk from each entry's
// seeds, no condensation, no sharing.
CoverageMap brute_force_coverage(const CallGraph& graph) {
  CoverageMap cov;
  for (const auto& entry : graph.roots) {
    std::set<MethodSig> seen;
    std::vector<MethodSig> work = entry.seeds();
    for (const auto& seed : work) seen.insert(seed);
    while (!work.empty()) {
      MethodSig node = work.back();
      work.pop_back();
      auto it = graph.edges.find(node);
      if (it == graph.edges.end()) continue;
      for (const auto& callee : it->second)
        if (seen.insert(callee).second) work.push_back(callee);
    }
    for (const auto& m : seen) cov[m].insert(entry.test_method);
  }
  return cov;
}

} // namespace

TEST_CASE("virtual call sites expand to the dispatch cone of the static type") {
  ProjectSnapshot snap = corpus_snapshot("inherit");
  CallGraph graph = build_call_graph(snap, synthesize_test_entries(snap));

  // Shape.perimeter's self-call `sides()` must fan out to every override.
  MethodSig perimeter = sig_of(snap, "shapes.Shape", "perimeter");
  const auto& callees = graph.callees(perimeter);
  auto has = [&](const char* cls, const char* name) {
    MethodSig target = sig_of(snap, cls, name);
    return std::find(callees.begin(), callees.end(), target) != callees.end();
  };
  CHECK(has("shapes.Shape", "sides"));
  CHECK(has("shapes.Triangle", "sides"));
  CHECK(has("shapes.Square", "sides"));
  // Rhombus declares no sides() of its own, so no extra cone member exists.
  CHECK(callees.size() == 3);
}

TEST_CASE("every test reaches inherited methods through the cone") {
  ProjectSnapshot snap = corpus_snapshot("inherit");
  CallGraph graph = build_call_graph(snap, synthesize_test_entries(snap));
  CoverageMap cov = coverage_map(graph);

  // rhombusInheritsSides dispatches Shape.perimeter on a Rhombus receiver;
  // statically that covers the whole sides() cone.
  MethodSig test = sig_of(snap, "shapes.PerimeterTest", "rhombusInheritsSides");
  CHECK(cov[sig_of(snap, "shapes.Shape", "perimeter")].count(test) == 1);
  CHECK(cov[sig_of(snap, "shapes.Square", "sides")].count(test) == 1);
  CHECK(cov[sig_of(snap, "shapes.Triangle", "sides")].count(test) == 1);
}

TEST_CASE("constructor calls create edges to init") {
  ProjectSnapshot snap = snapshot_of({
      "package p; class Box { fn init() {} fn get(): int { return 1; } }",
      "package p; class BoxTest { @test fn makes() {"
      " let b: Box = new Box(); assert b.get() == 1; } }",
  });
  CallGraph graph = build_call_graph(snap, synthesize_test_entries(snap));
  MethodSig test = sig_of(snap, "p.BoxTest", "makes");
  const auto& callees = graph.callees(test);
  MethodSig ctor = sig_of(snap, "p.Box", "init");
  CHECK(std::find(callees.begin(), callees.end(), ctor) != callees.end());
}

TEST_CASE("fixture chains seed the entries superclass-first") {
  ProjectSnapshot snap = corpus_snapshot("fixtures");
  std::vector<TestEntry> entries = synthesize_test_entries(snap);

  auto entry_for = [&](const std::string& name) -> const TestEntry& {
    for (const auto& e : entries)
      if (e.test_method.method_name == name) return e;
    throw std::runtime_error("no entry " + name);
  };

  const TestEntry& derived = entry_for("seesWholeChain");
  REQUIRE(derived.prologue.size() == 2);
  CHECK(derived.prologue[0] == sig_of(snap, "fx.BaseChainTest", "boot"));
  CHECK(derived.prologue[1] == sig_of(snap, "fx.DerivedChainTest", "extra"));
  CHECK(derived.epilogue.empty());

  const TestEntry& base = entry_for("baseSeesOwnFixture");
  REQUIRE(base.prologue.size() == 1);
  CHECK(base.prologue[0] == sig_of(snap, "fx.BaseChainTest", "boot"));

  const TestEntry& gauged = entry_for("startsPrimed");
  REQUIRE(gauged.prologue.size() == 1);
  CHECK(gauged.prologue[0] == sig_of(snap, "fx.GaugeTest", "prime"));
  REQUIRE(gauged.epilogue.size() == 1);
  CHECK(gauged.epilogue[0] == sig_of(snap, "fx.GaugeTest", "settle"));
}

TEST_CASE("a declared test class constructor joins the seeds") {
  ProjectSnapshot snap = corpus_snapshot("fixtures");
  std::vector<TestEntry> entries = synthesize_test_entries(snap);
  for (const auto& entry : entries) {
    if (entry.test_method.class_key().class_name != "CtorStateTest") continue;
    REQUIRE(entry.prologue.size() == 2);
    CHECK(entry.prologue[0] == sig_of(snap, "fx.CtorStateTest", "init"));
    CHECK(entry.prologue[1] == sig_of(snap, "fx.CtorStateTest", "again"));
  }
}

TEST_CASE("coverage equals a brute-force walk on all corpus projects") {
  for (const char* project : {"calculator", "inherit", "fixtures"}) {
    CAPTURE(project);
    ProjectSnapshot snap = corpus_snapshot(project);
    CallGraph graph = build_call_graph(snap, synthesize_test_entries(snap));
    CoverageMap fast = coverage_map(graph);
    CoverageMap slow = brute_force_coverage(graph);
    CHECK(fast == slow);
  }
}

TEST_CASE("call-bearing initializers join the graph through synthetic nodes") {
  ProjectSnapshot snap = snapshot_of({
      "package p; class Seeder { fn value(): int { return 8; } }",
      "package p; class Defaults { static let base: int = new Seeder().value(); }",
      "package p; class Cfg { static let limit: int = Defaults.base + 1;"
      " fn max(): int { return Cfg.limit; } }",
      "package p; class CfgTest { @test fn reads() {"
      " let c: Cfg = new Cfg(); assert c.max() == 9; } }",
  });
  CallGraph graph = build_call_graph(snap, synthesize_test_entries(snap));
  // Literal-only initializers get no node; these two execute code.
  REQUIRE(graph.has_node(class_initializer_sig({"p", "Cfg"})));
  REQUIRE(graph.has_node(class_initializer_sig({"p", "Defaults"})));

  // reads -> Cfg.max -> clinit(Cfg) -> clinit(Defaults) -> Seeder.value
  CoverageMap cov = coverage_map(graph);
  MethodSig test = sig_of(snap, "p.CfgTest", "reads");
  CHECK(cov[class_initializer_sig({"p", "Cfg"})].count(test) == 1);
  CHECK(cov[sig_of(snap, "p.Seeder", "value")].count(test) == 1);
}

TEST_CASE("graph nodes and edges are sorted and unique") {
  ProjectSnapshot snap = corpus_snapshot("calculator");
  CallGraph graph = build_call_graph(snap, synthesize_test_entries(snap));
  CHECK(std::is_sorted(graph.nodes.begin(), graph.nodes.end()));
  CHECK(std::adjacent_find(graph.nodes.begin(), graph.nodes.end()) ==
        graph.nodes.end());
  for (const auto& [caller, callees] : graph.edges) {
    CAPTURE(caller.str());
    CHECK(graph.has_node(caller));
    CHECK(std::is_sorted(callees.begin(), callees.end()));
    CHECK(std::adjacent_find(callees.begin(), callees.end()) == callees.end());
    for (const auto& callee : callees) CHECK(graph.has_node(callee));
  }
}

TEST_CASE("text and dot emissions list every edge") {
  ProjectSnapshot snap = corpus_snapshot("inherit");
  CallGraph graph = build_call_graph(snap, synthesize_test_entries(snap));
  std::string text = emit_callgraph_text(graph);
  std::string dot = emit_callgraph_dot(graph);
  size_t edge_count = 0;
  for (const auto& [caller, callees] : graph.edges) {
    for (const auto& callee : callees) {
      ++edge_count;
      CHECK(text.find(caller.str() + " -> " + callee.str()) != std::string::npos);
    }
  }
  CHECK(std::count(text.begin(), text.end(), '\n') == static_cast<long>(edge_count));
  CHECK(dot.find("digraph") != std::string::npos);
}

TEST_CASE("unresolvable call sites produce a warning, not an edge") {
  FrontendOptions opts;
  opts.allow_external = true;
  ProjectSnapshot snap = snapshot_of(
      {
          "package p; class Wrap extends vendor.Base {"
          " fn go(): int { return helper(); } }",
          "package p; class WrapTest { @test fn t() {"
          " let w: Wrap = new Wrap(); assert w.go() == 0; } }",
      },
      "mem", opts);
  // helper() resolves nowhere inside the snapshot (it may live in the
  // external superclass), so the graph keeps a warning instead of an edge.
  CallGraph graph = build_call_graph(snap, synthesize_test_entries(snap));
  CHECK_FALSE(graph.warnings.empty());
}
