#include "doctest.h"

#include "catto/change_analyzer.hpp"

#include "test_util.hpp"

#include <algorithm>

using namespace catto;
using namespace catto::testutil;

namespace {

ProjectSnapshot matrix_side(const std::string& scenario, const std::string& side) {
  SnapshotResult result =
      parse_project_dir(corpus_path("matrix/" + scenario + "/" + side), side);
  if (!result.ok())
    throw std::runtime_error("matrix " + scenario + "/" + side + " failed:\n" +
                             diag_lines(result.diagnostics));
  return std::move(*result.snapshot);
}

// Marks iterate in classification order; tests compare them name-sorted.
std::vector<std::string> mark_strings(const ChangeSet& changes) {
  std::vector<std::string> out;
  for (const auto& mark : changes.marks) out.push_back(mark.str());
  std::sort(out.begin(), out.end());
  return out;
}

ChangeSet diff_matrix(const std::string& scenario) {
  return diff_snapshots(matrix_side(scenario, "prev"), matrix_side(scenario, "cur"));
}

} // namespace

TEST_CASE("identical trees diff to the empty change set") {
  ProjectSnapshot a = corpus_snapshot("calculator", "a");
  ProjectSnapshot b = corpus_snapshot("calculator", "b");
  CHECK(diff_snapshots(a, b).marks.empty());
}

TEST_CASE("cosmetic edits diff to the empty change set") {
  SnapshotResult prev = parse_project_dir(corpus_path("cosmetic/prev"), "prev");
  SnapshotResult cur = parse_project_dir(corpus_path("cosmetic/cur"), "cur");
  REQUIRE(prev.ok());
  REQUIRE(cur.ok());
  ChangeSet changes = diff_snapshots(*prev.snapshot, *cur.snapshot);
  CHECK_MESSAGE(changes.marks.empty(), emit_changes_text(changes));
}

TEST_CASE("each matrix scenario classifies to its dedicated mark") {
  struct Case {
    const char* scenario;
    std::vector<std::string> expected;
  } cases[] = {
      {"method_added", {"method_added aviary.Crow.call():string"}},
      {"method_modified", {"method_modified hello.Greeter.farewell():string"}},
      {"method_deleted",
       {"method_deleted pipeline.Flow.legacy():int",
        "method_modified pipeline.Flow.run():int"}},
      {"method_deleted_in_hierarchy",
       {"method_deleted_in_hierarchy motor.Turbo.output():int"}},
      {"constructor_changed", {"constructor_changed web.Session"}},
      {"static_field_changed", {"production_static_field_changed cfg.Config.limit"}},
      {"test_method_added", {"test_method_added shed.ToolTest.twistsMany():void"}},
      {"test_method_modified",
       {"test_method_modified lab.ScaleTest.convertsKilos():void"}},
      {"test_infra_modified", {"test_class_infra_modified toys.BaseGadgetTest"}},
  };
  for (const auto& c : cases) {
    CAPTURE(c.scenario);
    std::vector<std::string> got = mark_strings(diff_matrix(c.scenario));
    std::vector<std::string> want = c.expected;
    std::sort(want.begin(), want.end());
    CHECK(got == want);
  }
}

TEST_CASE("an annotation change is a deletion plus an addition") {
  ProjectSnapshot prev = snapshot_of(
      {"package p; class HelperTest { @test fn t() {} fn probe() { let x: int = 1; } }"},
      "prev");
  ProjectSnapshot cur = snapshot_of(
      {"package p; class HelperTest { @test fn t() {} @test fn probe()"
       " { let x: int = 1; } }"},
      "cur");
  // probe gained @test with an identical body: the production method is gone,
  // a test method with the same signature exists now.
  std::vector<std::string> got = mark_strings(diff_snapshots(prev, cur));
  std::vector<std::string> want = {
      "method_deleted p.HelperTest.probe():void",
      "test_method_added p.HelperTest.probe():void",
  };
  std::sort(want.begin(), want.end());
  CHECK(got == want);
}

TEST_CASE("re-parenting a class marks its declared methods modified") {
  ProjectSnapshot prev = snapshot_of({
      "package p; class A { fn f(): int { return 1; } }",
      "package p; class B { fn f(): int { return 2; } }",
      "package p; class C extends A { fn g(): int { return 3; } }",
  });
  ProjectSnapshot cur = snapshot_of({
      "package p; class A { fn f(): int { return 1; } }",
      "package p; class B { fn f(): int { return 2; } }",
      "package p; class C extends B { fn g(): int { return 3; } }",
  });
  // No body changed, but dispatch through C now lands elsewhere.
  std::vector<std::string> got = mark_strings(diff_snapshots(prev, cur));
  CHECK(got == std::vector<std::string>{"method_modified p.C.g():int"});
}

TEST_CASE("test class fixture edits collapse to one infra mark") {
  ProjectSnapshot prev = snapshot_of(
      {"package p; class T { fn f(): int { return 1; } }"
       " class TTest { @before fn prep() { let x: int = 1; } @test fn t() {} }"});
  ProjectSnapshot cur = snapshot_of(
      {"package p; class T { fn f(): int { return 1; } }"
       " class TTest { @before fn prep() { let x: int = 2; } @test fn t() {} }"});
  std::vector<std::string> got = mark_strings(diff_snapshots(prev, cur));
  CHECK(got == std::vector<std::string>{"test_class_infra_modified p.TTest"});
}

TEST_CASE("test class constructor and static field edits are infra marks") {
  ProjectSnapshot prev = snapshot_of(
      {"package p; class TTest { static let n: int = 1; fn init() {} @test fn t() {} }"});
  ProjectSnapshot cur = snapshot_of(
      {"package p; class TTest { static let n: int = 2;"
       " fn init() { let z: int = 0; } @test fn t() {} }"});
  std::vector<std::string> got = mark_strings(diff_snapshots(prev, cur));
  // Both the constructor edit and the field edit collapse into the same mark.
  CHECK(got == std::vector<std::string>{"test_class_infra_modified p.TTest"});
}

TEST_CASE("a deleted class marks every declared member") {
  ProjectSnapshot prev = snapshot_of({
      "package p; class Gone { static let s: int = 1; fn f(): int { return 1; } }",
      "package p; class Stay { fn g(): int { return 2; } }",
  });
  ProjectSnapshot cur = snapshot_of({
      "package p; class Stay { fn g(): int { return 2; } }",
  });
  std::vector<std::string> got = mark_strings(diff_snapshots(prev, cur));
  std::vector<std::string> want = {
      "method_deleted p.Gone.f():int",
      "production_static_field_changed p.Gone.s",
  };
  std::sort(want.begin(), want.end());
  CHECK(got == want);
}

TEST_CASE("hierarchy counterparts cover ancestors and descendants, not siblings") {
  ProjectSnapshot snap = snapshot_of({
      "package p; class Base { fn m(): int { return 1; } }",
      "package p; class Left extends Base { fn m(): int { return 2; } }",
      "package p; class Right extends Base { fn m(): int { return 3; } }",
      "package p; class Leaf extends Left { fn m(): int { return 4; } }",
  });
  SnapshotIndex index(snap);
  auto sigs = hierarchy_counterparts(index, {"p", "Left"}, "m", {});
  std::vector<std::string> names;
  for (const auto& s : sigs) names.push_back(s.str());
  // Base above, Leaf below; Right is a sibling and must stay out.
  CHECK(names == std::vector<std::string>{"p.Base.m():int", "p.Leaf.m():int"});
}

TEST_CASE("counterparts fall back to every class when the class vanished") {
  ProjectSnapshot cur = snapshot_of({
      "package p; class Base { fn m(): int { return 1; } }",
      "package p; class Other { fn m(): int { return 9; } }",
  });
  SnapshotIndex index(cur);
  auto sigs = hierarchy_counterparts(index, {"p", "Removed"}, "m", {});
  CHECK(sigs.size() == 2);
}

TEST_CASE("method reordering inside a class is cosmetic") {
  ProjectSnapshot prev = snapshot_of(
      {"package p; class A { fn f(): int { return 1; } fn g(): int { return 2; } }"});
  ProjectSnapshot cur = snapshot_of(
      {"package p; class A { fn g(): int { return 2; } fn f(): int { return 1; } }"});
  CHECK(diff_snapshots(prev, cur).marks.empty());
}

TEST_CASE("changes render one mark per line") {
  ProjectSnapshot prev = snapshot_of({"package p; class A { fn f(): int { return 1; } }"});
  ProjectSnapshot cur = snapshot_of({"package p; class A { fn f(): int { return 2; } }"});
  CHECK(emit_changes_text(diff_snapshots(prev, cur)) ==
        "method_modified p.A.f():int\n");
}
