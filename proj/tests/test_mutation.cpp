#include "doctest.h"

#include "catto/change_analyzer.hpp"
#include "catto/interpreter.hpp"
#include "catto/mutation.hpp"

#include "test_util.hpp"

#include <algorithm>
#include <set>

using namespace catto;
using namespace catto::testutil;

namespace {

bool same_pick(const Mutant& a, const Mutant& b) {
  return a.id == b.id && a.op == b.op && a.method == b.method &&
         a.instruction_index == b.instruction_index && a.variant == b.variant &&
         a.description == b.description;
}

} // namespace

TEST_CASE("mutation sites live only in production methods of non-test classes") {
  ProjectSnapshot snap = corpus_snapshot("calculator");
  std::vector<Mutant> sites = enumerate_mutation_sites(snap);
  REQUIRE_FALSE(sites.empty());
  for (const auto& site : sites) {
    CAPTURE(site.method.str());
    const ClassDecl* cls = snap.find_class(site.method.class_key());
    REQUIRE(cls != nullptr);
    CHECK_FALSE(cls->is_test_class);
    const MethodDecl* method = snap.find_method(site.method);
    REQUIRE(method != nullptr);
    CHECK(method->kind == MethodKind::Production);
    CHECK(site.instruction_index < method->body.instructions.size());
  }
  // Deterministic enumeration: a second pass lists the same sites in order.
  std::vector<Mutant> again = enumerate_mutation_sites(snap);
  REQUIRE(again.size() == sites.size());
  for (size_t i = 0; i < sites.size(); ++i) CHECK(same_pick(sites[i], again[i]));
}

TEST_CASE("sampling is seed-deterministic with sequential one-based ids") {
  ProjectSnapshot snap = corpus_snapshot("calculator");
  std::vector<Mutant> a = generate_mutants(snap, 12, 7);
  std::vector<Mutant> b = generate_mutants(snap, 12, 7);
  REQUIRE(a.size() == 12);
  REQUIRE(b.size() == 12);
  for (size_t i = 0; i < a.size(); ++i) {
    CHECK(same_pick(a[i], b[i]));
    CHECK(a[i].id == static_cast<int>(i) + 1);
  }

  // Distinct sites: no (method, instruction, variant) appears twice.
  std::set<std::tuple<std::string, size_t, int>> seen;
  for (const auto& m : a)
    CHECK(seen.insert({m.method.str(), m.instruction_index, m.variant}).second);

  // A different seed picks a different sample (sites far outnumber picks).
  std::vector<Mutant> c = generate_mutants(snap, 12, 8);
  bool all_same = c.size() == a.size();
  for (size_t i = 0; all_same && i < a.size(); ++i)
    all_same = a[i].method == c[i].method &&
               a[i].instruction_index == c[i].instruction_index &&
               a[i].variant == c[i].variant;
  CHECK_FALSE(all_same);
}

TEST_CASE("asking for more mutants than sites yields every site once") {
  ProjectSnapshot snap = snapshot_of({
      "package p; class Tiny { fn one(): int { return 1 + 2; } }",
      "package p; class TinyTest { @test fn t() {"
      " let x: Tiny = new Tiny(); assert x.one() == 3; } }",
  });
  std::vector<Mutant> sites = enumerate_mutation_sites(snap);
  std::vector<Mutant> picked = generate_mutants(snap, 1000, 1);
  CHECK(picked.size() == sites.size());
}

TEST_CASE("a project with no eligible sites warns and yields nothing") {
  ProjectSnapshot snap = snapshot_of({
      "package p; class OnlyTest { @test fn t() { assert true; } }",
  });
  std::vector<Diagnostic> warnings;
  std::vector<Mutant> picked = generate_mutants(snap, 5, 1, &warnings);
  CHECK(picked.empty());
  CHECK(has_warning(warnings, "no eligible"));
}

TEST_CASE("applying a mutant changes exactly one instruction of one method") {
  ProjectSnapshot snap = corpus_snapshot("calculator");
  std::vector<Mutant> picked = generate_mutants(snap, 10, 1);
  REQUIRE(picked.size() == 10);
  for (const auto& mutant : picked) {
    CAPTURE(mutant.id);
    CAPTURE(mutant.method.str());
    CAPTURE(mutant.description);
    ProjectSnapshot mutated = apply_mutant(snap, mutant);

    // The diff sees a single modified production method.
    ChangeSet changes = diff_snapshots(snap, mutated);
    REQUIRE(changes.marks.size() == 1);
    const Mark& mark = *changes.marks.begin();
    CHECK(mark.kind == ChangeKind::MethodModified);
    CHECK(mark.method == mutant.method);

    // Instruction streams agree everywhere except the rewritten slot.
    const MethodDecl* before = snap.find_method(mutant.method);
    const MethodDecl* after = mutated.find_method(mutant.method);
    REQUIRE(before != nullptr);
    REQUIRE(after != nullptr);
    REQUIRE(before->body.instructions.size() == after->body.instructions.size());
    size_t diffs = 0;
    for (size_t i = 0; i < before->body.instructions.size(); ++i) {
      if (before->body.instructions[i] != after->body.instructions[i]) {
        ++diffs;
        CHECK(i == mutant.instruction_index);
      }
    }
    CHECK(diffs == 1);

    // The mutated snapshot is a legal program: it decodes and executes.
    CHECK_NOTHROW(ExecutableProgram{mutated});
  }
}

TEST_CASE("metric formulas are exact") {
  CHECK(tsr_metric(10, 3) == 0.7);
  CHECK(tsr_metric(25, 0) == 1.0);
  CHECK(tsr_metric(4, 4) == 0.0);
  CHECK(inclusiveness_metric(4, 3) == 0.75);
  CHECK(inclusiveness_metric(0, 0) == 1.0);
  CHECK(rfdc_metric(4, 3) == 0.25);
  CHECK(rfdc_metric(0, 0) == 0.0);
  CHECK(rfdc_metric(8, 8) == 0.0);
}

TEST_CASE("metric preconditions throw") {
  CHECK_THROWS_AS(tsr_metric(0, 0), CattoError);
  CHECK_THROWS_AS(tsr_metric(5, 6), CattoError);
  CHECK_THROWS_AS(tsr_metric(5, -1), CattoError);
  CHECK_THROWS_AS(inclusiveness_metric(3, 4), CattoError);
  CHECK_THROWS_AS(inclusiveness_metric(-1, 0), CattoError);
  CHECK_THROWS_AS(rfdc_metric(3, 4), CattoError);
}

TEST_CASE("a hand-built fault is found by the selection it triggers") {
  std::string killer =
      "package m; class Sums { fn twice(x: int): int { return x + x; } }";
  std::string mutated_killer =
      "package m; class Sums { fn twice(x: int): int { return x - x; } }";
  std::string other =
      "package m; class Rope { fn len(): int { return 3; } }";
  std::string tests =
      "package m; class MixTest {"
      " @test fn doubles() { let s: Sums = new Sums(); assert s.twice(2) == 4; }"
      " @test fn measures() { let r: Rope = new Rope(); assert r.len() == 3; } }";
  ProjectSnapshot original = snapshot_of({killer, other, tests});
  ProjectSnapshot mutant = snapshot_of({mutated_killer, other, tests});

  PairEvaluation eval = evaluate_pair(original, mutant);
  REQUIRE(eval.fault_revealing.size() == 1);
  CHECK(eval.fault_revealing[0].method_name == "doubles");
  REQUIRE(eval.selected.size() == 1);
  CHECK(eval.selected[0].method_name == "doubles");
  CHECK(eval.metrics.suite_size == 2);
  CHECK(eval.metrics.selected_count == 1);
  CHECK(eval.metrics.fault_revealing_count == 1);
  CHECK(eval.metrics.fault_revealing_selected == 1);
  CHECK(eval.metrics.tsr == 0.5);
  CHECK(eval.metrics.inclusiveness == 1.0);
  CHECK(eval.metrics.rfdc == 0.0);
}

TEST_CASE("tests already failing on the original are excluded from the fault set") {
  std::string prod =
      "package m; class Box { fn top(): int { return 5; } }";
  std::string prod_mut =
      "package m; class Box { fn top(): int { return 6; } }";
  std::string tests =
      "package m; class BoxTest {"
      " @test fn broken() { assert 1 == 2; }"
      " @test fn tops() { let b: Box = new Box(); assert b.top() == 5; } }";
  ProjectSnapshot original = snapshot_of({prod, tests});
  ProjectSnapshot mutant = snapshot_of({prod_mut, tests});

  PairEvaluation eval = evaluate_pair(original, mutant);
  REQUIRE(eval.fault_revealing.size() == 1);
  CHECK(eval.fault_revealing[0].method_name == "tops");
  CHECK(has_warning(eval.warnings, "broken"));
}

TEST_CASE("pair metrics tie back to the metric functions on sampled mutants") {
  ProjectSnapshot snap = corpus_snapshot("inherit");
  for (const auto& mutant : generate_mutants(snap, 5, 11)) {
    CAPTURE(mutant.id);
    PairEvaluation eval = evaluate_pair(snap, apply_mutant(snap, mutant));
    const ValidationMetrics& m = eval.metrics;
    CHECK(m.suite_size == 10);
    CHECK(m.selected_count == static_cast<int>(eval.selected.size()));
    CHECK(m.fault_revealing_count == static_cast<int>(eval.fault_revealing.size()));
    CHECK(m.tsr == tsr_metric(m.suite_size, m.selected_count));
    CHECK(m.inclusiveness ==
          inclusiveness_metric(m.fault_revealing_count, m.fault_revealing_selected));
    CHECK(m.rfdc == rfdc_metric(m.fault_revealing_count, m.fault_revealing_selected));
    CHECK(std::is_sorted(eval.selected.begin(), eval.selected.end()));
    CHECK(std::is_sorted(eval.fault_revealing.begin(), eval.fault_revealing.end()));

    // X counts exactly the fault-revealing tests the selection kept.
    int in_both = 0;
    for (const auto& t : eval.fault_revealing)
      if (std::binary_search(eval.selected.begin(), eval.selected.end(), t)) ++in_both;
    CHECK(m.fault_revealing_selected == in_both);
  }
}

TEST_CASE("project validation aggregates per-mutant metrics arithmetically") {
  ProjectSnapshot snap = corpus_snapshot("fixtures");
  ValidationSummary summary = validate_project(snap, 6, 1);
  REQUIRE(summary.records.size() == 6);
  double tsr = 0.0;
  double inc = 0.0;
  double rfdc = 0.0;
  for (const auto& rec : summary.records) {
    tsr += rec.evaluation.metrics.tsr;
    inc += rec.evaluation.metrics.inclusiveness;
    rfdc += rec.evaluation.metrics.rfdc;
  }
  double n = static_cast<double>(summary.records.size());
  CHECK(summary.mean_tsr == tsr / n);
  CHECK(summary.mean_inclusiveness == inc / n);
  CHECK(summary.mean_rfdc == rfdc / n);
  CHECK_FALSE(summary.no_fault_revealing);

  std::string text = render_validation_text(summary);
  CHECK(text.find("mean TSR") != std::string::npos);
  CHECK(text.find("mean I") != std::string::npos);
  CHECK(text.find("mean RFDC") != std::string::npos);
}

TEST_CASE("zero requested mutants produce an empty summary with a notice") {
  ProjectSnapshot snap = corpus_snapshot("fixtures");
  ValidationSummary summary = validate_project(snap, 0, 1);
  CHECK(summary.records.empty());
  CHECK_FALSE(summary.warnings.empty());
}

TEST_CASE("a mutant that misses the snapshot is rejected") {
  ProjectSnapshot snap = corpus_snapshot("fixtures");
  Mutant ghost;
  ghost.id = 1;
  ghost.op = MutationOperator::AOR;
  ghost.method = MethodSig{"fx", "Nothing", "nope", {}, "int"};
  ghost.instruction_index = 0;
  CHECK_THROWS_AS(apply_mutant(snap, ghost), CattoError);
}
