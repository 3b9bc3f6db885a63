#pragma once

#include "catto/callgraph.hpp"
#include "catto/change_analyzer.hpp"
#include "catto/project_model.hpp"

#include <map>
#include <set>
#include <string>
#include <vector>

namespace catto {

// A reason is the mark whose rule pulled the test in; one test may carry
// several.
using SelectionReason = Mark;

struct SelectedSuite {
  std::vector<MethodSig> tests; // sorted, unique; always test methods of cur
  std::map<MethodSig, std::vector<SelectionReason>> reasons; // keys == tests
  std::vector<Diagnostic> warnings;
};

// Applies one rule per mark and unions the results:
//   method added/modified        -> tests covering it now
//   method deleted               -> tests that covered it before (previous
//                                   coverage); without a previous coverage
//                                   map, tests covering any remaining method
//                                   of the class (conservative)
//   method deleted in hierarchy  -> tests covering any same-name/same-params
//                                   method in the ancestor/descendant chain
//   constructor changed /        -> tests covering any production method of
//   production static field        the class
//   test method added/modified   -> that test
//   test class infra modified    -> every test declared in the class or in a
//                                   descendant test class (they inherit the
//                                   fixture)
// Selected tests are always test methods of the current snapshot; stale
// entries from the previous coverage map are dropped. `cur` is needed for the
// hierarchy- and class-membership rules, which the graph alone cannot answer.
SelectedSuite select_tests(const ChangeSet& changes, const ProjectSnapshot& cur,
                           const CallGraph& cur_graph, const CoverageMap& cur_cov,
                           const CoverageMap* prev_cov);

// Tests whose entry (fixtures included) reaches m: a reverse walk from m to
// the seed sets. Equals coverage_map(graph)[m]. Unknown m yields the empty
// set plus a warning.
std::set<MethodSig> reachable_tests(const MethodSig& m, const CallGraph& graph,
                                    std::vector<Diagnostic>* warnings = nullptr);

// Memoizing form for many queries against one graph: the reverse adjacency is
// built once and per-node results are cached.
class TestReachability {
public:
  explicit TestReachability(const CallGraph& graph);

  std::set<MethodSig> tests_reaching(const MethodSig& m,
                                     std::vector<Diagnostic>* warnings = nullptr);

private:
  const CallGraph* graph_;
  std::map<MethodSig, std::vector<MethodSig>> reverse_edges_;
  std::map<MethodSig, std::set<MethodSig>> cache_;
};

// "test <- reason; reason" per line.
std::string emit_selection_text(const SelectedSuite& suite);
// {"tests": [{"sig": ..., "reasons": [{"rule": ..., "entity": ...}]}]}
std::string emit_selection_json(const SelectedSuite& suite);

} // namespace catto
