#pragma once

#include "catto/diagnostics.hpp"
#include "catto/project_model.hpp"

#include <map>
#include <set>
#include <string>
#include <vector>

namespace catto {

// One test method with its fixture chains resolved through the class
// hierarchy. Before-fixtures run superclass-first, after-fixtures
// subclass-first; an overridden fixture appears once, at the position where
// the hierarchy introduces it, resolved to the most-derived override.
struct TestEntry {
  MethodSig test_method;
  std::vector<MethodSig> prologue;
  std::vector<MethodSig> epilogue;

  bool operator==(const TestEntry&) const = default;

  // prologue, then the test, then epilogue; the reachability seed set.
  std::vector<MethodSig> seeds() const;
};

// Static call graph of one snapshot, rooted at the test entries. Synthetic
// per-class initializer nodes (method name "<clinit>", unparseable in source)
// stand for static-field initializer code.
struct CallGraph {
  std::vector<MethodSig> nodes;                       // sorted, unique
  std::map<MethodSig, std::vector<MethodSig>> edges;  // caller -> sorted callees
  std::vector<TestEntry> roots;                       // sorted by test_method
  std::vector<Diagnostic> warnings;                   // unresolvable call sites

  bool has_node(const MethodSig& sig) const;
  const std::vector<MethodSig>& callees(const MethodSig& sig) const;
};

// production/test method -> tests that statically reach it.
using CoverageMap = std::map<MethodSig, std::set<MethodSig>>;

// Synthetic initializer node for class key.
MethodSig class_initializer_sig(const ClassKey& key);
bool is_initializer_sig(const MethodSig& sig);

// One TestEntry per TestMethod in the snapshot, fixture chains resolved
// through the superclass chain.
std::vector<TestEntry> synthesize_test_entries(const ProjectSnapshot& snapshot);

// Resolved outgoing call edges of one method: self and virtual sites expand
// to their class-hierarchy dispatch cones, constructor sites to the target
// init. Sorted, unique. Sites that resolve to nothing append a warning.
std::vector<MethodSig> resolve_method_calls(const MethodDecl& method,
                                            const SnapshotIndex& index,
                                            std::vector<Diagnostic>* warnings);

// Builds the full graph: per-method resolved edges, synthetic initializer
// nodes wired from every method of the class and every method referencing the
// class statically, and the given roots.
CallGraph build_call_graph(const ProjectSnapshot& snapshot,
                           const std::vector<TestEntry>& entries);

// Forward-reachability coverage: test t covers m iff m is reachable from any
// of t's seeds. Computed once over the whole graph (strongly connected
// components condensed, then test sets propagated in topological order);
// output is independent of traversal order and worker count.
CoverageMap coverage_map(const CallGraph& graph);

// `caller -> callee` per line, sorted.
std::string emit_callgraph_text(const CallGraph& graph);
std::string emit_callgraph_dot(const CallGraph& graph);

// Serializes a coverage map (one `method: test, test...` line per method) and
// parses it back. Round-trips exactly.
std::string coverage_to_text(const CoverageMap& cov);
std::optional<CoverageMap> coverage_from_text(const std::string& text,
                                              std::string* error = nullptr);

} // namespace catto
