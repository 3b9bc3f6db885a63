#include "catto/selector.hpp"

#include "catto/diagnostics.hpp"

#include <algorithm>
#include <sstream>

#include "json.hpp"

namespace catto {

namespace {

class Selector {
 public:
  Selector(const ProjectSnapshot& cur, const CoverageMap& cur_cov, const CoverageMap* prev_cov)
      : cur_(cur), index_(cur), cur_cov_(cur_cov), prev_cov_(prev_cov) {}

  SelectedSuite run(const ChangeSet& changes) {
    for (const auto& mark : changes.marks) apply(mark);
    for (const auto& [test, reasons] : suite_.reasons) {
      (void)reasons;
      suite_.tests.push_back(test);
    }
    return std::move(suite_);
  }

 private:
  bool is_current_test(const MethodSig& sig) const {
    const MethodDecl* m = cur_.find_method(sig);
    return m && m->kind == MethodKind::TestMethod;
  }

  void add(const MethodSig& test, const Mark& why) {
    if (!is_current_test(test)) return;
    auto& reasons = suite_.reasons[test];
    if (std::find(reasons.begin(), reasons.end(), why) == reasons.end())
      reasons.push_back(why);
  }

  void add_coverage_of(const MethodSig& m, const Mark& why) {
    auto it = cur_cov_.find(m);
    if (it == cur_cov_.end()) return;
    for (const auto& test : it->second) add(test, why);
  }

  void require_current(const MethodSig& sig, const Mark& why) const {
    if (!cur_.find_method(sig))
      throw CattoError("selection mark '" + why.str() +
                       "' references a method absent from the current snapshot");
  }

  void apply(const Mark& mark) {
    switch (mark.kind) {
      case ChangeKind::MethodAdded:
      case ChangeKind::MethodModified:
        require_current(*mark.method, mark);
        add_coverage_of(*mark.method, mark);
        break;

      case ChangeKind::MethodDeleted: {
        const MethodSig& m = *mark.method;
        if (prev_cov_) {
          auto it = prev_cov_->find(m);
          if (it != prev_cov_->end())
            for (const auto& test : it->second) add(test, mark);
        } else if (const ClassDecl* decl = cur_.find_class(m.class_key())) {
          // No record of what used to reach the deleted method; fall back to
          // everything touching the class it lived in.
          for (const auto& remaining : decl->methods) add_coverage_of(remaining.sig, mark);
        }
        break;
      }

      case ChangeKind::MethodDeletedInHierarchy: {
        const MethodSig& m = *mark.method;
        auto counterparts =
            hierarchy_counterparts(index_, m.class_key(), m.method_name, m.param_types);
        for (const auto& sig : counterparts) add_coverage_of(sig, mark);
        break;
      }

      case ChangeKind::ConstructorChanged:
      case ChangeKind::ProductionStaticFieldChanged: {
        ClassKey cls = mark.cls ? *mark.cls : mark.field->first;
        if (const ClassDecl* decl = cur_.find_class(cls)) {
          for (const auto& m : decl->methods)
            if (m.kind == MethodKind::Production) add_coverage_of(m.sig, mark);
        }
        break;
      }

      case ChangeKind::TestMethodAdded:
      case ChangeKind::TestMethodModified:
        require_current(*mark.method, mark);
        add(*mark.method, mark);
        break;

      case ChangeKind::TestClassInfraModified: {
        for (const auto& cls : index_.cone_classes(*mark.cls)) {
          const ClassDecl* decl = cur_.find_class(cls);
          if (!decl || !decl->is_test_class) continue;
          for (const auto& m : decl->methods)
            if (m.kind == MethodKind::TestMethod) add(m.sig, mark);
        }
        break;
      }
    }
  }

  const ProjectSnapshot& cur_;
  SnapshotIndex index_;
  const CoverageMap& cur_cov_;
  const CoverageMap* prev_cov_;
  SelectedSuite suite_;
};

} // namespace

SelectedSuite select_tests(const ChangeSet& changes, const ProjectSnapshot& cur,
                           const CallGraph& cur_graph, const CoverageMap& cur_cov,
                           const CoverageMap* prev_cov) {
  (void)cur_graph; // coverage already condensed from it; kept for symmetry
  return Selector(cur, cur_cov, prev_cov).run(changes);
}

TestReachability::TestReachability(const CallGraph& graph) : graph_(&graph) {
  for (const auto& [caller, callees] : graph.edges)
    for (const auto& callee : callees) reverse_edges_[callee].push_back(caller);
}

std::set<MethodSig> TestReachability::tests_reaching(const MethodSig& m,
                                                     std::vector<Diagnostic>* warnings) {
  if (!graph_->has_node(m)) {
    if (warnings)
      warnings->push_back(
          {"", 0, 0, "method '" + m.str() + "' is not in the call graph", Severity::Warning});
    return {};
  }
  auto cached = cache_.find(m);
  if (cached != cache_.end()) return cached->second;

  // Everything that reaches m, m included.
  std::set<MethodSig> upstream;
  std::vector<MethodSig> work{m};
  upstream.insert(m);
  while (!work.empty()) {
    MethodSig node = work.back();
    work.pop_back();
    auto it = reverse_edges_.find(node);
    if (it == reverse_edges_.end()) continue;
    for (const auto& caller : it->second)
      if (upstream.insert(caller).second) work.push_back(caller);
  }

  std::set<MethodSig> tests;
  for (const auto& entry : graph_->roots) {
    for (const auto& seed : entry.seeds()) {
      if (upstream.count(seed)) {
        tests.insert(entry.test_method);
        break;
      }
    }
  }
  cache_.emplace(m, tests);
  return tests;
}

std::set<MethodSig> reachable_tests(const MethodSig& m, const CallGraph& graph,
                                    std::vector<Diagnostic>* warnings) {
  TestReachability reach(graph);
  return reach.tests_reaching(m, warnings);
}

std::string emit_selection_text(const SelectedSuite& suite) {
  std::ostringstream out;
  for (const auto& test : suite.tests) {
    out << test.str() << " <- ";
    const auto& reasons = suite.reasons.at(test);
    for (size_t i = 0; i < reasons.size(); ++i) {
      if (i) out << "; ";
      out << reasons[i].str();
    }
    out << "\n";
  }
  return out.str();
}

std::string emit_selection_json(const SelectedSuite& suite) {
  nlohmann::json tests = nlohmann::json::array();
  for (const auto& test : suite.tests) {
    nlohmann::json reasons = nlohmann::json::array();
    for (const auto& reason : suite.reasons.at(test)) {
      reasons.push_back({{"rule", change_kind_name(reason.kind)},
                         {"entity", reason.entity_str()}});
    }
    tests.push_back({{"sig", test.str()}, {"reasons", std::move(reasons)}});
  }
  nlohmann::json doc{{"tests", std::move(tests)}};
  return doc.dump(2) + "\n";
}

} // namespace catto
