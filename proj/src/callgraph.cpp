#include "catto/callgraph.hpp"

#include "catto/render.hpp"
#include "catto/typing.hpp"

#include <algorithm>
#include <sstream>

namespace catto {

namespace {

constexpr const char* kInitializerName = "<clinit>";

void append_unique(std::vector<MethodSig>& list, const MethodSig& sig) {
  if (std::find(list.begin(), list.end(), sig) == list.end())
    list.push_back(sig);
}

void sort_unique(std::vector<MethodSig>& list) {
  std::sort(list.begin(), list.end());
  list.erase(std::unique(list.begin(), list.end()), list.end());
}

// Body analysis for graph purposes: uses the retained AST when present,
// otherwise decodes the stored instruction stream.
BodyAnalysis analyze_method_body(const MethodDecl& method, const SnapshotIndex& index) {
  ClassKey owner = method.sig.class_key();
  if (method.body_ast)
    return analyze_body(*method.body_ast, owner, method.param_names,
                        method.sig.param_types, method.sig.return_type, index, "");
  auto decoded = decode_body(method.body.instructions,
                             static_cast<int>(method.sig.param_types.size()),
                             owner.package_name);
  return analyze_body(*decoded, owner, method.param_names, method.sig.param_types,
                      method.sig.return_type, index, "");
}

// Accumulated static-initializer facts of one class.
struct InitializerInfo {
  std::vector<CallSiteInfo> calls;
  std::vector<ClassKey> static_refs;

  // The synthetic node exists only when running the initializers could
  // execute calls, directly or by triggering another class's initializers.
  bool node_needed() const { return !calls.empty() || !static_refs.empty(); }
};

InitializerInfo analyze_class_initializers(const ClassDecl& cls,
                                           const SnapshotIndex& index) {
  InitializerInfo info;
  for (const auto& field : cls.static_fields) {
    if (field.init_instrs.empty())
      continue;
    auto expr = decode_initializer(field.init_instrs, cls.key.package_name);
    BodyAnalysis analysis =
        analyze_initializer(*expr, cls.key, field.declared_type, index, "");
    for (auto& site : analysis.calls)
      info.calls.push_back(std::move(site));
    for (auto& ref : analysis.static_refs)
      info.static_refs.push_back(std::move(ref));
  }
  std::sort(info.static_refs.begin(), info.static_refs.end());
  info.static_refs.erase(
      std::unique(info.static_refs.begin(), info.static_refs.end()),
      info.static_refs.end());
  return info;
}

// Expands call sites to concrete targets. Unresolvable sites warn and add
// nothing, mirroring best-effort static analysis.
std::vector<MethodSig> resolve_sites(const std::vector<CallSiteInfo>& sites,
                                     const std::string& caller,
                                     const SnapshotIndex& index,
                                     std::vector<Diagnostic>* warnings) {
  std::vector<MethodSig> out;
  auto warn = [&](const std::string& msg) {
    if (warnings)
      warnings->push_back({"", 0, 0, msg, Severity::Warning});
  };
  for (const auto& site : sites) {
    if (site.kind == CallSiteInfo::Kind::Construct) {
      const ClassDecl* cls = index.find_class(site.receiver);
      if (!cls) {
        warn("cannot resolve constructor of '" + site.receiver.str() + "' called from " +
             caller);
        continue;
      }
      if (const MethodDecl* ctor = cls->find_method_arity(site.name, site.argc))
        out.push_back(ctor->sig);
      // no declared constructor: implicit empty construction, nothing to run
      continue;
    }
    std::vector<MethodSig> cone = index.dispatch_cone(site.receiver, site.name, site.argc);
    if (cone.empty()) {
      warn("cannot resolve call to '" + site.name + "' (" + std::to_string(site.argc) +
           " args) on '" + site.receiver.str() + "' from " + caller);
      continue;
    }
    for (auto& sig : cone)
      out.push_back(std::move(sig));
  }
  sort_unique(out);
  return out;
}

} // namespace

std::vector<MethodSig> TestEntry::seeds() const {
  std::vector<MethodSig> out;
  for (const auto& sig : prologue)
    append_unique(out, sig);
  append_unique(out, test_method);
  for (const auto& sig : epilogue)
    append_unique(out, sig);
  return out;
}

bool CallGraph::has_node(const MethodSig& sig) const {
  return std::binary_search(nodes.begin(), nodes.end(), sig);
}

const std::vector<MethodSig>& CallGraph::callees(const MethodSig& sig) const {
  static const std::vector<MethodSig> kEmpty;
  auto it = edges.find(sig);
  return it == edges.end() ? kEmpty : it->second;
}

MethodSig class_initializer_sig(const ClassKey& key) {
  return {key.package_name, key.class_name, kInitializerName, {}, "void"};
}

bool is_initializer_sig(const MethodSig& sig) {
  return sig.method_name == kInitializerName;
}

std::vector<TestEntry> synthesize_test_entries(const ProjectSnapshot& snapshot) {
  SnapshotIndex index(snapshot);
  std::vector<TestEntry> entries;
  for (const auto& [key, cls] : snapshot.classes) {
    if (!cls.is_test_class)
      continue;
    // superclass-first chain of the test class
    std::vector<ClassKey> chain = index.ancestry(key);
    std::reverse(chain.begin(), chain.end());

    std::vector<MethodSig> prologue;
    // A fresh test instance is built per test method; a declared zero-arg
    // constructor runs before any fixture, so it seeds reachability too.
    // Constructors are class-local, never inherited.
    if (const MethodDecl* ctor = cls.find_method_arity(kConstructorName, 0))
      if (ctor->kind == MethodKind::Constructor)
        prologue.push_back(ctor->sig);
    for (const auto& ancestor : chain) {
      const ClassDecl* decl = index.find_class(ancestor);
      if (!decl)
        continue;
      for (const auto& method : decl->methods) {
        if (method.kind != MethodKind::FixtureBefore)
          continue;
        // the test instance dispatches to the most-derived override
        const MethodDecl* resolved = index.resolve_up(
            key, method.sig.method_name, method.sig.param_types.size());
        append_unique(prologue, resolved ? resolved->sig : method.sig);
      }
    }
    std::vector<MethodSig> epilogue;
    for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
      const ClassDecl* decl = index.find_class(*it);
      if (!decl)
        continue;
      for (const auto& method : decl->methods) {
        if (method.kind != MethodKind::FixtureAfter)
          continue;
        const MethodDecl* resolved = index.resolve_up(
            key, method.sig.method_name, method.sig.param_types.size());
        append_unique(epilogue, resolved ? resolved->sig : method.sig);
      }
    }

    for (const auto& method : cls.methods) {
      if (method.kind != MethodKind::TestMethod)
        continue;
      TestEntry entry;
      entry.test_method = method.sig;
      entry.prologue = prologue;
      entry.epilogue = epilogue;
      entries.push_back(std::move(entry));
    }
  }
  std::sort(entries.begin(), entries.end(),
            [](const TestEntry& a, const TestEntry& b) {
              return a.test_method < b.test_method;
            });
  return entries;
}

std::vector<MethodSig> resolve_method_calls(const MethodDecl& method,
                                            const SnapshotIndex& index,
                                            std::vector<Diagnostic>* warnings) {
  if (method.explicit_calls) {
    std::vector<MethodSig> out = *method.explicit_calls;
    sort_unique(out);
    return out;
  }
  if (!method.has_body())
    return {};
  BodyAnalysis analysis = analyze_method_body(method, index);
  return resolve_sites(analysis.calls, method.sig.str(), index, warnings);
}

CallGraph build_call_graph(const ProjectSnapshot& snapshot,
                           const std::vector<TestEntry>& entries) {
  SnapshotIndex index(snapshot);
  CallGraph graph;
  graph.roots = entries;

  // initializer nodes first: methods need to know which classes have one
  std::map<ClassKey, InitializerInfo> initializers;
  for (const auto& [key, cls] : snapshot.classes) {
    InitializerInfo info = analyze_class_initializers(cls, index);
    if (info.node_needed())
      initializers.emplace(key, std::move(info));
  }
  auto has_initializer = [&](const ClassKey& key) {
    return initializers.count(key) != 0;
  };

  for (const auto& [key, cls] : snapshot.classes)
    for (const auto& method : cls.methods)
      graph.nodes.push_back(method.sig);
  for (const auto& [key, info] : initializers)
    graph.nodes.push_back(class_initializer_sig(key));
  sort_unique(graph.nodes);

  for (const auto& [key, cls] : snapshot.classes) {
    for (const auto& method : cls.methods) {
      std::vector<MethodSig> targets;
      if (method.explicit_calls) {
        targets = *method.explicit_calls;
      } else if (method.has_body()) {
        BodyAnalysis analysis = analyze_method_body(method, index);
        targets =
            resolve_sites(analysis.calls, method.sig.str(), index, &graph.warnings);
        for (const auto& ref : analysis.static_refs)
          if (has_initializer(ref))
            targets.push_back(class_initializer_sig(ref));
      }
      // entering any method of the class runs its static initializers
      if (has_initializer(key))
        targets.push_back(class_initializer_sig(key));
      sort_unique(targets);
      if (!targets.empty())
        graph.edges[method.sig] = std::move(targets);
    }
  }

  for (const auto& [key, info] : initializers) {
    MethodSig node = class_initializer_sig(key);
    std::vector<MethodSig> targets =
        resolve_sites(info.calls, node.str(), index, &graph.warnings);
    for (const auto& ref : info.static_refs)
      if (!(ref == key) && has_initializer(ref))
        targets.push_back(class_initializer_sig(ref));
    sort_unique(targets);
    if (!targets.empty())
      graph.edges[node] = std::move(targets);
  }

  return graph;
}

CoverageMap coverage_map(const CallGraph& graph) {
  const size_t n = graph.nodes.size();
  std::map<MethodSig, int> node_index;
  for (size_t i = 0; i < n; ++i)
    node_index.emplace(graph.nodes[i], static_cast<int>(i));

  std::vector<std::vector<int>> adj(n);
  for (const auto& [caller, callees] : graph.edges) {
    auto from = node_index.find(caller);
    if (from == node_index.end())
      continue;
    for (const auto& callee : callees) {
      auto to = node_index.find(callee);
      if (to != node_index.end())
        adj[from->second].push_back(to->second);
    }
  }

  // Tarjan, iterative. Completion order guarantees scc[callee] < scc[caller]
  // for cross-component edges.
  std::vector<int> scc(n, -1), low(n), disc(n, -1), stack_mark(n, 0);
  std::vector<int> tarjan_stack;
  int timer = 0, scc_count = 0;
  struct Frame {
    int node;
    size_t edge;
  };
  for (size_t start = 0; start < n; ++start) {
    if (disc[start] != -1)
      continue;
    std::vector<Frame> frames{{static_cast<int>(start), 0}};
    while (!frames.empty()) {
      Frame& frame = frames.back();
      int u = frame.node;
      if (frame.edge == 0) {
        disc[u] = low[u] = timer++;
        tarjan_stack.push_back(u);
        stack_mark[u] = 1;
      }
      if (frame.edge < adj[u].size()) {
        int v = adj[u][frame.edge++];
        if (disc[v] == -1)
          frames.push_back({v, 0});
        else if (stack_mark[v])
          low[u] = std::min(low[u], disc[v]);
        continue;
      }
      if (low[u] == disc[u]) {
        while (true) {
          int w = tarjan_stack.back();
          tarjan_stack.pop_back();
          stack_mark[w] = 0;
          scc[w] = scc_count;
          if (w == u)
            break;
        }
        ++scc_count;
      }
      frames.pop_back();
      if (!frames.empty())
        low[frames.back().node] = std::min(low[frames.back().node], low[u]);
    }
  }

  const size_t n_tests = graph.roots.size();
  const size_t words = (n_tests + 63) / 64;
  std::vector<std::vector<uint64_t>> bits(scc_count, std::vector<uint64_t>(words, 0));
  for (size_t t = 0; t < n_tests; ++t)
    for (const auto& seed : graph.roots[t].seeds()) {
      auto it = node_index.find(seed);
      if (it != node_index.end())
        bits[scc[it->second]][t / 64] |= uint64_t{1} << (t % 64);
    }

  std::vector<std::vector<int>> scc_adj(scc_count);
  for (size_t u = 0; u < n; ++u)
    for (int v : adj[u])
      if (scc[u] != scc[v])
        scc_adj[scc[u]].push_back(scc[v]);

  // callers finish later, so descending id order is topological
  for (int s = scc_count - 1; s >= 0; --s)
    for (int t : scc_adj[s])
      for (size_t w = 0; w < words; ++w)
        bits[t][w] |= bits[s][w];

  CoverageMap cov;
  for (size_t i = 0; i < n; ++i) {
    std::set<MethodSig> tests;
    const auto& b = bits[scc[i]];
    for (size_t t = 0; t < n_tests; ++t)
      if (b[t / 64] & (uint64_t{1} << (t % 64)))
        tests.insert(graph.roots[t].test_method);
    cov.emplace(graph.nodes[i], std::move(tests));
  }
  return cov;
}

std::string emit_callgraph_text(const CallGraph& graph) {
  std::ostringstream out;
  for (const auto& [caller, callees] : graph.edges)
    for (const auto& callee : callees)
      out << caller.str() << " -> " << callee.str() << "\n";
  return out.str();
}

std::string emit_callgraph_dot(const CallGraph& graph) {
  std::ostringstream out;
  out << "digraph callgraph {\n";
  out << "  rankdir=LR;\n";
  for (const auto& node : graph.nodes)
    out << "  \"" << node.str() << "\";\n";
  for (const auto& [caller, callees] : graph.edges)
    for (const auto& callee : callees)
      out << "  \"" << caller.str() << "\" -> \"" << callee.str() << "\";\n";
  out << "}\n";
  return out.str();
}

std::string coverage_to_text(const CoverageMap& cov) {
  std::ostringstream out;
  for (const auto& [method, tests] : cov) {
    out << method.str() << " =>";
    bool first = true;
    for (const auto& test : tests) {
      out << (first ? " " : ", ") << test.str();
      first = false;
    }
    out << "\n";
  }
  return out.str();
}

std::optional<CoverageMap> coverage_from_text(const std::string& text,
                                              std::string* error) {
  CoverageMap cov;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  auto fail = [&](const std::string& msg) -> std::optional<CoverageMap> {
    if (error)
      *error = "line " + std::to_string(line_no) + ": " + msg;
    return std::nullopt;
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty())
      continue;
    size_t sep = line.find(" =>");
    if (sep == std::string::npos)
      return fail("missing ' =>' separator");
    auto method = parse_method_sig(line.substr(0, sep));
    if (!method)
      return fail("bad method sig '" + line.substr(0, sep) + "'");
    std::set<MethodSig> tests;
    size_t pos = sep + 3;
    while (pos < line.size()) {
      if (line[pos] == ' ' || line[pos] == ',') {
        ++pos;
        continue;
      }
      size_t end = line.find(',', pos);
      if (end == std::string::npos)
        end = line.size();
      auto test = parse_method_sig(line.substr(pos, end - pos));
      if (!test)
        return fail("bad test sig '" + line.substr(pos, end - pos) + "'");
      tests.insert(*test);
      pos = end;
    }
    cov.emplace(*method, std::move(tests));
  }
  return cov;
}

} // namespace catto
