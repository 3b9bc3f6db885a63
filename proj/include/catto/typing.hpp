#pragma once

#include "catto/ast.hpp"
#include "catto/diagnostics.hpp"
#include "catto/project_model.hpp"

#include <string>
#include <vector>

namespace catto {

// Static type of an expression. Class types remember whether the class lives
// outside the snapshot (allowed only under --allow-external); Unknown arises
// from members of external classes and silences downstream checks.
struct StaticType {
  enum class Kind { Int, Bool, String, Void, Class, Unknown };
  Kind kind = Kind::Unknown;
  ClassKey cls;
  bool is_external = false;

  static StaticType builtin(Kind kind) { return {kind, {}, false}; }
  static StaticType of_class(ClassKey key, bool external) {
    return {Kind::Class, std::move(key), external};
  }
  static StaticType unknown() { return {}; }

  bool is_class() const { return kind == Kind::Class; }
  std::string str() const;
};

// Parses a canonical type name ("int", "pkg.Cls") against a snapshot.
StaticType type_from_canonical(const std::string& name, const SnapshotIndex& index);

// One call site found in a body, with the statically declared receiver class.
// Dispatch resolution (the class-hierarchy cone) happens later in the graph.
struct CallSiteInfo {
  enum class Kind {
    Self,     // f(...): receiver is the enclosing class
    Virtual,  // x.f(...): receiver is x's declared class
    Construct // new C(...): target is C's constructor
  };
  Kind kind = Kind::Self;
  ClassKey receiver;
  std::string name;
  size_t argc = 0;

  auto operator<=>(const CallSiteInfo&) const = default;
};

// Everything a body analysis produces: typed call sites, the classes whose
// static state the body touches (static reads/writes resolve to the declaring
// class; construction touches the constructed class), and diagnostics.
struct BodyAnalysis {
  std::vector<CallSiteInfo> calls;
  std::vector<ClassKey> static_refs;
  std::vector<Diagnostic> diagnostics;
};

// Type-checks one method body and extracts its call sites. `owner` is the
// enclosing class (self-call resolution starts there), `param_names` and
// `param_types` describe slots 0..n-1. Works on freshly parsed ASTs and on
// bodies decoded from instruction streams alike.
BodyAnalysis analyze_body(const ast::Block& body, const ClassKey& owner,
                          const std::vector<std::string>& param_names,
                          const std::vector<std::string>& param_types,
                          const std::optional<std::string>& return_type,
                          const SnapshotIndex& index, const std::string& file_path);

// Same analysis for a static-field initializer expression.
BodyAnalysis analyze_initializer(const ast::Expr& initializer, const ClassKey& owner,
                                 const std::string& declared_type,
                                 const SnapshotIndex& index,
                                 const std::string& file_path);

} // namespace catto
