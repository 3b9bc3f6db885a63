#pragma once

#include "catto/ast.hpp"
#include "catto/method_sig.hpp"
#include "catto/normalized_body.hpp"

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace catto {

// Static field of a class. The fingerprint folds the declared type into the
// normalized-initializer digest, so retyping counts as a modification.
struct FieldDecl {
  std::string name;
  std::string declared_type; // canonical spelling
  bool is_static = true;
  uint64_t fingerprint = 0;
  std::vector<Instruction> init_instrs; // empty when there is no initializer

  bool operator==(const FieldDecl&) const = default;
};

// One method of one class. Identity is the sig; change detection is the body
// fingerprint. param_names and body_ast are construction-time conveniences
// (cosmetic / interpreter input) and are excluded from equality;
// explicit_calls carries pre-resolved edges for snapshots ingested from a
// facts document, which have no bodies.
struct MethodDecl {
  MethodSig sig;
  MethodKind kind = MethodKind::Production;
  NormalizedBody body;
  std::vector<std::string> param_names;
  std::shared_ptr<const ast::Block> body_ast;
  std::optional<std::vector<MethodSig>> explicit_calls;

  // Facts-ingested methods carry a fingerprint but no instructions. Every
  // real body has at least its root block instruction.
  bool has_body() const { return !body.instructions.empty(); }

  bool operator==(const MethodDecl& other) const {
    return sig == other.sig && kind == other.kind && body == other.body &&
           explicit_calls == other.explicit_calls;
  }
};

struct ClassDecl {
  ClassKey key;
  std::optional<ClassKey> superclass;
  bool superclass_external = false; // superclass named but outside the snapshot
  bool is_test_class = false;
  std::vector<FieldDecl> static_fields; // sorted by name
  std::vector<MethodDecl> methods;      // sorted by sig

  bool operator==(const ClassDecl& other) const {
    return key == other.key && superclass == other.superclass &&
           superclass_external == other.superclass_external &&
           is_test_class == other.is_test_class &&
           static_fields == other.static_fields && methods == other.methods;
  }

  const MethodDecl* find_method(const std::string& name,
                                const std::vector<std::string>& param_types) const;
  const MethodDecl* find_method_arity(const std::string& name, size_t arity) const;
  const FieldDecl* find_field(const std::string& name) const;
};

// One fully normalized version of a project.
struct ProjectSnapshot {
  std::string version_label;
  std::map<ClassKey, ClassDecl> classes;

  bool operator==(const ProjectSnapshot&) const = default;

  const ClassDecl* find_class(const ClassKey& key) const;
  const MethodDecl* find_method(const MethodSig& sig) const;

  // True when every method carries instructions (parseable origin); facts
  // ingestion produces fingerprint-only bodies that cannot be executed.
  bool has_bodies() const;
};

// Read-side helper over an immutable snapshot: hierarchy navigation and
// class-hierarchy-analysis dispatch cones. Holds pointers into the snapshot,
// which must outlive the index.
class SnapshotIndex {
public:
  explicit SnapshotIndex(const ProjectSnapshot& snapshot);

  const ProjectSnapshot& snapshot() const { return *snapshot_; }
  const ClassDecl* find_class(const ClassKey& key) const;

  // Walks key's superclass chain (inclusive) for the nearest (name, arity)
  // match; null when no ancestor declares it.
  const MethodDecl* resolve_up(const ClassKey& key, const std::string& name,
                               size_t arity) const;
  const FieldDecl* resolve_field_up(const ClassKey& key, const std::string& name,
                                    const ClassKey** owner = nullptr) const;

  // key itself plus all transitive subclasses, sorted.
  std::vector<ClassKey> cone_classes(const ClassKey& key) const;
  // Strict transitive subclasses, sorted.
  std::vector<ClassKey> descendants(const ClassKey& key) const;
  // Superclass chain starting at key, root last. Stops at external edges.
  std::vector<ClassKey> ancestry(const ClassKey& key) const;

  // Dispatch targets of `x.name(arity args)` where x's declared class is key:
  // the inherited resolution for key plus every matching override declared in
  // key's descendants. Sorted, deduplicated.
  std::vector<MethodSig> dispatch_cone(const ClassKey& key, const std::string& name,
                                       size_t arity) const;

private:
  const ProjectSnapshot* snapshot_;
  std::map<ClassKey, std::vector<ClassKey>> subclasses_; // direct only
};

} // namespace catto
