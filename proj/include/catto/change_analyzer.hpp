#pragma once

#include "catto/normalized_body.hpp"
#include "catto/project_model.hpp"

#include <optional>
#include <set>
#include <string>
#include <vector>

namespace catto {

enum class ChangeKind {
  MethodAdded,
  MethodModified,
  MethodDeleted,
  MethodDeletedInHierarchy,
  ConstructorChanged,
  ProductionStaticFieldChanged,
  TestMethodAdded,
  TestMethodModified,
  TestClassInfraModified,
};

const char* change_kind_name(ChangeKind kind);

// One marked entity. Exactly one of method / field / cls is set: method marks
// carry the MethodSig, static-field marks carry (class, field), class-level
// marks (constructor, test-class infra) carry the class key.
struct Mark {
  ChangeKind kind;
  std::optional<MethodSig> method;
  std::optional<std::pair<ClassKey, std::string>> field;
  std::optional<ClassKey> cls;

  auto operator<=>(const Mark&) const = default;

  std::string entity_str() const;
  std::string str() const; // "kind entity"
};

struct ChangeSet {
  std::set<Mark> marks;

  bool empty() const { return marks.empty(); }
};

// Compares two snapshots method-by-method under the sig+fingerprint identity
// rule and classifies every difference by method kind and class role. A
// method whose kind changed counts as deleted-then-added. A class whose
// superclass link changed has all its declared methods marked modified
// (dispatch through the class may change even when no body did).
ChangeSet diff_snapshots(const ProjectSnapshot& prev, const ProjectSnapshot& cur);

bool is_cosmetic_pair(const NormalizedBody& prev_body, const NormalizedBody& cur_body);

// Methods declared by ancestors or descendants of cls (in the index's
// snapshot) matching name and parameter types; return type ignored. When cls
// is absent from that snapshot, every class is searched (conservative).
// Shared by deleted-in-hierarchy detection and its selection rule.
std::vector<MethodSig> hierarchy_counterparts(const SnapshotIndex& index,
                                              const ClassKey& cls,
                                              const std::string& method_name,
                                              const std::vector<std::string>& param_types);

// One mark per line: "kind entity".
std::string emit_changes_text(const ChangeSet& changes);

} // namespace catto
