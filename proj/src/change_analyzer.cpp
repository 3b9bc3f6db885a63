#include "catto/change_analyzer.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace catto {

const char* change_kind_name(ChangeKind kind) {
  switch (kind) {
    case ChangeKind::MethodAdded: return "method_added";
    case ChangeKind::MethodModified: return "method_modified";
    case ChangeKind::MethodDeleted: return "method_deleted";
    case ChangeKind::MethodDeletedInHierarchy: return "method_deleted_in_hierarchy";
    case ChangeKind::ConstructorChanged: return "constructor_changed";
    case ChangeKind::ProductionStaticFieldChanged: return "production_static_field_changed";
    case ChangeKind::TestMethodAdded: return "test_method_added";
    case ChangeKind::TestMethodModified: return "test_method_modified";
    case ChangeKind::TestClassInfraModified: return "test_class_infra_modified";
  }
  return "?";
}

std::string Mark::entity_str() const {
  if (method) return method->str();
  if (field) return field->first.str() + "." + field->second;
  if (cls) return cls->str();
  return "?";
}

std::string Mark::str() const {
  return std::string(change_kind_name(kind)) + " " + entity_str();
}

bool is_cosmetic_pair(const NormalizedBody& prev_body, const NormalizedBody& cur_body) {
  return prev_body.fingerprint == cur_body.fingerprint;
}

std::vector<MethodSig> hierarchy_counterparts(const SnapshotIndex& index,
                                              const ClassKey& cls,
                                              const std::string& method_name,
                                              const std::vector<std::string>& param_types) {
  std::vector<ClassKey> related;
  if (index.snapshot().find_class(cls)) {
    for (const auto& anc : index.ancestry(cls))
      if (!(anc == cls)) related.push_back(anc);
    for (const auto& desc : index.descendants(cls))
      if (!(desc == cls)) related.push_back(desc);
  } else {
    // The class itself vanished; without a hierarchy position every class is
    // a candidate. Over-approximating keeps the selection safe.
    for (const auto& [key, decl] : index.snapshot().classes) {
      (void)decl;
      related.push_back(key);
    }
  }

  std::vector<MethodSig> out;
  for (const auto& key : related) {
    const ClassDecl* decl = index.snapshot().find_class(key);
    if (!decl) continue;
    for (const auto& method : decl->methods) {
      if (method.sig.method_name == method_name && method.sig.param_types == param_types)
        out.push_back(method.sig);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

namespace {

Mark method_mark(ChangeKind kind, const MethodSig& sig) {
  Mark m;
  m.kind = kind;
  m.method = sig;
  return m;
}

Mark field_mark(ChangeKind kind, const ClassKey& cls, const std::string& field) {
  Mark m;
  m.kind = kind;
  m.field = std::make_pair(cls, field);
  return m;
}

Mark class_mark(ChangeKind kind, const ClassKey& cls) {
  Mark m;
  m.kind = kind;
  m.cls = cls;
  return m;
}

class Differ {
 public:
  Differ(const ProjectSnapshot& prev, const ProjectSnapshot& cur)
      : prev_(prev), cur_(cur), cur_index_(cur) {}

  ChangeSet run() {
    diff_methods();
    diff_fields();
    diff_superclasses();
    return std::move(changes_);
  }

 private:
  bool class_is_test(const ClassKey& key) const {
    if (const ClassDecl* c = cur_.find_class(key)) return c->is_test_class;
    if (const ClassDecl* c = prev_.find_class(key)) return c->is_test_class;
    return false;
  }

  void mark_constructor(const ClassKey& cls) {
    if (class_is_test(cls))
      changes_.marks.insert(class_mark(ChangeKind::TestClassInfraModified, cls));
    else
      changes_.marks.insert(class_mark(ChangeKind::ConstructorChanged, cls));
  }

  void mark_added(const MethodDecl& decl) {
    const ClassKey cls = decl.sig.class_key();
    switch (decl.kind) {
      case MethodKind::Production:
        changes_.marks.insert(method_mark(ChangeKind::MethodAdded, decl.sig));
        break;
      case MethodKind::Constructor:
        mark_constructor(cls);
        break;
      case MethodKind::TestMethod:
        changes_.marks.insert(method_mark(ChangeKind::TestMethodAdded, decl.sig));
        break;
      case MethodKind::FixtureBefore:
      case MethodKind::FixtureAfter:
        changes_.marks.insert(class_mark(ChangeKind::TestClassInfraModified, cls));
        break;
    }
  }

  void mark_modified(const MethodDecl& decl) {
    const ClassKey cls = decl.sig.class_key();
    switch (decl.kind) {
      case MethodKind::Production:
        changes_.marks.insert(method_mark(ChangeKind::MethodModified, decl.sig));
        break;
      case MethodKind::Constructor:
        mark_constructor(cls);
        break;
      case MethodKind::TestMethod:
        changes_.marks.insert(method_mark(ChangeKind::TestMethodModified, decl.sig));
        break;
      case MethodKind::FixtureBefore:
      case MethodKind::FixtureAfter:
        changes_.marks.insert(class_mark(ChangeKind::TestClassInfraModified, cls));
        break;
    }
  }

  void mark_deleted(const MethodDecl& decl) {
    const ClassKey cls = decl.sig.class_key();
    switch (decl.kind) {
      case MethodKind::Production: {
        auto counterparts = hierarchy_counterparts(cur_index_, cls, decl.sig.method_name,
                                                   decl.sig.param_types);
        changes_.marks.insert(method_mark(counterparts.empty()
                                              ? ChangeKind::MethodDeleted
                                              : ChangeKind::MethodDeletedInHierarchy,
                                          decl.sig));
        break;
      }
      case MethodKind::Constructor:
        mark_constructor(cls);
        break;
      case MethodKind::TestMethod:
        // Selecting from the previous coverage of a removed test picks up any
        // surviving tests that invoked it; the removed test itself is
        // filtered out because selections are drawn from current tests only.
        changes_.marks.insert(method_mark(ChangeKind::MethodDeleted, decl.sig));
        break;
      case MethodKind::FixtureBefore:
      case MethodKind::FixtureAfter:
        changes_.marks.insert(class_mark(ChangeKind::TestClassInfraModified, cls));
        break;
    }
  }

  void diff_methods() {
    std::map<MethodSig, std::pair<const MethodDecl*, const MethodDecl*>> by_sig;
    for (const auto& [key, decl] : prev_.classes)
      for (const auto& m : decl.methods) by_sig[m.sig].first = &m;
    for (const auto& [key, decl] : cur_.classes)
      for (const auto& m : decl.methods) by_sig[m.sig].second = &m;

    for (const auto& [sig, pair] : by_sig) {
      const MethodDecl* p = pair.first;
      const MethodDecl* c = pair.second;
      if (p && c) {
        if (p->kind != c->kind) {
          // Same signature, different role (an annotation came or went).
          // Treat it as the old method ending and a new one starting so each
          // side's selection rule applies.
          mark_deleted(*p);
          mark_added(*c);
        } else if (p->body.fingerprint != c->body.fingerprint) {
          mark_modified(*c);
        }
      } else if (p) {
        mark_deleted(*p);
      } else {
        mark_added(*c);
      }
    }
  }

  void diff_fields() {
    std::map<std::pair<ClassKey, std::string>, std::pair<const FieldDecl*, const FieldDecl*>>
        by_key;
    for (const auto& [key, decl] : prev_.classes)
      for (const auto& f : decl.static_fields) by_key[{key, f.name}].first = &f;
    for (const auto& [key, decl] : cur_.classes)
      for (const auto& f : decl.static_fields) by_key[{key, f.name}].second = &f;

    for (const auto& [key, pair] : by_key) {
      const FieldDecl* p = pair.first;
      const FieldDecl* c = pair.second;
      bool changed = !p || !c || p->fingerprint != c->fingerprint;
      if (!changed) continue;
      if (class_is_test(key.first))
        changes_.marks.insert(class_mark(ChangeKind::TestClassInfraModified, key.first));
      else
        changes_.marks.insert(
            field_mark(ChangeKind::ProductionStaticFieldChanged, key.first, key.second));
    }
  }

  void diff_superclasses() {
    for (const auto& [key, cur_decl] : cur_.classes) {
      const ClassDecl* prev_decl = prev_.find_class(key);
      if (!prev_decl) continue;
      bool same = prev_decl->superclass == cur_decl.superclass &&
                  prev_decl->superclass_external == cur_decl.superclass_external;
      if (same) continue;
      // Re-parenting changes what the class inherits and how calls through it
      // dispatch even when no body changed; treat every declared method as
      // modified so their coverage drives the selection.
      for (const auto& m : cur_decl.methods) mark_modified(m);
      if (cur_decl.methods.empty() && !cur_decl.static_fields.empty()) {
        if (cur_decl.is_test_class)
          changes_.marks.insert(class_mark(ChangeKind::TestClassInfraModified, key));
        else
          for (const auto& f : cur_decl.static_fields)
            changes_.marks.insert(
                field_mark(ChangeKind::ProductionStaticFieldChanged, key, f.name));
      }
    }
  }

  const ProjectSnapshot& prev_;
  const ProjectSnapshot& cur_;
  SnapshotIndex cur_index_;
  ChangeSet changes_;
};

} // namespace

ChangeSet diff_snapshots(const ProjectSnapshot& prev, const ProjectSnapshot& cur) {
  return Differ(prev, cur).run();
}

std::string emit_changes_text(const ChangeSet& changes) {
  std::ostringstream out;
  for (const auto& mark : changes.marks) out << mark.str() << "\n";
  return out.str();
}

} // namespace catto
