#include "catto/project_model.hpp"

#include <algorithm>

namespace catto {

const MethodDecl* ClassDecl::find_method(const std::string& name,
                                         const std::vector<std::string>& param_types) const {
  for (const auto& method : methods)
    if (method.sig.method_name == name && method.sig.param_types == param_types)
      return &method;
  return nullptr;
}

const MethodDecl* ClassDecl::find_method_arity(const std::string& name,
                                               size_t arity) const {
  for (const auto& method : methods)
    if (method.sig.method_name == name && method.sig.param_types.size() == arity)
      return &method;
  return nullptr;
}

const FieldDecl* ClassDecl::find_field(const std::string& name) const {
  for (const auto& field : static_fields)
    if (field.name == name)
      return &field;
  return nullptr;
}

const ClassDecl* ProjectSnapshot::find_class(const ClassKey& key) const {
  auto it = classes.find(key);
  return it == classes.end() ? nullptr : &it->second;
}

const MethodDecl* ProjectSnapshot::find_method(const MethodSig& sig) const {
  const ClassDecl* cls = find_class(sig.class_key());
  if (!cls)
    return nullptr;
  for (const auto& method : cls->methods)
    if (method.sig == sig)
      return &method;
  return nullptr;
}

bool ProjectSnapshot::has_bodies() const {
  for (const auto& [key, cls] : classes)
    for (const auto& method : cls.methods)
      if (!method.has_body())
        return false;
  return true;
}

SnapshotIndex::SnapshotIndex(const ProjectSnapshot& snapshot) : snapshot_(&snapshot) {
  for (const auto& [key, cls] : snapshot.classes)
    if (cls.superclass && !cls.superclass_external)
      subclasses_[*cls.superclass].push_back(key);
  for (auto& [key, subs] : subclasses_)
    std::sort(subs.begin(), subs.end());
}

const ClassDecl* SnapshotIndex::find_class(const ClassKey& key) const {
  return snapshot_->find_class(key);
}

const MethodDecl* SnapshotIndex::resolve_up(const ClassKey& key, const std::string& name,
                                            size_t arity) const {
  const ClassDecl* cls = find_class(key);
  while (cls) {
    if (const MethodDecl* method = cls->find_method_arity(name, arity))
      return method;
    if (!cls->superclass || cls->superclass_external)
      return nullptr;
    cls = find_class(*cls->superclass);
  }
  return nullptr;
}

const FieldDecl* SnapshotIndex::resolve_field_up(const ClassKey& key,
                                                 const std::string& name,
                                                 const ClassKey** owner) const {
  const ClassDecl* cls = find_class(key);
  while (cls) {
    if (const FieldDecl* field = cls->find_field(name)) {
      if (owner)
        *owner = &cls->key;
      return field;
    }
    if (!cls->superclass || cls->superclass_external)
      return nullptr;
    cls = find_class(*cls->superclass);
  }
  return nullptr;
}

std::vector<ClassKey> SnapshotIndex::cone_classes(const ClassKey& key) const {
  std::vector<ClassKey> out;
  std::vector<ClassKey> work{key};
  while (!work.empty()) {
    ClassKey cur = work.back();
    work.pop_back();
    out.push_back(cur);
    auto it = subclasses_.find(cur);
    if (it != subclasses_.end())
      for (const auto& sub : it->second)
        work.push_back(sub);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<ClassKey> SnapshotIndex::descendants(const ClassKey& key) const {
  std::vector<ClassKey> out = cone_classes(key);
  out.erase(std::remove(out.begin(), out.end(), key), out.end());
  return out;
}

std::vector<ClassKey> SnapshotIndex::ancestry(const ClassKey& key) const {
  std::vector<ClassKey> out;
  const ClassDecl* cls = find_class(key);
  while (cls) {
    out.push_back(cls->key);
    if (!cls->superclass || cls->superclass_external)
      break;
    cls = find_class(*cls->superclass);
  }
  return out;
}

std::vector<MethodSig> SnapshotIndex::dispatch_cone(const ClassKey& key,
                                                    const std::string& name,
                                                    size_t arity) const {
  std::vector<MethodSig> out;
  if (const MethodDecl* inherited = resolve_up(key, name, arity))
    out.push_back(inherited->sig);
  for (const auto& sub : descendants(key)) {
    const ClassDecl* cls = find_class(sub);
    if (!cls)
      continue;
    if (const MethodDecl* override_method = cls->find_method_arity(name, arity))
      out.push_back(override_method->sig);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

} // namespace catto
