#include "catto/facts.hpp"

#include "catto/callgraph.hpp"
#include "catto/fingerprint.hpp"
#include "catto/render.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace catto {

namespace {

using nlohmann::json;

struct Validator {
  std::vector<Diagnostic> diags;

  void fail(const std::string& path, const std::string& why) {
    diags.push_back({"", 0, 0, path + ": " + why, Severity::Error});
  }

  const json* object(const json& parent, const std::string& path) {
    if (!parent.is_object()) {
      fail(path, "expected an object");
      return nullptr;
    }
    return &parent;
  }

  const json* field(const json& obj, const std::string& path, const char* key,
                    bool required = true) {
    auto it = obj.find(key);
    if (it == obj.end()) {
      if (required) fail(path + "." + key, "missing");
      return nullptr;
    }
    return &*it;
  }

  std::optional<std::string> str_field(const json& obj, const std::string& path,
                                       const char* key, bool required = true) {
    const json* v = field(obj, path, key, required);
    if (!v) return std::nullopt;
    if (!v->is_string()) {
      fail(path + "." + key, "expected a string");
      return std::nullopt;
    }
    return v->get<std::string>();
  }

  std::optional<bool> bool_field(const json& obj, const std::string& path, const char* key) {
    const json* v = field(obj, path, key);
    if (!v) return std::nullopt;
    if (!v->is_boolean()) {
      fail(path + "." + key, "expected a boolean");
      return std::nullopt;
    }
    return v->get<bool>();
  }

  const json* array_field(const json& obj, const std::string& path, const char* key) {
    const json* v = field(obj, path, key);
    if (!v) return nullptr;
    if (!v->is_array()) {
      fail(path + "." + key, "expected an array");
      return nullptr;
    }
    return v;
  }

  std::optional<uint64_t> fingerprint_field_of(const json& obj, const std::string& path,
                                               const char* key) {
    auto text = str_field(obj, path, key);
    if (!text) return std::nullopt;
    auto fp = fingerprint_from_hex(*text);
    if (!fp) {
      fail(path + "." + key, "expected a 16-digit lowercase hex fingerprint");
      return std::nullopt;
    }
    return fp;
  }
};

std::optional<ClassKey> parse_class_ref(const std::string& text) {
  size_t dot = text.rfind('.');
  if (dot == std::string::npos || dot == 0 || dot + 1 >= text.size()) return std::nullopt;
  return ClassKey{text.substr(0, dot), text.substr(dot + 1)};
}

struct PendingCall {
  std::string path;
  MethodSig target;
};

} // namespace

SnapshotResult ingest_facts(const std::string& json_text) {
  SnapshotResult result;
  Validator v;

  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    v.fail("document", std::string("not valid JSON (") + e.what() + ")");
    result.diagnostics = std::move(v.diags);
    return result;
  }

  ProjectSnapshot snapshot;
  std::vector<PendingCall> pending_calls;
  std::set<MethodSig> declared;

  if (!v.object(doc, "document")) {
    result.diagnostics = std::move(v.diags);
    return result;
  }
  if (auto label = v.str_field(doc, "document", "version_label")) snapshot.version_label = *label;

  const json* classes = v.array_field(doc, "document", "classes");
  if (classes) {
    for (size_t ci = 0; ci < classes->size(); ++ci) {
      std::ostringstream pb;
      pb << "classes[" << ci << "]";
      const std::string cpath = pb.str();
      const json& cj = (*classes)[ci];
      if (!v.object(cj, cpath)) continue;

      ClassDecl decl;
      auto package = v.str_field(cj, cpath, "package");
      auto name = v.str_field(cj, cpath, "name");
      if (!package || !name) continue;
      decl.key = {*package, *name};
      if (auto super = v.str_field(cj, cpath, "superclass", false)) {
        auto key = parse_class_ref(*super);
        if (!key) {
          v.fail(cpath + ".superclass", "expected \"package.ClassName\"");
          continue;
        }
        decl.superclass = *key;
      }
      auto is_test = v.bool_field(cj, cpath, "is_test_class");
      if (!is_test) continue;
      decl.is_test_class = *is_test;

      if (const json* fields = v.array_field(cj, cpath, "static_fields")) {
        for (size_t fi = 0; fi < fields->size(); ++fi) {
          std::ostringstream fb;
          fb << cpath << ".static_fields[" << fi << "]";
          const std::string fpath = fb.str();
          const json& fj = (*fields)[fi];
          if (!v.object(fj, fpath)) continue;
          FieldDecl fd;
          auto fname = v.str_field(fj, fpath, "name");
          auto fp = v.fingerprint_field_of(fj, fpath, "fingerprint");
          if (!fname || !fp) continue;
          fd.name = *fname;
          fd.fingerprint = *fp;
          if (decl.find_field(fd.name))
            v.fail(fpath + ".name", "duplicate field '" + fd.name + "'");
          else
            decl.static_fields.push_back(std::move(fd));
        }
      }

      if (const json* methods = v.array_field(cj, cpath, "methods")) {
        for (size_t mi = 0; mi < methods->size(); ++mi) {
          std::ostringstream mb;
          mb << cpath << ".methods[" << mi << "]";
          const std::string mpath = mb.str();
          const json& mj = (*methods)[mi];
          if (!v.object(mj, mpath)) continue;

          MethodDecl md;
          auto sig_text = v.str_field(mj, mpath, "sig");
          auto kind_text = v.str_field(mj, mpath, "kind");
          auto fp = v.fingerprint_field_of(mj, mpath, "fingerprint");
          const json* calls = v.array_field(mj, mpath, "calls");
          if (!sig_text || !kind_text || !fp || !calls) continue;

          auto sig = parse_method_sig(*sig_text);
          if (!sig) {
            v.fail(mpath + ".sig", "not a valid method signature");
            continue;
          }
          if (sig->class_key() != decl.key) {
            v.fail(mpath + ".sig", "signature names class '" + sig->class_key().str() +
                                       "' but is declared under '" + decl.key.str() + "'");
            continue;
          }
          if (sig->method_name == "<clinit>") {
            v.fail(mpath + ".sig", "'<clinit>' is a reserved name");
            continue;
          }
          auto kind = method_kind_from_name(*kind_text);
          if (!kind) {
            v.fail(mpath + ".kind", "unknown method kind '" + *kind_text + "'");
            continue;
          }
          md.sig = *sig;
          md.kind = *kind;
          md.body.fingerprint = *fp;
          for (size_t i = 0; i < md.sig.param_types.size(); ++i)
            md.param_names.push_back(render_param_name(static_cast<int>(i)));

          bool kind_ok = true;
          if (md.kind == MethodKind::Constructor && md.sig.method_name != kConstructorName) {
            v.fail(mpath + ".kind", "constructors must be named '" +
                                        std::string(kConstructorName) + "'");
            kind_ok = false;
          }
          if (md.kind != MethodKind::Constructor && md.sig.method_name == kConstructorName) {
            v.fail(mpath + ".kind", "'" + std::string(kConstructorName) +
                                        "' is reserved for constructors");
            kind_ok = false;
          }
          if ((md.kind == MethodKind::TestMethod || md.kind == MethodKind::FixtureBefore ||
               md.kind == MethodKind::FixtureAfter) &&
              !decl.is_test_class) {
            v.fail(mpath + ".kind", "kind '" + *kind_text + "' requires a test class");
            kind_ok = false;
          }
          if (md.kind == MethodKind::TestMethod &&
              (!md.sig.param_types.empty() || md.sig.return_type != "void")) {
            v.fail(mpath + ".sig", "test methods take no parameters and return void");
            kind_ok = false;
          }
          if ((md.kind == MethodKind::FixtureBefore || md.kind == MethodKind::FixtureAfter) &&
              !md.sig.param_types.empty()) {
            v.fail(mpath + ".sig", "fixture methods take no parameters");
            kind_ok = false;
          }
          if (!kind_ok) continue;

          std::vector<MethodSig> edges;
          bool calls_ok = true;
          for (size_t ti = 0; ti < calls->size(); ++ti) {
            std::ostringstream tb;
            tb << mpath << ".calls[" << ti << "]";
            const json& tj = (*calls)[ti];
            if (!tj.is_string()) {
              v.fail(tb.str(), "expected a method signature string");
              calls_ok = false;
              continue;
            }
            auto target = parse_method_sig(tj.get<std::string>());
            if (!target) {
              v.fail(tb.str(), "not a valid method signature");
              calls_ok = false;
              continue;
            }
            edges.push_back(*target);
            pending_calls.push_back({tb.str(), *target});
          }
          if (!calls_ok) continue;
          std::sort(edges.begin(), edges.end());
          edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
          md.explicit_calls = std::move(edges);

          bool dup = false;
          for (const auto& existing : decl.methods)
            if (existing.sig == md.sig) dup = true;
          if (dup)
            v.fail(mpath + ".sig", "duplicate method '" + md.sig.str() + "'");
          else
            decl.methods.push_back(std::move(md));
        }
      }

      std::sort(decl.static_fields.begin(), decl.static_fields.end(),
                [](const FieldDecl& a, const FieldDecl& b) { return a.name < b.name; });
      std::sort(decl.methods.begin(), decl.methods.end(),
                [](const MethodDecl& a, const MethodDecl& b) { return a.sig < b.sig; });

      if (snapshot.classes.count(decl.key)) {
        v.fail(cpath, "duplicate class '" + decl.key.str() + "'");
        continue;
      }
      for (const auto& m : decl.methods) declared.insert(m.sig);
      snapshot.classes.emplace(decl.key, std::move(decl));
    }
  }

  for (auto& [key, decl] : snapshot.classes) {
    if (decl.superclass && !snapshot.classes.count(*decl.superclass))
      decl.superclass_external = true;
  }

  for (const auto& call : pending_calls) {
    if (!declared.count(call.target))
      v.fail(call.path, "call edge to undeclared method '" + call.target.str() + "'");
  }

  result.diagnostics = std::move(v.diags);
  if (!has_errors(result.diagnostics)) result.snapshot = std::move(snapshot);
  return result;
}

SnapshotResult ingest_facts_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    SnapshotResult result;
    result.diagnostics.push_back(
        {path, 0, 0, "cannot open facts file", Severity::Error});
    return result;
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return ingest_facts(buf.str());
}

namespace {

// The linkage a facts document cannot express: initializer code that calls
// methods or touches other classes' statics.
bool initializer_has_linkage(const ClassDecl& decl) {
  for (const auto& field : decl.static_fields) {
    for (const auto& instr : field.init_instrs) {
      switch (instr.op) {
        case Opcode::SelfCall:
        case Opcode::MethodCall:
        case Opcode::New:
        case Opcode::StaticGet:
          return true;
        default:
          break;
      }
    }
  }
  return false;
}

} // namespace

std::string export_facts(const ProjectSnapshot& snapshot, std::vector<Diagnostic>* warnings) {
  SnapshotIndex index(snapshot);
  json classes = json::array();
  for (const auto& [key, decl] : snapshot.classes) {
    json fields = json::array();
    for (const auto& f : decl.static_fields)
      fields.push_back({{"name", f.name}, {"fingerprint", fingerprint_to_hex(f.fingerprint)}});

    json methods = json::array();
    for (const auto& m : decl.methods) {
      json calls = json::array();
      for (const auto& target : resolve_method_calls(m, index, warnings))
        calls.push_back(target.str());
      methods.push_back({{"sig", m.sig.str()},
                         {"kind", method_kind_name(m.kind)},
                         {"fingerprint", fingerprint_to_hex(m.body.fingerprint)},
                         {"calls", std::move(calls)}});
    }

    json cj{{"package", key.package_name},
            {"name", key.class_name},
            {"is_test_class", decl.is_test_class},
            {"static_fields", std::move(fields)},
            {"methods", std::move(methods)}};
    if (decl.superclass) cj["superclass"] = decl.superclass->str();
    classes.push_back(std::move(cj));

    if (warnings && initializer_has_linkage(decl))
      warnings->push_back({"", 0, 0,
                           "class '" + key.str() +
                               "': static initializer calls or references are not "
                               "representable in a facts document and were dropped",
                           Severity::Warning});
  }

  json doc{{"version_label", snapshot.version_label}, {"classes", std::move(classes)}};
  return doc.dump(2) + "\n";
}

} // namespace catto
