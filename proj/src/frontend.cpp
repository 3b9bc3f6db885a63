#include "catto/frontend.hpp"

#include "catto/normalize.hpp"
#include "catto/typing.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace catto {

using namespace ast;
namespace fs = std::filesystem;

namespace {

bool is_builtin_name(const std::string& name) {
  return name == "int" || name == "bool" || name == "string" || name == "void";
}

struct ClassSource {
  const ClassAst* node = nullptr;
  std::string package;
  std::string file;
};

class SnapshotBuilder {
public:
  SnapshotBuilder(const std::vector<SourceUnit>& units, std::string version_label,
                  const FrontendOptions& options)
      : units_(units), version_label_(std::move(version_label)), options_(options) {}

  SnapshotResult build() {
    collect_classes();
    if (!has_errors(diags_))
      resolve_hierarchy();
    if (!has_errors(diags_))
      build_members();
    if (has_errors(diags_))
      return {std::nullopt, std::move(diags_)};

    check_overrides();
    check_bodies();
    if (has_errors(diags_))
      return {std::nullopt, std::move(diags_)};
    return {std::move(snapshot_), std::move(diags_)};
  }

private:
  const std::vector<SourceUnit>& units_;
  std::string version_label_;
  FrontendOptions options_;
  std::vector<Diagnostic> diags_;
  std::map<ClassKey, ClassSource> sources_;
  ProjectSnapshot snapshot_;

  void error(const std::string& file, int line, const std::string& msg) {
    diags_.push_back({file, line, 0, msg, Severity::Error});
  }
  void warn(const std::string& file, int line, const std::string& msg) {
    diags_.push_back({file, line, 0, msg, Severity::Warning});
  }

  void collect_classes() {
    snapshot_.version_label = version_label_;
    for (const auto& unit : units_) {
      for (const auto& cls : unit.classes) {
        ClassKey key{unit.package_name, cls.name};
        if (is_builtin_name(cls.name)) {
          error(unit.file_path, cls.line,
                "class name '" + cls.name + "' conflicts with a builtin type");
          continue;
        }
        auto [it, inserted] = sources_.try_emplace(key, ClassSource{&cls, unit.package_name, unit.file_path});
        if (!inserted) {
          error(unit.file_path, cls.line,
                "duplicate class '" + key.str() + "' (also declared in " +
                    it->second.file + ")");
          continue;
        }
        ClassDecl decl;
        decl.key = key;
        bool has_test_method = std::any_of(
            cls.methods.begin(), cls.methods.end(),
            [](const MethodAst& m) { return m.annotation == Annotation::Test; });
        decl.is_test_class =
            has_test_method || (cls.name.size() >= 4 &&
                                cls.name.compare(cls.name.size() - 4, 4, "Test") == 0);
        snapshot_.classes.emplace(key, std::move(decl));
      }
    }
  }

  void resolve_hierarchy() {
    for (auto& [key, decl] : snapshot_.classes) {
      const ClassSource& src = sources_.at(key);
      if (!src.node->extends)
        continue;
      const TypeRef& ref = *src.node->extends;
      ClassKey super{ref.package.empty() ? src.package : ref.package, ref.name};
      decl.superclass = super;
      if (!snapshot_.classes.count(super)) {
        if (options_.allow_external)
          decl.superclass_external = true;
        else
          error(src.file, src.node->line,
                "unknown superclass '" + super.str() + "' of class '" + key.str() +
                    "' (use --allow-external to accept)");
      }
    }
    if (has_errors(diags_))
      return;

    // cycle check: walk up from each class; if the walk returns to its start
    // and the start is the smallest key in the cycle, report once
    for (const auto& [key, decl] : snapshot_.classes) {
      std::set<ClassKey> seen;
      ClassKey cur = key;
      bool smallest = true;
      while (true) {
        const ClassDecl* cls = snapshot_.find_class(cur);
        if (!cls || !cls->superclass || cls->superclass_external)
          break;
        cur = *cls->superclass;
        if (cur < key)
          smallest = false;
        if (cur == key) {
          if (smallest)
            error(sources_.at(key).file, sources_.at(key).node->line,
                  "inheritance cycle involving class '" + key.str() + "'");
          break;
        }
        if (!seen.insert(cur).second)
          break; // cycle not through key; reported from its own member
      }
    }
  }

  // Canonical type spelling, validated against the class table. is_return
  // permits void.
  std::optional<std::string> checked_type(const TypeRef& ref, const std::string& pkg,
                                          bool is_return, const std::string& file,
                                          int line, const std::string& what) {
    if (ref.package.empty() && is_builtin_name(ref.name)) {
      if (ref.name == "void" && !is_return) {
        error(file, line, what + " cannot have type void");
        return std::nullopt;
      }
      return ref.name;
    }
    ClassKey key{ref.package.empty() ? pkg : ref.package, ref.name};
    if (!snapshot_.classes.count(key) && !options_.allow_external) {
      error(file, line, "unknown type '" + key.str() + "' in " + what);
      return std::nullopt;
    }
    return key.str();
  }

  void build_members() {
    for (auto& [key, decl] : snapshot_.classes) {
      const ClassSource& src = sources_.at(key);
      build_fields(decl, src);
      build_methods(decl, src);
      std::sort(decl.static_fields.begin(), decl.static_fields.end(),
                [](const FieldDecl& a, const FieldDecl& b) { return a.name < b.name; });
      std::sort(decl.methods.begin(), decl.methods.end(),
                [](const MethodDecl& a, const MethodDecl& b) { return a.sig < b.sig; });
    }
  }

  void build_fields(ClassDecl& decl, const ClassSource& src) {
    for (const auto& field : src.node->fields) {
      if (decl.find_field(field.name)) {
        error(src.file, field.line,
              "duplicate static field '" + field.name + "' in class '" +
                  decl.key.str() + "'");
        continue;
      }
      auto type = checked_type(field.type, src.package, false, src.file, field.line,
                               "static field '" + field.name + "'");
      if (!type)
        continue;
      FieldDecl out;
      out.name = field.name;
      out.declared_type = *type;
      out.init_instrs = normalize_initializer(field.initializer.get(), src.package);
      out.fingerprint = fingerprint_field(out.declared_type, out.init_instrs);
      decl.static_fields.push_back(std::move(out));
    }
  }

  void build_methods(ClassDecl& decl, const ClassSource& src) {
    bool has_before = false, has_after = false, has_ctor = false;
    for (const auto& method : src.node->methods) {
      if (decl.find_method_arity(method.name, method.params.size())) {
        error(src.file, method.line,
              "duplicate method '" + method.name + "' with " +
                  std::to_string(method.params.size()) + " parameters in class '" +
                  decl.key.str() + "'");
        continue;
      }

      MethodDecl out;
      out.kind = MethodKind::Production;
      bool is_ctor = method.name == kConstructorName;
      if (is_ctor) {
        if (method.annotation != Annotation::None) {
          error(src.file, method.line, "constructor cannot carry an annotation");
          continue;
        }
        if (has_ctor) {
          error(src.file, method.line,
                "constructors cannot be overloaded; class '" + decl.key.str() +
                    "' already has an 'init'");
          continue;
        }
        if (method.return_type) {
          error(src.file, method.line, "constructor cannot declare a return type");
          continue;
        }
        has_ctor = true;
        out.kind = MethodKind::Constructor;
      } else {
        switch (method.annotation) {
        case Annotation::Test:
          out.kind = MethodKind::TestMethod;
          if (!method.params.empty())
            error(src.file, method.line, "@test method must take no parameters");
          if (method.return_type &&
              !(method.return_type->package.empty() &&
                method.return_type->name == "void"))
            error(src.file, method.line, "@test method must return void");
          break;
        case Annotation::Before:
          out.kind = MethodKind::FixtureBefore;
          if (has_before)
            error(src.file, method.line,
                  "class '" + decl.key.str() + "' already has a @before method");
          has_before = true;
          break;
        case Annotation::After:
          out.kind = MethodKind::FixtureAfter;
          if (has_after)
            error(src.file, method.line,
                  "class '" + decl.key.str() + "' already has an @after method");
          has_after = true;
          break;
        case Annotation::None:
          break;
        }
        if (out.kind != MethodKind::Production && !decl.is_test_class) {
          error(src.file, method.line,
                "annotated method '" + method.name + "' in non-test class '" +
                    decl.key.str() + "'");
        }
        if ((out.kind == MethodKind::FixtureBefore ||
             out.kind == MethodKind::FixtureAfter) &&
            !method.params.empty())
          error(src.file, method.line, "fixture method must take no parameters");
      }

      out.sig.package_name = decl.key.package_name;
      out.sig.class_name = decl.key.class_name;
      out.sig.method_name = method.name;
      bool types_ok = true;
      for (const auto& param : method.params) {
        auto type = checked_type(param.type, src.package, false, src.file, method.line,
                                 "parameter '" + param.name + "'");
        if (!type) {
          types_ok = false;
          continue;
        }
        out.sig.param_types.push_back(*type);
        out.param_names.push_back(param.name);
      }
      if (method.return_type) {
        auto type = checked_type(*method.return_type, src.package, true, src.file,
                                 method.line, "return type");
        if (!type)
          types_ok = false;
        else
          out.sig.return_type = *type;
      } else {
        out.sig.return_type = "void";
      }
      if (!types_ok)
        continue;

      out.body = normalize_body(*method.body, out.param_names, src.package);
      out.body_ast = method.body;
      decl.methods.push_back(std::move(out));
    }
  }

  void check_overrides() {
    SnapshotIndex index(snapshot_);
    for (const auto& [key, decl] : snapshot_.classes) {
      if (!decl.superclass || decl.superclass_external)
        continue;
      for (const auto& method : decl.methods) {
        if (method.kind == MethodKind::Constructor)
          continue;
        const MethodDecl* overridden = index.resolve_up(
            *decl.superclass, method.sig.method_name, method.sig.param_types.size());
        if (!overridden)
          continue;
        if (overridden->sig.param_types != method.sig.param_types ||
            overridden->sig.return_type != method.sig.return_type)
          error(sources_.at(key).file, sources_.at(key).node->line,
                "method '" + method.sig.str() + "' overrides '" +
                    overridden->sig.str() + "' with different parameter or return types");
      }
    }
  }

  void check_bodies() {
    SnapshotIndex index(snapshot_);
    for (const auto& [key, decl] : snapshot_.classes) {
      const ClassSource& src = sources_.at(key);
      for (const auto& method : decl.methods) {
        BodyAnalysis analysis =
            analyze_body(*method.body_ast, key, method.param_names,
                         method.sig.param_types, method.sig.return_type, index,
                         src.file);
        for (auto& diag : analysis.diagnostics)
          diags_.push_back(std::move(diag));
      }
      for (const auto& field : decl.static_fields) {
        const FieldAst* node = nullptr;
        for (const auto& f : src.node->fields)
          if (f.name == field.name)
            node = &f;
        if (!node || !node->initializer)
          continue;
        BodyAnalysis analysis = analyze_initializer(*node->initializer, key,
                                                    field.declared_type, index, src.file);
        for (auto& diag : analysis.diagnostics)
          diags_.push_back(std::move(diag));
      }
    }
  }
};

} // namespace

SnapshotResult build_snapshot(const std::vector<SourceUnit>& units,
                              const std::string& version_label,
                              const FrontendOptions& options) {
  SnapshotBuilder builder(units, version_label, options);
  return builder.build();
}

SnapshotResult parse_project_dir(const std::string& dir,
                                 const std::string& version_label,
                                 const FrontendOptions& options) {
  SnapshotResult result;
  fs::path root(dir);
  std::error_code ec;
  if (!fs::is_directory(root, ec)) {
    result.diagnostics.push_back(
        {dir, 0, 0, "not a directory", Severity::Error});
    return result;
  }

  std::vector<fs::path> files;
  for (auto it = fs::recursive_directory_iterator(root, ec);
       it != fs::recursive_directory_iterator(); it.increment(ec)) {
    if (ec) {
      result.diagnostics.push_back({dir, 0, 0, "walk failed: " + ec.message(),
                                    Severity::Error});
      return result;
    }
    if (it->is_regular_file() && it->path().extension() == ".mini")
      files.push_back(it->path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) {
    result.diagnostics.push_back(
        {dir, 0, 0, "no .mini files found", Severity::Error});
    return result;
  }

  std::vector<SourceUnit> units;
  for (const auto& file : files) {
    std::ifstream in(file, std::ios::binary);
    if (!in) {
      result.diagnostics.push_back(
          {file.string(), 0, 0, "cannot open file", Severity::Error});
      continue;
    }
    std::ostringstream text;
    text << in.rdbuf();
    ParseResult parsed = parse_source(text.str(), file.string());
    for (auto& diag : parsed.diagnostics)
      result.diagnostics.push_back(std::move(diag));
    if (parsed.unit)
      units.push_back(std::move(*parsed.unit));
  }
  if (has_errors(result.diagnostics))
    return result;

  SnapshotResult built = build_snapshot(units, version_label, options);
  for (auto& diag : built.diagnostics)
    result.diagnostics.push_back(std::move(diag));
  result.snapshot = std::move(built.snapshot);
  return result;
}

} // namespace catto
