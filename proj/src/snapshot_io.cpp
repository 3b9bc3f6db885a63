#include "catto/snapshot_io.hpp"

#include "catto/diagnostics.hpp"
#include "catto/fingerprint.hpp"
#include "catto/render.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

namespace catto {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json instructions_to_json(const std::vector<Instruction>& instrs) {
  json out = json::array();
  for (const auto& instr : instrs) {
    json row = json::array();
    row.push_back(opcode_name(instr.op));
    for (const auto& operand : instr.operands)
      row.push_back(operand);
    out.push_back(std::move(row));
  }
  return out;
}

std::vector<Instruction> instructions_from_json(const json& doc, const std::string& where) {
  if (!doc.is_array())
    throw CattoError("corrupt snapshot: " + where + " is not an array", kExitInternal);
  std::vector<Instruction> out;
  for (const auto& row : doc) {
    if (!row.is_array() || row.empty() || !row[0].is_string())
      throw CattoError("corrupt snapshot: malformed instruction in " + where,
                       kExitInternal);
    auto op = opcode_from_name(row[0].get<std::string>());
    if (!op)
      throw CattoError("corrupt snapshot: unknown opcode '" +
                           row[0].get<std::string>() + "' in " + where,
                       kExitInternal);
    Instruction instr;
    instr.op = *op;
    for (size_t i = 1; i < row.size(); ++i) {
      if (!row[i].is_string())
        throw CattoError("corrupt snapshot: non-string operand in " + where,
                         kExitInternal);
      instr.operands.push_back(row[i].get<std::string>());
    }
    out.push_back(std::move(instr));
  }
  return out;
}

json class_to_json(const ClassDecl& cls) {
  json doc;
  doc["package"] = cls.key.package_name;
  doc["name"] = cls.key.class_name;
  if (cls.superclass) {
    doc["superclass"] = cls.superclass->str();
    doc["superclass_external"] = cls.superclass_external;
  }
  doc["is_test_class"] = cls.is_test_class;

  json fields = json::array();
  for (const auto& field : cls.static_fields) {
    json f;
    f["name"] = field.name;
    f["type"] = field.declared_type;
    f["fingerprint"] = fingerprint_to_hex(field.fingerprint);
    f["init"] = instructions_to_json(field.init_instrs);
    fields.push_back(std::move(f));
  }
  doc["static_fields"] = std::move(fields);

  json methods = json::array();
  for (const auto& method : cls.methods) {
    json m;
    m["sig"] = method.sig.str();
    m["kind"] = method_kind_name(method.kind);
    m["fingerprint"] = fingerprint_to_hex(method.body.fingerprint);
    m["instructions"] = instructions_to_json(method.body.instructions);
    if (method.explicit_calls) {
      json calls = json::array();
      for (const auto& sig : *method.explicit_calls)
        calls.push_back(sig.str());
      m["calls"] = std::move(calls);
    }
    methods.push_back(std::move(m));
  }
  doc["methods"] = std::move(methods);
  return doc;
}

ClassKey class_key_from_str(const std::string& text) {
  size_t last_dot = text.rfind('.');
  if (last_dot == std::string::npos)
    return {"", text};
  return {text.substr(0, last_dot), text.substr(last_dot + 1)};
}

// Throws CattoError (internal) on malformed records so the caller can map it
// to a Corrupt result with the message attached.
ClassDecl class_from_json(const json& doc) {
  ClassDecl cls;
  cls.key.package_name = doc.at("package").get<std::string>();
  cls.key.class_name = doc.at("name").get<std::string>();
  if (doc.contains("superclass")) {
    cls.superclass = class_key_from_str(doc.at("superclass").get<std::string>());
    cls.superclass_external = doc.value("superclass_external", false);
  }
  cls.is_test_class = doc.at("is_test_class").get<bool>();

  for (const auto& f : doc.at("static_fields")) {
    FieldDecl field;
    field.name = f.at("name").get<std::string>();
    field.declared_type = f.at("type").get<std::string>();
    field.init_instrs =
        instructions_from_json(f.at("init"), cls.key.str() + "." + field.name);
    field.fingerprint = fingerprint_field(field.declared_type, field.init_instrs);
    auto stored = fingerprint_from_hex(f.at("fingerprint").get<std::string>());
    if (!stored || *stored != field.fingerprint)
      throw CattoError("integrity check failed for field " + cls.key.str() + "." +
                           field.name,
                       kExitInternal);
    cls.static_fields.push_back(std::move(field));
  }

  for (const auto& m : doc.at("methods")) {
    MethodDecl method;
    auto sig = parse_method_sig(m.at("sig").get<std::string>());
    if (!sig)
      throw CattoError("corrupt snapshot: bad method sig '" +
                           m.at("sig").get<std::string>() + "'",
                       kExitInternal);
    method.sig = *sig;
    auto kind = method_kind_from_name(m.at("kind").get<std::string>());
    if (!kind)
      throw CattoError("corrupt snapshot: bad method kind '" +
                           m.at("kind").get<std::string>() + "'",
                       kExitInternal);
    method.kind = *kind;
    std::vector<Instruction> instrs =
        instructions_from_json(m.at("instructions"), method.sig.str());
    auto stored = fingerprint_from_hex(m.at("fingerprint").get<std::string>());
    if (!stored)
      throw CattoError("corrupt snapshot: bad fingerprint on " + method.sig.str(),
                       kExitInternal);
    if (instrs.empty()) {
      // facts-derived record: fingerprint is authoritative, no body to check
      method.body.fingerprint = *stored;
    } else {
      method.body = NormalizedBody::from_instructions(std::move(instrs));
      if (method.body.fingerprint != *stored)
        throw CattoError("integrity check failed for method " + method.sig.str(),
                         kExitInternal);
    }
    for (size_t i = 0; i < method.sig.param_types.size(); ++i)
      method.param_names.push_back(render_param_name(static_cast<int>(i)));
    if (m.contains("calls")) {
      std::vector<MethodSig> calls;
      for (const auto& c : m.at("calls")) {
        auto callee = parse_method_sig(c.get<std::string>());
        if (!callee)
          throw CattoError("corrupt snapshot: bad call sig '" +
                               c.get<std::string>() + "' on " + method.sig.str(),
                           kExitInternal);
        calls.push_back(*callee);
      }
      method.explicit_calls = std::move(calls);
    }
    cls.methods.push_back(std::move(method));
  }
  return cls;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw CattoError("cannot read " + path.string(), kExitInternal);
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
    throw CattoError("cannot write " + path.string(), kExitInternal);
  out << content;
  if (!out)
    throw CattoError("write failed: " + path.string(), kExitInternal);
}

} // namespace

void snapshot_store(const ProjectSnapshot& snapshot, const std::string& root) {
  fs::path base(root);
  std::error_code ec;
  fs::create_directories(base, ec);
  if (ec)
    throw CattoError("cannot create " + root + ": " + ec.message(), kExitInternal);
  fs::path class_dir = base / "classes";
  fs::remove_all(class_dir, ec); // drop records of classes gone from this version
  fs::create_directories(class_dir, ec);
  if (ec)
    throw CattoError("cannot create " + class_dir.string() + ": " + ec.message(),
                     kExitInternal);

  json manifest;
  manifest["format_version"] = kSnapshotFormatVersion;
  manifest["version_label"] = snapshot.version_label;
  json index = json::array();
  for (const auto& [key, cls] : snapshot.classes) {
    index.push_back(key.str());
    write_file(class_dir / (key.str() + ".json"), class_to_json(cls).dump(2) + "\n");
  }
  manifest["classes"] = std::move(index);
  write_file(base / "manifest.json", manifest.dump(2) + "\n");
}

SnapshotLoadResult snapshot_load(const std::string& root) {
  SnapshotLoadResult result;
  fs::path base(root);
  fs::path manifest_path = base / "manifest.json";
  std::error_code ec;
  if (!fs::exists(manifest_path, ec)) {
    result.status = SnapshotLoadStatus::Missing;
    result.message = "no baseline found under " + root;
    return result;
  }

  try {
    json manifest = json::parse(read_file(manifest_path));
    if (!manifest.contains("format_version") ||
        !manifest.at("format_version").is_number_integer()) {
      result.status = SnapshotLoadStatus::Corrupt;
      result.message = "manifest has no format_version";
      return result;
    }
    int version = manifest.at("format_version").get<int>();
    if (version != kSnapshotFormatVersion) {
      result.status = SnapshotLoadStatus::VersionMismatch;
      result.message = "baseline format version " + std::to_string(version) +
                       " does not match this build (" +
                       std::to_string(kSnapshotFormatVersion) +
                       "); re-baseline required";
      return result;
    }

    ProjectSnapshot snapshot;
    snapshot.version_label = manifest.at("version_label").get<std::string>();
    for (const auto& entry : manifest.at("classes")) {
      fs::path file = base / "classes" / (entry.get<std::string>() + ".json");
      ClassDecl cls = class_from_json(json::parse(read_file(file)));
      if (cls.key.str() != entry.get<std::string>()) {
        result.status = SnapshotLoadStatus::Corrupt;
        result.message = "class record " + file.string() + " declares key " +
                         cls.key.str();
        return result;
      }
      snapshot.classes.emplace(cls.key, std::move(cls));
    }
    result.status = SnapshotLoadStatus::Ok;
    result.snapshot = std::move(snapshot);
    return result;
  } catch (const json::exception& e) {
    result.status = SnapshotLoadStatus::Corrupt;
    result.message = std::string("unreadable baseline: ") + e.what();
    return result;
  } catch (const CattoError& e) {
    result.status = SnapshotLoadStatus::Corrupt;
    result.message = e.what();
    return result;
  }
}

} // namespace catto
