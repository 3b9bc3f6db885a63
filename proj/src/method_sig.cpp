#include "catto/method_sig.hpp"

#include <sstream>

namespace catto {

std::string ClassKey::str() const { return package_name + "." + class_name; }

std::string MethodSig::str() const {
  return package_name + "." + class_name + "." + local_str();
}

std::string MethodSig::local_str() const {
  std::ostringstream os;
  os << method_name << '(';
  for (size_t i = 0; i < param_types.size(); ++i) {
    if (i)
      os << ',';
    os << param_types[i];
  }
  os << "):" << return_type;
  return os.str();
}

namespace {

bool split_params(const std::string& inner, std::vector<std::string>& out) {
  if (inner.empty())
    return true;
  size_t start = 0;
  while (true) {
    size_t comma = inner.find(',', start);
    std::string piece = inner.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    if (piece.empty())
      return false;
    out.push_back(piece);
    if (comma == std::string::npos)
      return true;
    start = comma + 1;
  }
}

bool parse_call_part(const std::string& text, size_t name_start, MethodSig& sig) {
  size_t open = text.find('(', name_start);
  if (open == std::string::npos)
    return false;
  size_t close = text.find(')', open);
  if (close == std::string::npos || close + 1 >= text.size() || text[close + 1] != ':')
    return false;
  sig.method_name = text.substr(name_start, open - name_start);
  sig.return_type = text.substr(close + 2);
  if (sig.method_name.empty() || sig.return_type.empty())
    return false;
  return split_params(text.substr(open + 1, close - open - 1), sig.param_types);
}

} // namespace

std::optional<MethodSig> parse_method_sig(const std::string& text) {
  size_t open = text.find('(');
  if (open == std::string::npos)
    return std::nullopt;
  // Split "pkg.Class.name" on the two rightmost dots before '('.
  size_t name_dot = text.rfind('.', open);
  if (name_dot == std::string::npos || name_dot == 0)
    return std::nullopt;
  size_t class_dot = text.rfind('.', name_dot - 1);
  if (class_dot == std::string::npos || class_dot == 0)
    return std::nullopt;
  MethodSig sig;
  sig.package_name = text.substr(0, class_dot);
  sig.class_name = text.substr(class_dot + 1, name_dot - class_dot - 1);
  if (sig.package_name.empty() || sig.class_name.empty())
    return std::nullopt;
  if (!parse_call_part(text, name_dot + 1, sig))
    return std::nullopt;
  return sig;
}

std::optional<MethodSig> parse_local_sig(const std::string& text, const ClassKey& cls) {
  MethodSig sig;
  sig.package_name = cls.package_name;
  sig.class_name = cls.class_name;
  if (text.find('(') == std::string::npos || text.find('.') < text.find('('))
    return std::nullopt;
  if (!parse_call_part(text, 0, sig))
    return std::nullopt;
  return sig;
}

const char* method_kind_name(MethodKind kind) {
  switch (kind) {
  case MethodKind::Production:
    return "production";
  case MethodKind::Constructor:
    return "constructor";
  case MethodKind::TestMethod:
    return "test";
  case MethodKind::FixtureBefore:
    return "before";
  case MethodKind::FixtureAfter:
    return "after";
  }
  return "production";
}

std::optional<MethodKind> method_kind_from_name(const std::string& name) {
  if (name == "production")
    return MethodKind::Production;
  if (name == "constructor")
    return MethodKind::Constructor;
  if (name == "test")
    return MethodKind::TestMethod;
  if (name == "before")
    return MethodKind::FixtureBefore;
  if (name == "after")
    return MethodKind::FixtureAfter;
  return std::nullopt;
}

} // namespace catto
