#pragma once

#include <optional>
#include <string>
#include <tuple>
#include <vector>

namespace catto {

// Key of a class inside a snapshot: (package, class name).
struct ClassKey {
  std::string package_name;
  std::string class_name;

  auto operator<=>(const ClassKey&) const = default;

  // "pkg.Name"
  std::string str() const;
};

// Full identity of a method: package + class + name + parameter types +
// return type. Two methods are the same method iff all five fields match;
// parameter order is significant.
struct MethodSig {
  std::string package_name;
  std::string class_name;
  std::string method_name;
  std::vector<std::string> param_types;
  std::string return_type;

  auto operator<=>(const MethodSig&) const = default;

  ClassKey class_key() const { return {package_name, class_name}; }

  // Canonical rendering, e.g. "calc.Adder.add(int,int):int". Used in every
  // external artifact (reports, coverage files, facts documents).
  std::string str() const;
  // "add(int,int):int" without the class prefix.
  std::string local_str() const;
};

// Parses the canonical "pkg.Class.name(t1,t2):ret" rendering. The method
// name is the last dotted segment before '('; the class is the one before
// that; everything earlier is the package.
std::optional<MethodSig> parse_method_sig(const std::string& text);

// Parses the class-local form "name(t1,t2):ret" against a known class key.
std::optional<MethodSig> parse_local_sig(const std::string& text, const ClassKey& cls);

enum class MethodKind {
  Production,
  Constructor,
  TestMethod,
  FixtureBefore,
  FixtureAfter,
};

// Reserved constructor name.
inline constexpr const char* kConstructorName = "init";

const char* method_kind_name(MethodKind kind);
std::optional<MethodKind> method_kind_from_name(const std::string& name);

} // namespace catto
