#pragma once

#include "catto/ast.hpp"
#include "catto/diagnostics.hpp"

#include <optional>
#include <string>
#include <vector>

namespace catto {

struct ParseResult {
  std::optional<ast::SourceUnit> unit; // set only when diagnostics carry no error
  std::vector<Diagnostic> diagnostics;

  bool ok() const { return unit.has_value(); }
};

// Parses one MiniLang file. Lexical and syntactic problems are reported as
// diagnostics with line/column; the parser never throws.
ParseResult parse_source(const std::string& text, const std::string& file_path);

} // namespace catto
