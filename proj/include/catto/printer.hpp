#pragma once

#include "catto/ast.hpp"

#include <string>

namespace catto {

// Renders an AST back to source text. Parenthesization is driven by operator
// precedence, so parse(print(parse(s))) equals parse(s) for any valid s.
std::string print_source_unit(const ast::SourceUnit& unit);
std::string print_class(const ast::ClassAst& cls);
std::string print_block(const ast::Block& block, int indent);
std::string print_expr(const ast::Expr& expr);

// Escapes a decoded string back into a quoted literal.
std::string quote_string(const std::string& value);

} // namespace catto
