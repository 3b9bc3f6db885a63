#pragma once

#include "catto/ast.hpp"
#include "catto/normalized_body.hpp"

#include <string>
#include <vector>

namespace catto {

// Canonical spelling of a type: builtins stay bare, class types are
// package-qualified (an empty package means the surrounding file's package).
std::string canonical_type_name(const ast::TypeRef& ref,
                                const std::string& current_package);

// Lowers a method body to its canonical instruction stream. Parameters take
// slots 0..n-1 in declaration order; locals take the following slots in
// first-declaration order. Unqualified class references resolve to
// current_package. Requires a parser-validated AST (names resolve, locals
// declared before use).
NormalizedBody normalize_body(const ast::Block& body,
                              const std::vector<std::string>& param_names,
                              const std::string& current_package);

// Lowers a static-field initializer expression. No local scope exists here.
// A null initializer yields an empty stream.
std::vector<Instruction> normalize_initializer(const ast::Expr* initializer,
                                               const std::string& current_package);

} // namespace catto
