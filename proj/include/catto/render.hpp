#pragma once

#include "catto/ast.hpp"
#include "catto/normalized_body.hpp"

#include <memory>
#include <vector>

namespace catto {

// Decodes a canonical instruction stream back into an AST. Slots below
// param_count become parameters named p0..p{n-1}; higher slots become locals
// named v0, v1, ... in slot order. Every static reference in the stream must
// resolve inside expected_package (bare-name static access cannot denote a
// foreign package in source); a mismatch or malformed stream raises
// CattoError with the internal exit code.
std::unique_ptr<ast::Block> decode_body(const std::vector<Instruction>& instrs,
                                        int param_count,
                                        const std::string& expected_package);

// Decodes a static-field initializer stream. Empty stream yields null.
std::unique_ptr<ast::Expr> decode_initializer(const std::vector<Instruction>& instrs,
                                              const std::string& expected_package);

// Synthetic names used by decoding; exposed for renderers that must emit a
// matching parameter list.
std::string render_param_name(int index);

} // namespace catto
