#pragma once

#include "catto/diagnostics.hpp"

#include <string>
#include <vector>

namespace catto {

enum class TokenKind {
  Ident,
  IntLit,
  StrLit,
  KwPackage,
  KwClass,
  KwExtends,
  KwFn,
  KwLet,
  KwStatic,
  KwIf,
  KwElse,
  KwWhile,
  KwReturn,
  KwAssert,
  KwNew,
  KwTrue,
  KwFalse,
  At,        // @
  LBrace,
  RBrace,
  LParen,
  RParen,
  Semi,
  Colon,
  Comma,
  Dot,
  Assign,    // =
  EqEq,
  NotEq,
  Lt,
  Le,
  Gt,
  Ge,
  Plus,
  Minus,
  Star,
  Slash,
  Percent,
  Bang,
  AndAnd,
  OrOr,
  End,
};

struct Token {
  TokenKind kind;
  std::string text; // identifier text, literal digits, decoded string value
  int line = 0;
  int column = 0;
};

struct LexResult {
  std::vector<Token> tokens; // always terminated by an End token
  std::vector<Diagnostic> diagnostics;
};

LexResult lex(const std::string& text, const std::string& file_path);

} // namespace catto
