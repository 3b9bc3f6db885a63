#include "catto/lexer.hpp"

#include <cctype>
#include <unordered_map>

namespace catto {

namespace {

const std::unordered_map<std::string, TokenKind>& keywords() {
  static const std::unordered_map<std::string, TokenKind> map = {
      {"package", TokenKind::KwPackage}, {"class", TokenKind::KwClass},
      {"extends", TokenKind::KwExtends}, {"fn", TokenKind::KwFn},
      {"let", TokenKind::KwLet},         {"static", TokenKind::KwStatic},
      {"if", TokenKind::KwIf},           {"else", TokenKind::KwElse},
      {"while", TokenKind::KwWhile},     {"return", TokenKind::KwReturn},
      {"assert", TokenKind::KwAssert},   {"new", TokenKind::KwNew},
      {"true", TokenKind::KwTrue},       {"false", TokenKind::KwFalse},
  };
  return map;
}

struct Cursor {
  const std::string& text;
  size_t pos = 0;
  int line = 1;
  int column = 1;

  bool done() const { return pos >= text.size(); }
  char peek(size_t ahead = 0) const {
    return pos + ahead < text.size() ? text[pos + ahead] : '\0';
  }
  char advance() {
    char c = text[pos++];
    if (c == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
    return c;
  }
};

} // namespace

LexResult lex(const std::string& text, const std::string& file_path) {
  LexResult result;
  Cursor cur{text};

  auto error = [&](int line, int col, const std::string& msg) {
    result.diagnostics.push_back({file_path, line, col, msg, Severity::Error});
  };
  auto push = [&](TokenKind kind, std::string tok_text, int line, int col) {
    result.tokens.push_back({kind, std::move(tok_text), line, col});
  };

  while (!cur.done()) {
    char c = cur.peek();
    int line = cur.line;
    int col = cur.column;

    if (std::isspace(static_cast<unsigned char>(c))) {
      cur.advance();
      continue;
    }
    if (c == '/' && cur.peek(1) == '/') {
      while (!cur.done() && cur.peek() != '\n')
        cur.advance();
      continue;
    }
    if (c == '/' && cur.peek(1) == '*') {
      cur.advance();
      cur.advance();
      bool closed = false;
      while (!cur.done()) {
        if (cur.peek() == '*' && cur.peek(1) == '/') {
          cur.advance();
          cur.advance();
          closed = true;
          break;
        }
        cur.advance();
      }
      if (!closed)
        error(line, col, "unterminated block comment");
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::string word;
      while (!cur.done() && (std::isalnum(static_cast<unsigned char>(cur.peek())) || cur.peek() == '_'))
        word += cur.advance();
      auto it = keywords().find(word);
      if (it != keywords().end())
        push(it->second, word, line, col);
      else
        push(TokenKind::Ident, word, line, col);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::string digits;
      while (!cur.done() && std::isdigit(static_cast<unsigned char>(cur.peek())))
        digits += cur.advance();
      push(TokenKind::IntLit, digits, line, col);
      continue;
    }
    if (c == '"') {
      cur.advance();
      std::string value;
      bool closed = false;
      while (!cur.done()) {
        char d = cur.advance();
        if (d == '"') {
          closed = true;
          break;
        }
        if (d == '\n') {
          break;
        }
        if (d == '\\') {
          char e = cur.done() ? '\0' : cur.advance();
          switch (e) {
          case 'n': value += '\n'; break;
          case 't': value += '\t'; break;
          case '\\': value += '\\'; break;
          case '"': value += '"'; break;
          default:
            error(cur.line, cur.column, std::string("unknown escape '\\") + e + "'");
          }
          continue;
        }
        value += d;
      }
      if (!closed)
        error(line, col, "unterminated string literal");
      else
        push(TokenKind::StrLit, value, line, col);
      continue;
    }

    cur.advance();
    auto two = [&](char second, TokenKind pair, TokenKind single) {
      if (cur.peek() == second) {
        cur.advance();
        push(pair, "", line, col);
      } else {
        push(single, "", line, col);
      }
    };
    switch (c) {
    case '@': push(TokenKind::At, "", line, col); break;
    case '{': push(TokenKind::LBrace, "", line, col); break;
    case '}': push(TokenKind::RBrace, "", line, col); break;
    case '(': push(TokenKind::LParen, "", line, col); break;
    case ')': push(TokenKind::RParen, "", line, col); break;
    case ';': push(TokenKind::Semi, "", line, col); break;
    case ':': push(TokenKind::Colon, "", line, col); break;
    case ',': push(TokenKind::Comma, "", line, col); break;
    case '.': push(TokenKind::Dot, "", line, col); break;
    case '=': two('=', TokenKind::EqEq, TokenKind::Assign); break;
    case '<': two('=', TokenKind::Le, TokenKind::Lt); break;
    case '>': two('=', TokenKind::Ge, TokenKind::Gt); break;
    case '+': push(TokenKind::Plus, "", line, col); break;
    case '-': push(TokenKind::Minus, "", line, col); break;
    case '*': push(TokenKind::Star, "", line, col); break;
    case '/': push(TokenKind::Slash, "", line, col); break;
    case '%': push(TokenKind::Percent, "", line, col); break;
    case '!':
      if (cur.peek() == '=') {
        cur.advance();
        push(TokenKind::NotEq, "", line, col);
      } else {
        push(TokenKind::Bang, "", line, col);
      }
      break;
    case '&':
      if (cur.peek() == '&') {
        cur.advance();
        push(TokenKind::AndAnd, "", line, col);
      } else {
        error(line, col, "stray '&' (did you mean '&&'?)");
      }
      break;
    case '|':
      if (cur.peek() == '|') {
        cur.advance();
        push(TokenKind::OrOr, "", line, col);
      } else {
        error(line, col, "stray '|' (did you mean '||'?)");
      }
      break;
    default:
      error(line, col, std::string("unexpected character '") + c + "'");
      break;
    }
  }

  result.tokens.push_back({TokenKind::End, "", cur.line, cur.column});
  return result;
}

} // namespace catto
