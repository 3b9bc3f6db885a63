#include "catto/parser.hpp"

#include "catto/lexer.hpp"

#include <algorithm>

namespace catto {

using namespace ast;

namespace {

struct BinaryLevel {
  TokenKind token;
  BinaryOp op;
  int precedence;
};

constexpr BinaryLevel kBinaryLevels[] = {
    {TokenKind::OrOr, BinaryOp::Or, 1},
    {TokenKind::AndAnd, BinaryOp::And, 2},
    {TokenKind::EqEq, BinaryOp::Eq, 3},
    {TokenKind::NotEq, BinaryOp::Ne, 3},
    {TokenKind::Lt, BinaryOp::Lt, 4},
    {TokenKind::Le, BinaryOp::Le, 4},
    {TokenKind::Gt, BinaryOp::Gt, 4},
    {TokenKind::Ge, BinaryOp::Ge, 4},
    {TokenKind::Plus, BinaryOp::Add, 5},
    {TokenKind::Minus, BinaryOp::Sub, 5},
    {TokenKind::Star, BinaryOp::Mul, 6},
    {TokenKind::Slash, BinaryOp::Div, 6},
    {TokenKind::Percent, BinaryOp::Mod, 6},
};

const BinaryLevel* binary_level(TokenKind kind) {
  for (const auto& level : kBinaryLevels)
    if (level.token == kind)
      return &level;
  return nullptr;
}

class Parser {
public:
  Parser(std::vector<Token> tokens, std::string file_path, std::vector<Diagnostic>& diags)
      : tokens_(std::move(tokens)), file_(std::move(file_path)), diags_(diags) {}

  std::optional<SourceUnit> parse_unit() {
    SourceUnit unit;
    unit.file_path = file_;
    if (at(TokenKind::End)) {
      error(peek(), "missing package declaration");
      return std::nullopt;
    }
    if (!expect(TokenKind::KwPackage, "expected 'package' declaration"))
      return std::nullopt;
    unit.package_name = parse_dotted_name();
    if (unit.package_name.empty())
      return std::nullopt;
    expect(TokenKind::Semi, "expected ';' after package name");

    while (!at(TokenKind::End)) {
      if (auto cls = parse_class())
        unit.classes.push_back(std::move(*cls));
      else
        sync_to_class();
    }
    if (unit.classes.empty() && !has_errors(diags_))
      error(peek(), "expected at least one class declaration");
    if (has_errors(diags_))
      return std::nullopt;
    return unit;
  }

private:
  std::vector<Token> tokens_;
  std::string file_;
  std::vector<Diagnostic>& diags_;
  size_t pos_ = 0;
  std::vector<std::string> locals_; // current method scope, params first

  const Token& peek(size_t ahead = 0) const {
    size_t i = std::min(pos_ + ahead, tokens_.size() - 1);
    return tokens_[i];
  }
  const Token& advance() {
    const Token& t = tokens_[pos_];
    if (pos_ + 1 < tokens_.size())
      ++pos_;
    return t;
  }
  bool at(TokenKind kind) const { return peek().kind == kind; }
  bool eat(TokenKind kind) {
    if (!at(kind))
      return false;
    advance();
    return true;
  }

  void error(const Token& tok, const std::string& msg) {
    diags_.push_back({file_, tok.line, tok.column, msg, Severity::Error});
  }
  bool expect(TokenKind kind, const std::string& msg) {
    if (eat(kind))
      return true;
    error(peek(), msg);
    return false;
  }

  bool is_local(const std::string& name) const {
    return std::find(locals_.begin(), locals_.end(), name) != locals_.end();
  }

  void sync_to_class() {
    int depth = 0;
    while (!at(TokenKind::End)) {
      if (at(TokenKind::LBrace))
        ++depth;
      if (at(TokenKind::RBrace)) {
        if (depth == 0) {
          advance();
          return;
        }
        --depth;
      }
      if (depth == 0 && at(TokenKind::KwClass))
        return;
      advance();
    }
  }

  void sync_to_member() {
    int depth = 0;
    while (!at(TokenKind::End)) {
      if (depth == 0 &&
          (at(TokenKind::KwFn) || at(TokenKind::KwStatic) || at(TokenKind::At) ||
           at(TokenKind::RBrace)))
        return;
      if (at(TokenKind::LBrace))
        ++depth;
      if (at(TokenKind::RBrace) && depth > 0)
        --depth;
      advance();
    }
  }

  void sync_to_stmt() {
    while (!at(TokenKind::End) && !at(TokenKind::RBrace)) {
      if (eat(TokenKind::Semi))
        return;
      if (at(TokenKind::LBrace)) {
        // skip a nested block wholesale
        int depth = 0;
        while (!at(TokenKind::End)) {
          if (eat(TokenKind::LBrace)) {
            ++depth;
          } else if (at(TokenKind::RBrace)) {
            advance();
            if (--depth == 0)
              break;
          } else {
            advance();
          }
        }
        return;
      }
      advance();
    }
  }

  std::string parse_dotted_name() {
    if (!at(TokenKind::Ident)) {
      error(peek(), "expected identifier");
      return {};
    }
    std::string name = advance().text;
    while (at(TokenKind::Dot) && peek(1).kind == TokenKind::Ident) {
      advance();
      name += '.';
      name += advance().text;
    }
    return name;
  }

  std::optional<TypeRef> parse_type_ref() {
    std::string dotted = parse_dotted_name();
    if (dotted.empty())
      return std::nullopt;
    TypeRef ref;
    size_t last_dot = dotted.rfind('.');
    if (last_dot == std::string::npos) {
      ref.name = dotted;
    } else {
      ref.package = dotted.substr(0, last_dot);
      ref.name = dotted.substr(last_dot + 1);
    }
    return ref;
  }

  // -------------------------------------------------------------------------
  // Declarations

  std::optional<ClassAst> parse_class() {
    if (at(TokenKind::At)) {
      error(peek(), "annotations are only allowed on methods");
      return std::nullopt;
    }
    if (!expect(TokenKind::KwClass, "expected 'class'"))
      return std::nullopt;
    ClassAst cls;
    cls.line = peek().line;
    if (!at(TokenKind::Ident)) {
      error(peek(), "expected class name");
      return std::nullopt;
    }
    cls.name = advance().text;
    if (eat(TokenKind::KwExtends)) {
      cls.extends = parse_type_ref();
      if (!cls.extends)
        return std::nullopt;
    }
    if (!expect(TokenKind::LBrace, "expected '{' to open class body"))
      return std::nullopt;
    while (!at(TokenKind::RBrace) && !at(TokenKind::End)) {
      if (!parse_member(cls))
        sync_to_member();
    }
    expect(TokenKind::RBrace, "expected '}' to close class body");
    return cls;
  }

  bool parse_member(ClassAst& cls) {
    if (at(TokenKind::KwStatic))
      return parse_field(cls);

    Annotation annotation = Annotation::None;
    while (at(TokenKind::At)) {
      const Token& at_tok = advance();
      if (!at(TokenKind::Ident)) {
        error(peek(), "expected annotation name after '@'");
        return false;
      }
      std::string name = advance().text;
      Annotation parsed;
      if (name == "test")
        parsed = Annotation::Test;
      else if (name == "before")
        parsed = Annotation::Before;
      else if (name == "after")
        parsed = Annotation::After;
      else {
        error(at_tok, "unknown annotation '@" + name + "'");
        return false;
      }
      if (annotation != Annotation::None) {
        error(at_tok, "at most one annotation per method");
        return false;
      }
      annotation = parsed;
    }
    return parse_method(cls, annotation);
  }

  bool parse_field(ClassAst& cls) {
    advance(); // static
    if (!expect(TokenKind::KwLet, "expected 'let' after 'static'"))
      return false;
    FieldAst field;
    field.line = peek().line;
    if (!at(TokenKind::Ident)) {
      error(peek(), "expected field name");
      return false;
    }
    field.name = advance().text;
    if (!expect(TokenKind::Colon, "expected ':' and a type on a static field"))
      return false;
    auto type = parse_type_ref();
    if (!type)
      return false;
    field.type = *type;
    if (eat(TokenKind::Assign)) {
      locals_.clear(); // initializers have no local scope
      auto init = parse_expr();
      if (!init)
        return false;
      field.initializer = std::shared_ptr<Expr>(std::move(*init));
    }
    if (!expect(TokenKind::Semi, "expected ';' after static field"))
      return false;
    cls.fields.push_back(std::move(field));
    return true;
  }

  bool parse_method(ClassAst& cls, Annotation annotation) {
    if (!expect(TokenKind::KwFn, "expected 'fn', 'static let' or '}' in class body"))
      return false;
    MethodAst method;
    method.annotation = annotation;
    method.line = peek().line;
    if (!at(TokenKind::Ident)) {
      error(peek(), "expected method name");
      return false;
    }
    method.name = advance().text;
    if (!expect(TokenKind::LParen, "expected '(' after method name"))
      return false;
    locals_.clear();
    if (!at(TokenKind::RParen)) {
      do {
        if (!at(TokenKind::Ident)) {
          error(peek(), "malformed parameter list: expected parameter name");
          return false;
        }
        ParamAst param;
        param.name = advance().text;
        if (!expect(TokenKind::Colon, "expected ':' and a type after parameter name"))
          return false;
        auto type = parse_type_ref();
        if (!type)
          return false;
        param.type = *type;
        if (is_local(param.name)) {
          error(peek(), "duplicate parameter '" + param.name + "'");
          return false;
        }
        locals_.push_back(param.name);
        method.params.push_back(std::move(param));
      } while (eat(TokenKind::Comma));
    }
    if (!expect(TokenKind::RParen, "expected ')' after parameter list"))
      return false;
    if (eat(TokenKind::Colon)) {
      method.return_type = parse_type_ref();
      if (!method.return_type)
        return false;
    }
    auto body = parse_block();
    if (!body)
      return false;
    method.body = std::shared_ptr<Block>(std::move(*body));
    cls.methods.push_back(std::move(method));
    return true;
  }

  // -------------------------------------------------------------------------
  // Statements

  std::optional<std::unique_ptr<Block>> parse_block() {
    if (!expect(TokenKind::LBrace, "expected '{'"))
      return std::nullopt;
    auto block = std::make_unique<Block>();
    while (!at(TokenKind::RBrace) && !at(TokenKind::End)) {
      if (auto stmt = parse_stmt())
        block->stmts.push_back(std::move(*stmt));
      else
        sync_to_stmt();
    }
    if (!expect(TokenKind::RBrace, "expected '}'"))
      return std::nullopt;
    return block;
  }

  std::optional<StmtPtr> parse_stmt() {
    const Token& tok = peek();
    switch (tok.kind) {
    case TokenKind::KwLet:
      return parse_let();
    case TokenKind::KwIf:
      return parse_if();
    case TokenKind::KwWhile:
      return parse_while();
    case TokenKind::KwReturn:
      return parse_return();
    case TokenKind::KwAssert:
      return parse_assert();
    default:
      break;
    }

    // assignment forms need a little lookahead: `x = e;` and `C.f = e;`
    if (tok.kind == TokenKind::Ident && peek(1).kind == TokenKind::Assign)
      return parse_assign_local();
    if (tok.kind == TokenKind::Ident && peek(1).kind == TokenKind::Dot &&
        peek(2).kind == TokenKind::Ident && peek(3).kind == TokenKind::Assign)
      return parse_assign_static();

    auto expr = parse_expr();
    if (!expr)
      return std::nullopt;
    auto stmt = std::make_unique<Stmt>(StmtKind::ExprStmt);
    stmt->line = tok.line;
    stmt->expr = std::move(*expr);
    if (!expect(TokenKind::Semi, "expected ';' after expression"))
      return std::nullopt;
    return stmt;
  }

  std::optional<StmtPtr> parse_let() {
    auto stmt = std::make_unique<Stmt>(StmtKind::Let);
    stmt->line = peek().line;
    advance(); // let
    if (!at(TokenKind::Ident)) {
      error(peek(), "expected local name after 'let'");
      return std::nullopt;
    }
    const Token& name_tok = peek();
    stmt->name = advance().text;
    if (eat(TokenKind::Colon)) {
      stmt->declared_type = parse_type_ref();
      if (!stmt->declared_type)
        return std::nullopt;
    }
    if (!expect(TokenKind::Assign, "expected '=' (locals require an initializer)"))
      return std::nullopt;
    auto init = parse_expr();
    if (!init)
      return std::nullopt;
    stmt->expr = std::move(*init);
    if (!expect(TokenKind::Semi, "expected ';' after let statement"))
      return std::nullopt;
    if (is_local(stmt->name)) {
      error(name_tok, "redeclaration of '" + stmt->name + "'");
      return std::nullopt;
    }
    locals_.push_back(stmt->name);
    return stmt;
  }

  std::optional<StmtPtr> parse_assign_local() {
    auto stmt = std::make_unique<Stmt>(StmtKind::AssignLocal);
    const Token& name_tok = peek();
    stmt->line = name_tok.line;
    stmt->name = advance().text;
    advance(); // =
    if (!is_local(stmt->name))
      error(name_tok, "assignment to undeclared name '" + stmt->name + "'");
    auto value = parse_expr();
    if (!value)
      return std::nullopt;
    stmt->expr = std::move(*value);
    if (!expect(TokenKind::Semi, "expected ';' after assignment"))
      return std::nullopt;
    return stmt;
  }

  std::optional<StmtPtr> parse_assign_static() {
    auto stmt = std::make_unique<Stmt>(StmtKind::AssignStatic);
    const Token& class_tok = peek();
    stmt->line = class_tok.line;
    stmt->class_ref = advance().text;
    advance(); // .
    stmt->name = advance().text;
    advance(); // =
    if (is_local(stmt->class_ref))
      error(class_tok, "objects have no assignable fields ('" + stmt->class_ref +
                           "' is a local, not a class)");
    auto value = parse_expr();
    if (!value)
      return std::nullopt;
    stmt->expr = std::move(*value);
    if (!expect(TokenKind::Semi, "expected ';' after assignment"))
      return std::nullopt;
    return stmt;
  }

  std::optional<StmtPtr> parse_if() {
    auto stmt = std::make_unique<Stmt>(StmtKind::If);
    stmt->line = peek().line;
    advance(); // if
    if (!expect(TokenKind::LParen, "expected '(' after 'if'"))
      return std::nullopt;
    auto cond = parse_expr();
    if (!cond)
      return std::nullopt;
    stmt->expr = std::move(*cond);
    if (!expect(TokenKind::RParen, "expected ')' after condition"))
      return std::nullopt;
    auto then_block = parse_block();
    if (!then_block)
      return std::nullopt;
    stmt->body = std::move(*then_block);
    if (eat(TokenKind::KwElse)) {
      if (at(TokenKind::KwIf)) {
        // `else if` sugar: wrap the trailing if in a one-statement block
        auto nested = parse_if();
        if (!nested)
          return std::nullopt;
        auto block = std::make_unique<Block>();
        block->stmts.push_back(std::move(*nested));
        stmt->else_body = std::move(block);
      } else {
        auto else_block = parse_block();
        if (!else_block)
          return std::nullopt;
        stmt->else_body = std::move(*else_block);
      }
    }
    return stmt;
  }

  std::optional<StmtPtr> parse_while() {
    auto stmt = std::make_unique<Stmt>(StmtKind::While);
    stmt->line = peek().line;
    advance(); // while
    if (!expect(TokenKind::LParen, "expected '(' after 'while'"))
      return std::nullopt;
    auto cond = parse_expr();
    if (!cond)
      return std::nullopt;
    stmt->expr = std::move(*cond);
    if (!expect(TokenKind::RParen, "expected ')' after condition"))
      return std::nullopt;
    auto body = parse_block();
    if (!body)
      return std::nullopt;
    stmt->body = std::move(*body);
    return stmt;
  }

  std::optional<StmtPtr> parse_return() {
    auto stmt = std::make_unique<Stmt>(StmtKind::Return);
    stmt->line = peek().line;
    advance(); // return
    if (!at(TokenKind::Semi)) {
      auto value = parse_expr();
      if (!value)
        return std::nullopt;
      stmt->expr = std::move(*value);
    }
    if (!expect(TokenKind::Semi, "expected ';' after return"))
      return std::nullopt;
    return stmt;
  }

  std::optional<StmtPtr> parse_assert() {
    auto stmt = std::make_unique<Stmt>(StmtKind::Assert);
    stmt->line = peek().line;
    advance(); // assert
    auto cond = parse_expr();
    if (!cond)
      return std::nullopt;
    stmt->expr = std::move(*cond);
    if (!expect(TokenKind::Semi, "expected ';' after assert"))
      return std::nullopt;
    return stmt;
  }

  // -------------------------------------------------------------------------
  // Expressions

  std::optional<ExprPtr> parse_expr() { return parse_binary(1); }

  std::optional<ExprPtr> parse_binary(int min_precedence) {
    auto lhs = parse_unary();
    if (!lhs)
      return std::nullopt;
    while (true) {
      const BinaryLevel* level = binary_level(peek().kind);
      if (!level || level->precedence < min_precedence)
        return lhs;
      int line = peek().line;
      advance();
      auto rhs = parse_binary(level->precedence + 1);
      if (!rhs)
        return std::nullopt;
      auto node = std::make_unique<Expr>(ExprKind::Binary);
      node->line = line;
      node->binary_op = level->op;
      node->lhs = std::move(*lhs);
      node->rhs = std::move(*rhs);
      lhs = std::move(node);
    }
  }

  std::optional<ExprPtr> parse_unary() {
    if (at(TokenKind::Bang) || at(TokenKind::Minus)) {
      auto node = std::make_unique<Expr>(ExprKind::Unary);
      node->line = peek().line;
      node->unary_op = at(TokenKind::Bang) ? UnaryOp::Not : UnaryOp::Neg;
      advance();
      auto operand = parse_unary();
      if (!operand)
        return std::nullopt;
      node->lhs = std::move(*operand);
      return node;
    }
    return parse_postfix();
  }

  std::optional<ExprPtr> parse_postfix() {
    auto expr = parse_primary();
    if (!expr)
      return std::nullopt;
    while (at(TokenKind::Dot)) {
      int line = peek().line;
      advance();
      if (!at(TokenKind::Ident)) {
        error(peek(), "expected member name after '.'");
        return std::nullopt;
      }
      std::string member = advance().text;
      if (eat(TokenKind::LParen)) {
        auto call = std::make_unique<Expr>(ExprKind::MethodCall);
        call->line = line;
        call->name = member;
        call->base = std::move(*expr);
        if (!parse_args(call->args))
          return std::nullopt;
        expr = std::move(call);
      } else {
        auto get = std::make_unique<Expr>(ExprKind::FieldGet);
        get->line = line;
        get->name = member;
        get->base = std::move(*expr);
        expr = std::move(get);
      }
    }
    return expr;
  }

  bool parse_args(std::vector<ExprPtr>& out) {
    if (eat(TokenKind::RParen))
      return true;
    do {
      auto arg = parse_expr();
      if (!arg)
        return false;
      out.push_back(std::move(*arg));
    } while (eat(TokenKind::Comma));
    return expect(TokenKind::RParen, "expected ')' after arguments");
  }

  std::optional<ExprPtr> parse_primary() {
    const Token& tok = peek();
    switch (tok.kind) {
    case TokenKind::IntLit: {
      auto node = std::make_unique<Expr>(ExprKind::IntLit);
      node->line = tok.line;
      node->text = advance().text;
      return node;
    }
    case TokenKind::StrLit: {
      auto node = std::make_unique<Expr>(ExprKind::StrLit);
      node->line = tok.line;
      node->text = advance().text;
      return node;
    }
    case TokenKind::KwTrue:
    case TokenKind::KwFalse: {
      auto node = std::make_unique<Expr>(ExprKind::BoolLit);
      node->line = tok.line;
      node->bool_value = tok.kind == TokenKind::KwTrue;
      advance();
      return node;
    }
    case TokenKind::KwNew: {
      auto node = std::make_unique<Expr>(ExprKind::New);
      node->line = tok.line;
      advance();
      auto cls = parse_type_ref();
      if (!cls)
        return std::nullopt;
      node->type_ref = *cls;
      if (!expect(TokenKind::LParen, "expected '(' after class name in 'new'"))
        return std::nullopt;
      if (!parse_args(node->args))
        return std::nullopt;
      return node;
    }
    case TokenKind::LParen: {
      advance();
      auto inner = parse_expr();
      if (!inner)
        return std::nullopt;
      if (!expect(TokenKind::RParen, "expected ')'"))
        return std::nullopt;
      return inner;
    }
    case TokenKind::Ident:
      return parse_name();
    default:
      error(tok, "expected an expression");
      return std::nullopt;
    }
  }

  // A bare identifier is a self-call, a local/parameter, or the class half
  // of a `Class.field` static access; anything else is an error here.
  std::optional<ExprPtr> parse_name() {
    const Token& tok = peek();
    std::string name = advance().text;

    if (eat(TokenKind::LParen)) {
      auto call = std::make_unique<Expr>(ExprKind::SelfCall);
      call->line = tok.line;
      call->name = name;
      if (!parse_args(call->args))
        return std::nullopt;
      return call;
    }

    if (is_local(name)) {
      auto ref = std::make_unique<Expr>(ExprKind::LocalRef);
      ref->line = tok.line;
      ref->name = name;
      return ref;
    }

    if (at(TokenKind::Dot) && peek(1).kind == TokenKind::Ident) {
      if (peek(2).kind == TokenKind::LParen) {
        error(tok, "'" + name + "' is not a local and classes have no static methods");
        return std::nullopt;
      }
      advance(); // .
      auto get = std::make_unique<Expr>(ExprKind::StaticGet);
      get->line = tok.line;
      get->class_ref = name;
      get->name = advance().text;
      return get;
    }

    error(tok, "unknown name '" + name + "'");
    return std::nullopt;
  }
};

} // namespace

ParseResult parse_source(const std::string& text, const std::string& file_path) {
  ParseResult result;
  LexResult lexed = lex(text, file_path);
  result.diagnostics = std::move(lexed.diagnostics);
  if (has_errors(result.diagnostics))
    return result;

  Parser parser(std::move(lexed.tokens), file_path, result.diagnostics);
  auto unit = parser.parse_unit();
  if (unit && !has_errors(result.diagnostics))
    result.unit = std::move(unit);
  return result;
}

} // namespace catto
