#include "doctest.h"

#include "catto/parser.hpp"
#include "catto/printer.hpp"

#include "test_util.hpp"

using namespace catto;
using namespace catto::testutil;

TEST_CASE("minimal unit parses into one production class") {
  ast::SourceUnit unit =
      parse_unit("package p; class A { fn f(): int { return 0; } }");
  CHECK(unit.package_name == "p");
  REQUIRE(unit.classes.size() == 1);
  const ast::ClassAst& cls = unit.classes[0];
  CHECK(cls.name == "A");
  CHECK_FALSE(cls.extends.has_value());
  REQUIRE(cls.methods.size() == 1);
  CHECK(cls.methods[0].name == "f");
  CHECK(cls.methods[0].annotation == ast::Annotation::None);
  CHECK(cls.methods[0].params.empty());
  REQUIRE(cls.methods[0].return_type.has_value());
  CHECK(cls.methods[0].return_type->name == "int");
}

TEST_CASE("malformed parameter list is reported at the parameter") {
  ParseResult result = parse_source("package p; class A { fn f(: int {} }", "bad.mini");
  CHECK_FALSE(result.unit.has_value());
  REQUIRE_FALSE(result.diagnostics.empty());
  const Diagnostic& d = result.diagnostics.front();
  CHECK(d.severity == Severity::Error);
  CHECK(d.line == 1);
  // The diagnostic must point inside the parameter list, not at the file start.
  CHECK(d.column >= 25);
}

TEST_CASE("empty file reports the missing package declaration") {
  ParseResult result = parse_source("", "empty.mini");
  CHECK_FALSE(result.unit.has_value());
  REQUIRE_FALSE(result.diagnostics.empty());
  CHECK(result.diagnostics.front().message.find("missing package declaration") !=
        std::string::npos);
}

TEST_CASE("annotations map to the declared kind markers") {
  ast::SourceUnit unit = parse_unit(
      "package p;\n"
      "class WidgetTest {\n"
      "  @before fn setUp() {}\n"
      "  @after fn tearDown() {}\n"
      "  @test fn works() {}\n"
      "  fn helper(): int { return 1; }\n"
      "}\n");
  REQUIRE(unit.classes.size() == 1);
  const auto& methods = unit.classes[0].methods;
  REQUIRE(methods.size() == 4);
  CHECK(methods[0].annotation == ast::Annotation::Before);
  CHECK(methods[1].annotation == ast::Annotation::After);
  CHECK(methods[2].annotation == ast::Annotation::Test);
  CHECK(methods[3].annotation == ast::Annotation::None);
}

TEST_CASE("comments and whitespace do not affect the parse") {
  ast::SourceUnit bare = parse_unit("package p; class A { fn f(): int { return 42; } }");
  ast::SourceUnit noisy = parse_unit(
      "package p; // header\n"
      "/* block\n comment */\n"
      "class A {\n"
      "  // the answer\n"
      "  fn f(): int { /* inline */ return 42; }\n"
      "}\n");
  CHECK(print_source_unit(bare) == print_source_unit(noisy));
}

TEST_CASE("printer output re-parses to the identical printed form") {
  const char* source =
      "package demo;\n"
      "\n"
      "class Base {\n"
      "  static let seed: int = 7;\n"
      "\n"
      "  fn init() {\n"
      "    Base.seed = Base.seed + 1;\n"
      "  }\n"
      "\n"
      "  fn pick(a: int, b: bool): int {\n"
      "    if (b) {\n"
      "      return a;\n"
      "    } else {\n"
      "      return -a;\n"
      "    }\n"
      "  }\n"
      "}\n"
      "\n"
      "class Child extends Base {\n"
      "  fn loopy(n: int): int {\n"
      "    let total: int = 0;\n"
      "    let i: int = 0;\n"
      "    while (i < n) {\n"
      "      total = total + i * 2;\n"
      "      i = i + 1;\n"
      "    }\n"
      "    return total;\n"
      "  }\n"
      "\n"
      "  fn strings(): bool {\n"
      "    let s: string = \"a\\\"b\\n\";\n"
      "    return s != \"\";\n"
      "  }\n"
      "\n"
      "  fn mix(x: int): bool {\n"
      "    return !(x % 3 == 0) && (x < 10 || x >= 20);\n"
      "  }\n"
      "}\n";
  ast::SourceUnit first = parse_unit(source);
  std::string printed = print_source_unit(first);
  ast::SourceUnit second = parse_unit(printed, "printed.mini");
  CHECK(print_source_unit(second) == printed);
}

TEST_CASE("precedence binds multiplication before addition and comparison last") {
  ast::SourceUnit unit = parse_unit(
      "package p; class A { fn f(a: int, b: int, c: int): bool {"
      " return a + b * c < a * b + c; } }");
  // The canonical printer re-derives parentheses from structure alone.
  std::string printed = print_source_unit(unit);
  CHECK(printed.find("a + b * c < a * b + c") != std::string::npos);
}

TEST_CASE("parenthesized grouping survives printing when structural") {
  ast::SourceUnit unit = parse_unit(
      "package p; class A { fn f(a: int, b: int, c: int): int {"
      " return (a + b) * c; } }");
  std::string printed = print_source_unit(unit);
  CHECK(printed.find("(a + b) * c") != std::string::npos);
}

TEST_CASE("string literals round-trip through quoting") {
  CHECK(quote_string("") == "\"\"");
  CHECK(quote_string("plain") == "\"plain\"");
  CHECK(quote_string("a\"b") == "\"a\\\"b\"");
  CHECK(quote_string("line\nbreak\ttab\\slash") == "\"line\\nbreak\\ttab\\\\slash\"");
}

TEST_CASE("several classes per file and fully qualified types parse") {
  ast::SourceUnit unit = parse_unit(
      "package p;\n"
      "class A { fn mk(): p.B { return new B(); } }\n"
      "class B { }\n");
  REQUIRE(unit.classes.size() == 2);
  REQUIRE(unit.classes[0].methods[0].return_type.has_value());
  CHECK(unit.classes[0].methods[0].return_type->package == "p");
  CHECK(unit.classes[0].methods[0].return_type->name == "B");
}

TEST_CASE("missing semicolon and unclosed block are reported with positions") {
  ParseResult missing = parse_source("package p; class A { fn f() { let x: int = 1 } }",
                                     "semi.mini");
  CHECK_FALSE(missing.unit.has_value());
  CHECK_FALSE(missing.diagnostics.empty());

  ParseResult unclosed = parse_source("package p; class A { fn f() {", "open.mini");
  CHECK_FALSE(unclosed.unit.has_value());
  CHECK_FALSE(unclosed.diagnostics.empty());
}

TEST_CASE("keywords are not identifiers") {
  ParseResult result =
      parse_source("package p; class A { fn f() { let while: int = 1; } }", "kw.mini");
  CHECK_FALSE(result.unit.has_value());
}
