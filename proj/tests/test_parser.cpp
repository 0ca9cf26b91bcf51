#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "clpv/ast.hpp"

using namespace clpv;

namespace {

const char* kFoo = R"(int foo(int n, int r) {
  int s = 0;
  while (n > 0) {
    n = n - 1;
    if (s == 0) {
      s = 1;
      r = r + 1;
    } else {
      s = 0;
      r = r - 1;
    }
  }
  return r;
})";

Diagnostic parse_failure(const std::string& src) {
  try {
    parse_program(src);
  } catch (const ParseError& e) {
    return e.diag;
  }
  FAIL("expected a parse error");
  return {};
}

}  // namespace

TEST_CASE("parses the toggle program") {
  ProgramAst ast = parse_program(kFoo);
  CHECK(ast.name == "foo");
  CHECK(ast.params == std::vector<std::string>{"n", "r"});
  REQUIRE(ast.body.size() == 2);
  CHECK(ast.body[0]->kind == Stmt::Kind::Decl);
  CHECK(ast.body[1]->kind == Stmt::Kind::While);
  REQUIRE(ast.body[1]->body.size() == 2);
  CHECK(ast.body[1]->body[1]->kind == Stmt::Kind::If);
  CHECK(ast.return_expr->kind == Expr::Kind::Var);
  CHECK(ast.return_expr->name == "r");
}

TEST_CASE("pretty printing round-trips") {
  const char* sources[] = {
      kFoo,
      "int abs(int x) { int y = x; if (x < 0) { y = -x; } else { }"
      " return y; }",
      "int f(int a, int b) {\n"
      "  int q = 0;\n"
      "  int m = 0;\n"
      "  if (b != 0 && a >= 0 || b < 0) { q = a / b; m = a % b; } else { }\n"
      "  return q * b + m;\n"
      "}",
      "int g(int x) { while (x * x > 10) { x = x / 2; } return x; }",
      "int h(int x) { int y = 0; if (!(x == 3)) { y = 1; } else { y = 2; }"
      " return y - -x; }",
  };
  for (const char* src : sources) {
    CAPTURE(src);
    ProgramAst a = parse_program(src);
    ProgramAst b = parse_program(pretty_print(a));
    CHECK(ast_equal(a, b));
  }
}

TEST_CASE("increment and decrement are sugar for assignment") {
  ProgramAst sugar = parse_program(
      "int f(int x) { x++; x--; x--; return x; }");
  ProgramAst plain = parse_program(
      "int f(int x) { x = x + 1; x = x - 1; x = x - 1; return x; }");
  CHECK(ast_equal(sugar, plain));
}

TEST_CASE("operator precedence and associativity") {
  ProgramAst a = parse_program("int f(int x) { return 1 + x * 2 - 3; }");
  ProgramAst b = parse_program("int f(int x) { return (1 + (x * 2)) - 3; }");
  ProgramAst c = parse_program("int f(int x) { return 1 + x * (2 - 3); }");
  CHECK(ast_equal(a, b));
  CHECK(!ast_equal(a, c));
  ProgramAst d = parse_program(
      "int f(int x) { int y = 0; if (x > 0 && x < 9 || x == -1) { y = 1; }"
      " else { } return y; }");
  ProgramAst e = parse_program(
      "int f(int x) { int y = 0; if ((x > 0 && x < 9) || x == -1) { y = 1; }"
      " else { } return y; }");
  CHECK(ast_equal(d, e));
}

TEST_CASE("syntax errors carry a position") {
  Diagnostic d = parse_failure("int f(int x) {\n  x = x + ;\n  return x; }");
  CHECK(d.kind == Diagnostic::Kind::Syntax);
  CHECK(d.pos.line == 2);
  Diagnostic d2 = parse_failure("int f(int x) { x = 1 return x; }");
  CHECK(d2.kind == Diagnostic::Kind::Syntax);
}

TEST_CASE("name errors") {
  CHECK(parse_failure("int f(int x) { y = 1; return x; }").kind ==
        Diagnostic::Kind::Name);
  CHECK(parse_failure("int f(int x) { return y; }").kind ==
        Diagnostic::Kind::Name);
  CHECK(parse_failure("int f(int x, int x) { return x; }").kind ==
        Diagnostic::Kind::Name);
  // no shadowing, even in a nested scope
  CHECK(parse_failure("int f(int x) { if (x > 0) { int x = 1; } else { }"
                      " return x; }")
            .kind == Diagnostic::Kind::Name);
}

TEST_CASE("scopes end with their block") {
  // a block-local declaration is not visible afterwards
  CHECK(parse_failure("int f(int x) { if (x > 0) { int y = 1; } else { }"
                      " x = y; return x; }")
            .kind == Diagnostic::Kind::Name);
  // ... which also frees the name for a later declaration
  ProgramAst ok = parse_program(
      "int f(int x) { if (x > 0) { int y = 1; x = y; } else { }"
      " int y = 2; return x + y; }");
  CHECK(ok.name == "f");
}

TEST_CASE("type errors") {
  CHECK(parse_failure("int f(int x) { x = x > 0; return x; }").kind ==
        Diagnostic::Kind::Type);
  CHECK(parse_failure("int f(int x) { if (x + 1) { } else { } return x; }")
            .kind == Diagnostic::Kind::Type);
  CHECK(parse_failure("int f(int x) { while (x) { } return x; }").kind ==
        Diagnostic::Kind::Type);
  CHECK(parse_failure("int f(int x) { return x == 1; }").kind ==
        Diagnostic::Kind::Type);
  CHECK(parse_failure("int f(int x) { return !(x) ; }").kind ==
        Diagnostic::Kind::Type);
}

TEST_CASE("return must be the last statement") {
  // trailing code after the return is caught while closing the body
  CHECK(parse_failure("int f(int x) { return x; x = 1; }").kind ==
        Diagnostic::Kind::Syntax);
  CHECK(parse_failure("int f(int x) { if (x > 0) { return x; } else { }"
                      " return x; }")
            .kind == Diagnostic::Kind::Structure);
  CHECK(parse_failure("int f(int x) { x = 1; }").kind ==
        Diagnostic::Kind::Structure);
}

TEST_CASE("comments and whitespace are skipped") {
  ProgramAst a = parse_program(
      "// leading comment\nint f(int x) { // trailing\n  x = x + 1;"
      " // mid\n  return x;\n}\n// end\n");
  ProgramAst b = parse_program("int f(int x) { x = x + 1; return x; }");
  CHECK(ast_equal(a, b));
}
