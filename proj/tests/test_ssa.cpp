#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <set>

#include "doctest.h"

#include "clpv/ssa.hpp"

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

void collect_defs(const std::vector<SsaStmtPtr>& body,
                  std::vector<SsaName>& out) {
  for (const SsaStmtPtr& s : body) {
    if (s->kind == SsaStmt::Kind::Assign) out.push_back(s->target);
    collect_defs(s->body, out);
    collect_defs(s->else_body, out);
    for (const SsaStmt::Join& j : s->joins) out.push_back({j.base, j.v2});
  }
}

}  // namespace

TEST_CASE("encoded names survive the round trip") {
  SsaName n = decode_ssa(encode_ssa("r", 3));
  CHECK(n.base == "r");
  CHECK(n.version == 3);
  CHECK(n.text() == "r3");
}

TEST_CASE("straight-line code gets consecutive versions") {
  SsaProgram ssa = to_ssa(parse_program(
      "int f(int x) { x = x + 1; x = x * 2; return x; }"));
  REQUIRE(ssa.body.size() == 2);
  CHECK(ssa.body[0]->target == SsaName{"x", 1});
  CHECK(ssa.body[1]->target == SsaName{"x", 2});
  CHECK(decode_ssa(ssa.body[1]->expr->a->name) == SsaName{"x", 1});
  CHECK(decode_ssa(ssa.return_expr->name) == SsaName{"x", 2});
}

TEST_CASE("conditionals join only what both arms could change") {
  SsaProgram ssa = to_ssa(parse_program(
      "int f(int x) { int y = 0; if (x > 0) { y = 1; } else { y = 2; }"
      " return y; }"));
  REQUIRE(ssa.body.size() == 2);
  const SsaStmt& iff = *ssa.body[1];
  REQUIRE(iff.kind == SsaStmt::Kind::If);
  REQUIRE(iff.joins.size() == 1);  // x is untouched, so no join for it
  CHECK(iff.joins[0].base == "y");
  CHECK(iff.joins[0].v0 == 1);  // then-final
  CHECK(iff.joins[0].v1 == 2);  // else-final
  CHECK(iff.joins[0].v2 == 3);
  CHECK(decode_ssa(ssa.return_expr->name) == SsaName{"y", 3});
}

TEST_CASE("an arm that keeps the entry value still joins") {
  SsaProgram ssa = to_ssa(parse_program(
      "int f(int x) { int y = 5; if (x > 0) { y = 1; } else { }"
      " return y; }"));
  const SsaStmt& iff = *ssa.body[1];
  REQUIRE(iff.joins.size() == 1);
  CHECK(iff.joins[0].v0 == 1);  // then assigned
  CHECK(iff.joins[0].v1 == 0);  // else kept the entry version
}

TEST_CASE("the toggle program in full") {
  SsaProgram ssa = to_ssa(parse_program(kFoo));
  CHECK(ssa.params == std::vector<std::string>{"n", "r"});
  REQUIRE(ssa.body.size() == 2);
  CHECK(ssa.body[0]->target == SsaName{"s", 0});

  const SsaStmt& w = *ssa.body[1];
  REQUIRE(w.kind == SsaStmt::Kind::While);
  // the condition is over the loop-entry versions
  CHECK(decode_ssa(w.expr->a->name) == SsaName{"n", 0});

  // joins in declaration order: n, r, s
  REQUIRE(w.joins.size() == 3);
  CHECK(w.joins[0].base == "n");
  CHECK(w.joins[0].v0 == 0);
  CHECK(w.joins[0].v1 == 1);
  CHECK(w.joins[0].v2 == 2);
  CHECK(w.joins[1].base == "r");
  CHECK(w.joins[1].v0 == 0);
  CHECK(w.joins[1].v1 == 3);  // the if-join inside the body
  CHECK(w.joins[1].v2 == 4);
  CHECK(w.joins[2].base == "s");
  CHECK(w.joins[2].v1 == 3);

  // body: decrement then the toggle conditional
  REQUIRE(w.body.size() == 2);
  CHECK(w.body[0]->target == SsaName{"n", 1});
  const SsaStmt& iff = *w.body[1];
  REQUIRE(iff.kind == SsaStmt::Kind::If);
  REQUIRE(iff.joins.size() == 2);

  CHECK(decode_ssa(ssa.return_expr->name) == SsaName{"r", 4});
}

TEST_CASE("every version is defined at most once") {
  const char* sources[] = {
      kFoo,
      "int f(int a, int b) { while (a > b) { a = a - b;"
      " if (a % 2 == 0) { b = b + 1; } else { a = a - 1; b = b - 1; } }"
      " return a + b; }",
      "int g(int x) { int y = 0; while (x > 0) { while (y < x)"
      " { y = y + 1; } x = x - 1; } return y; }",
  };
  for (const char* src : sources) {
    CAPTURE(src);
    SsaProgram ssa = to_ssa(parse_program(src));
    std::vector<SsaName> defs;
    for (const std::string& p : ssa.params) defs.push_back({p, 0});
    collect_defs(ssa.body, defs);
    std::set<SsaName> uniq(defs.begin(), defs.end());
    CHECK(uniq.size() == defs.size());
  }
}

TEST_CASE("pretty printing shows the joins") {
  SsaProgram ssa = to_ssa(parse_program(kFoo));
  std::string text = pretty_print_ssa(ssa);
  CHECK(text.find("n2 = phi(n0, n1)") != std::string::npos);
  CHECK(text.find("r4 = phi(r0, r3)") != std::string::npos);
  CHECK(text.find("while (n0 > 0)") != std::string::npos);
  CHECK(text.find("return r4") != std::string::npos);
  // the if-join is printed after the conditional
  std::size_t close = text.find("    }\n");
  std::size_t join = text.find("r3 = phi(r1, r2)");
  REQUIRE(join != std::string::npos);
  CHECK(join > close);
}

TEST_CASE("re-declared names keep globally unique versions") {
  SsaProgram ssa = to_ssa(parse_program(
      "int f(int x) { if (x > 0) { int y = 1; x = y; } else { }"
      " int y = 2; return x + y; }"));
  std::vector<SsaName> defs;
  collect_defs(ssa.body, defs);
  std::set<SsaName> uniq(defs.begin(), defs.end());
  CHECK(uniq.size() == defs.size());
  // the second declaration continues the version counter
  CHECK(decode_ssa(ssa.return_expr->b->name) == SsaName{"y", 1});
}
