#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "clpv/combinators.hpp"

using namespace clpv;

namespace {

// if (x > 0) { r = a_then; } else { r = a_else; }   with join j.
struct IteFixture {
  ConstraintStore s{IntWidth(8)};
  VarId x, t, e, j;

  explicit IteFixture(Val a_then, Val a_else) {
    x = s.new_var("X");
    t = s.new_var("T");
    e = s.new_var("E");
    j = s.new_var("J");
    ConstraintPtr cond = Constraint::cmp(CmpOp::Gt, Term::v(x), Term::c(0));
    BranchTemplate then_t{[=](ConstraintStore& st,
                              const std::vector<VarId>& f) {
      st.post(Constraint::cmp(CmpOp::Eq, Term::v(f[0]), Term::c(a_then)));
    }};
    BranchTemplate else_t{[=](ConstraintStore& st,
                              const std::vector<VarId>& f) {
      st.post(Constraint::cmp(CmpOp::Eq, Term::v(f[0]), Term::c(a_else)));
    }};
    post_ite(s, cond, {t}, {e}, {j}, then_t, else_t);
  }
};

CondTemplate count_down_cond() {
  return {[](ConstraintStore&, const std::vector<VarId>& vs) {
    return Constraint::cmp(CmpOp::Gt, Term::v(vs[0]), Term::c(0));
  }};
}

BodyTemplate count_down_body() {
  return {[](ConstraintStore& st, const std::vector<VarId>& in,
             const std::vector<VarId>& out) {
    st.post(Constraint::arith(ArithOp::Sub, out[0], Term::v(in[0]),
                              Term::c(1)));
  }};
}

}  // namespace

TEST_CASE("conditional commits the then-branch when the condition holds") {
  IteFixture f(5, -5);
  f.s.post(Constraint::cmp(CmpOp::Ge, Term::v(f.x), Term::c(1)));
  f.s.propagate();
  REQUIRE(!f.s.failed());
  CHECK(f.s.domain(f.j).value() == 5);
}

TEST_CASE("conditional commits the else-branch when the condition fails") {
  IteFixture f(5, -5);
  f.s.post(Constraint::cmp(CmpOp::Le, Term::v(f.x), Term::c(0)));
  f.s.propagate();
  REQUIRE(!f.s.failed());
  CHECK(f.s.domain(f.j).value() == -5);
}

TEST_CASE("open conditional prunes the join to the union of both arms") {
  IteFixture f(1, 3);
  f.s.propagate();
  REQUIRE(!f.s.failed());
  const Domain& dj = f.s.domain(f.j);
  CHECK(dj.size() == 2);
  CHECK(dj.contains(1));
  CHECK(dj.contains(3));
  CHECK(!dj.contains(2));  // union of arms, not the hull
  // the condition variable is changed by both arms in opposite directions,
  // so it keeps its full range
  CHECK(f.s.domain(f.x).min() == -128);
  CHECK(f.s.domain(f.x).max() == 127);
}

TEST_CASE("join value propagates backward onto the condition") {
  IteFixture f(1, 3);
  f.s.post(Constraint::cmp(CmpOp::Eq, Term::v(f.j), Term::c(3)));
  f.s.propagate();
  REQUIRE(!f.s.failed());
  CHECK(f.s.domain(f.x).max() == 0);  // else-branch forced, so !(x > 0)
}

TEST_CASE("conditional fails when the join matches neither arm") {
  IteFixture f(1, 3);
  f.s.post(Constraint::cmp(CmpOp::Eq, Term::v(f.j), Term::c(7)));
  f.s.propagate();
  CHECK(f.s.failed());
}

TEST_CASE("iteration combinator unfolds a known count-down") {
  ConstraintStore s(IntWidth(8));
  VarId n0 = s.new_var("N"), n1 = s.new_var("N"), n2 = s.new_var("N");
  s.post(Constraint::cmp(CmpOp::Eq, Term::v(n0), Term::c(3)));
  post_w(s, count_down_cond(), {n0}, {n1}, {n2}, count_down_body(), 100,
         {"N"});
  s.propagate();
  REQUIRE(!s.failed());
  CHECK(s.domain(n2).value() == 0);
  CHECK(s.stats().unfoldings == 3);
  CHECK(!s.tainted());
}

TEST_CASE("iteration combinator skips when the condition is refuted") {
  ConstraintStore s(IntWidth(8));
  VarId n0 = s.new_var("N"), n1 = s.new_var("N"), n2 = s.new_var("N");
  s.post(Constraint::cmp(CmpOp::Eq, Term::v(n0), Term::c(-2)));
  post_w(s, count_down_cond(), {n0}, {n1}, {n2}, count_down_body(), 100,
         {"N"});
  s.propagate();
  REQUIRE(!s.failed());
  CHECK(s.domain(n2).value() == -2);  // exit copies the entry version
  CHECK(s.stats().unfoldings == 0);
}

TEST_CASE("exhausted unfolding depth taints the store") {
  ConstraintStore s(IntWidth(8));
  VarId n0 = s.new_var("N"), n1 = s.new_var("N"), n2 = s.new_var("N");
  s.post(Constraint::cmp(CmpOp::Eq, Term::v(n0), Term::c(50)));
  post_w(s, count_down_cond(), {n0}, {n1}, {n2}, count_down_body(), 2, {"N"});
  s.propagate();
  CHECK(s.unfold_taint());
  CHECK(s.tainted());
}

TEST_CASE("provably different entry and exit values force loop entry") {
  ConstraintStore s(IntWidth(8));
  VarId n0 = s.new_var("N"), n1 = s.new_var("N"), n2 = s.new_var("N");
  post_w(s, count_down_cond(), {n0}, {n1}, {n2}, count_down_body(), 3, {"N"});
  s.propagate();
  REQUIRE(!s.failed());
  CHECK(s.domain(n0).min() == -128);  // condition still open
  // n2 < n0 disentails n0 = n2, so at least one iteration must run
  s.post(Constraint::cmp(CmpOp::Lt, Term::v(n2), Term::v(n0)));
  s.propagate();
  REQUIRE(!s.failed());
  CHECK(s.domain(n0).min() == 1);  // the entered condition n0 > 0
}

TEST_CASE("a contradictory first iteration closes the loop") {
  ConstraintStore s(IntWidth(8));
  VarId n0 = s.new_var("N"), n1 = s.new_var("N"), n2 = s.new_var("N");
  ConstraintPtr cond = Constraint::cmp(CmpOp::Gt, Term::v(n0), Term::c(0));
  // body insists the value does not decrease, the decrement says otherwise
  BodyTemplate body{[](ConstraintStore& st, const std::vector<VarId>& in,
                       const std::vector<VarId>& out) {
    st.post(Constraint::arith(ArithOp::Sub, out[0], Term::v(in[0]),
                              Term::c(1)));
    st.post(Constraint::cmp(CmpOp::Ge, Term::v(out[0]), Term::v(in[0])));
  }};
  CHECK(check_body_contradiction(s, cond, body, {n0}, {n1}, {n2}));
  s.propagate();
  REQUIRE(!s.failed());
  CHECK(s.domain(n0).max() == 0);  // negated condition was posted
  CHECK(s.entail_cmp(CmpOp::Eq, Term::v(n0), Term::v(n2)) ==
        Entail::Entailed);
}

TEST_CASE("a consistent first iteration leaves the store untouched") {
  ConstraintStore s(IntWidth(8));
  VarId n0 = s.new_var("N"), n1 = s.new_var("N"), n2 = s.new_var("N");
  ConstraintPtr cond = Constraint::cmp(CmpOp::Gt, Term::v(n0), Term::c(0));
  CHECK(!check_body_contradiction(s, cond, count_down_body(), {n0}, {n1},
                                  {n2}));
  s.propagate();
  CHECK(s.domain(n0).min() == -128);
  CHECK(s.domain(n0).max() == 127);
}
