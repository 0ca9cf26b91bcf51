#include "clpv/combinators.hpp"

#include <memory>

namespace clpv {

namespace {

void post_vector_eq(ConstraintStore& s, const std::vector<VarId>& a,
                    const std::vector<VarId>& b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    s.post(Constraint::cmp(CmpOp::Eq, Term::v(a[i]), Term::v(b[i])));
  }
}

struct IteAgent : Agent {
  ConstraintPtr cond;
  std::vector<VarId> v0, v1, v2;
  BranchTemplate then_t, else_t;

  ConstraintStore::Poster branch_poster(bool take_then) {
    return [this, take_then](ConstraintStore& s) { commit(s, take_then); };
  }

  void commit(ConstraintStore& s, bool take_then) {
    if (take_then) {
      s.post(cond);
      then_t.post(s, v0);
      post_vector_eq(s, v2, v0);
    } else {
      s.post(Constraint::negation(cond));
      else_t.post(s, v1);
      post_vector_eq(s, v2, v1);
    }
  }

  void resolve(ConstraintStore& s) {
    active = false;
    s.trail_undo([this] { active = true; });
  }

  void recheck(ConstraintStore& s) override {
    Entail e = s.entailment(cond);
    if (e == Entail::Entailed) {
      resolve(s);
      commit(s, true);
      return;
    }
    if (e == Entail::Disentailed) {
      resolve(s);
      commit(s, false);
      return;
    }
    // Constructive disjunction of the two complete branches. A speculative
    // branch failure doubles as the backward guards: the join values can
    // force the flow onto the surviving branch.
    std::map<std::uint32_t, Domain> then_doms, else_doms;
    bool then_bad = s.speculate(branch_poster(true), &then_doms);
    bool else_bad = s.speculate(branch_poster(false), &else_doms);
    if (then_bad && else_bad) {
      s.fail();
      return;
    }
    if (then_bad) {
      resolve(s);
      commit(s, false);
      return;
    }
    if (else_bad) {
      resolve(s);
      commit(s, true);
      return;
    }
    s.cd_union_prune({then_doms, else_doms});
  }
};

struct WhileAgent : Agent {
  CondTemplate cond_t;
  BodyTemplate body_t;
  ConstraintPtr cond;  // instantiated over v0
  std::vector<VarId> v0, v1, v2;
  std::vector<std::string> base_names;
  std::vector<VarId> extern_reads;
  Val depth_left = 0;
  int iteration = 1;  // iteration number of v1

  void resolve(ConstraintStore& s) {
    active = false;
    s.trail_undo([this] { active = true; });
  }

  void enter(ConstraintStore& s) {
    s.post(cond);
    body_t.post(s, v0, v1);
    if (s.failed()) return;
    if (depth_left <= 0) {
      s.mark_unfold_taint();
      return;
    }
    std::vector<VarId> v3;
    v3.reserve(v1.size());
    for (std::size_t i = 0; i < v1.size(); ++i) {
      std::string base =
          i < base_names.size() ? base_names[i] : s.origin(v1[i]);
      v3.push_back(s.new_var(base + "#" + std::to_string(iteration + 1)));
    }
    s.note_unfolding();
    post_w_impl(s, v1, v3);
  }

  void post_w_impl(ConstraintStore& s, std::vector<VarId> nv0,
                   std::vector<VarId> nv1);

  void skip(ConstraintStore& s, bool with_neg_cond) {
    if (with_neg_cond) s.post(Constraint::negation(cond));
    post_vector_eq(s, v2, v0);
  }

  void recheck(ConstraintStore& s) override {
    Entail e = s.entailment(cond);
    if (e == Entail::Entailed) {
      resolve(s);
      enter(s);
      return;
    }
    if (e == Entail::Disentailed) {
      resolve(s);
      skip(s, false);
      return;
    }
    // Backward guard: if any variable provably differs before and after the
    // loop, the loop must be entered at least once.
    for (std::size_t i = 0; i < v0.size(); ++i) {
      if (s.entail_cmp(CmpOp::Eq, Term::v(v0[i]), Term::v(v2[i])) ==
          Entail::Disentailed) {
        resolve(s);
        enter(s);
        return;
      }
    }
    // Exit guard: a refuted first iteration means the loop cannot be entered.
    if (s.refutes([this](ConstraintStore& t) {
          t.post(cond);
          body_t.post(t, v0, v1);
        })) {
      resolve(s);
      skip(s, true);
    }
  }
};

void WhileAgent::post_w_impl(ConstraintStore& s, std::vector<VarId> nv0,
                             std::vector<VarId> nv1) {
  auto w = std::make_unique<WhileAgent>();
  w->cond_t = cond_t;
  w->body_t = body_t;
  w->cond = cond_t.make(s, nv0);
  w->v0 = std::move(nv0);
  w->v1 = std::move(nv1);
  w->v2 = v2;
  w->base_names = base_names;
  w->extern_reads = extern_reads;
  w->depth_left = depth_left - 1;
  w->iteration = iteration + 1;
  std::vector<VarId> watch = w->cond->vars();
  auto append = [&](const std::vector<VarId>& vs) {
    watch.insert(watch.end(), vs.begin(), vs.end());
  };
  append(w->v0);
  append(w->v1);
  append(w->v2);
  append(w->extern_reads);
  s.add_agent(std::move(w), std::move(watch));
}

}  // namespace

void post_ite(ConstraintStore& s, ConstraintPtr cond, std::vector<VarId> v0,
              std::vector<VarId> v1, std::vector<VarId> v2,
              BranchTemplate then_t, BranchTemplate else_t,
              std::vector<VarId> extern_reads) {
  auto ite = std::make_unique<IteAgent>();
  ite->cond = cond;
  ite->v0 = std::move(v0);
  ite->v1 = std::move(v1);
  ite->v2 = std::move(v2);
  ite->then_t = std::move(then_t);
  ite->else_t = std::move(else_t);
  std::vector<VarId> watch = cond->vars();
  auto append = [&](const std::vector<VarId>& vs) {
    watch.insert(watch.end(), vs.begin(), vs.end());
  };
  append(ite->v0);
  append(ite->v1);
  append(ite->v2);
  append(extern_reads);
  s.add_agent(std::move(ite), std::move(watch));
}

void post_w(ConstraintStore& s, CondTemplate cond_t, std::vector<VarId> v0,
            std::vector<VarId> v1, std::vector<VarId> v2, BodyTemplate body_t,
            Val depth_left, std::vector<std::string> base_names,
            std::vector<VarId> extern_reads) {
  auto w = std::make_unique<WhileAgent>();
  w->cond_t = std::move(cond_t);
  w->body_t = std::move(body_t);
  w->cond = w->cond_t.make(s, v0);
  w->v0 = std::move(v0);
  w->v1 = std::move(v1);
  w->v2 = std::move(v2);
  w->base_names = std::move(base_names);
  w->extern_reads = std::move(extern_reads);
  w->depth_left = depth_left;
  std::vector<VarId> watch = w->cond->vars();
  auto append = [&](const std::vector<VarId>& vs) {
    watch.insert(watch.end(), vs.begin(), vs.end());
  };
  append(w->v0);
  append(w->v1);
  append(w->v2);
  append(w->extern_reads);
  s.add_agent(std::move(w), std::move(watch));
}

bool check_body_contradiction(ConstraintStore& s, const ConstraintPtr& cond,
                              const BodyTemplate& body_t,
                              const std::vector<VarId>& v0,
                              const std::vector<VarId>& v1,
                              const std::vector<VarId>& v2) {
  bool contradicted = s.refutes([&](ConstraintStore& t) {
    t.post(cond);
    body_t.post(t, v0, v1);
  });
  if (contradicted) {
    s.post(Constraint::negation(cond));
    post_vector_eq(s, v2, v0);
  }
  return contradicted;
}

}  // namespace clpv
