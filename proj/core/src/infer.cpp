#include "clpv/infer.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace clpv {

namespace {

Val term_value(const InvTerm& t, const Trace& tr) {
  if (t.kind == InvTerm::Kind::Return) return tr.exit_return;
  return tr.entry.at(t.param);
}

std::vector<Val> observed_values(const InvTerm& t,
                                 const std::vector<Trace>& traces) {
  std::set<Val> vs;
  for (const Trace& tr : traces) vs.insert(term_value(t, tr));
  return {vs.begin(), vs.end()};
}

}  // namespace

std::vector<InvariantPtr> generate_candidates(
    const std::vector<Trace>& traces) {
  if (traces.empty()) {
    throw EmptyTraceSet("candidate generation needs at least one trace");
  }
  std::vector<InvTerm> terms;
  for (const auto& [name, _] : traces.front().entry) {
    terms.push_back(InvTerm::orig(name));
  }
  terms.push_back(InvTerm::ret());

  std::vector<InvariantPtr> out;
  using F = InvariantFormula;

  // Rank 0-2: unary templates. Bounds are emitted only in their tightest
  // observed form; looser constants are subsumed and skipped.
  for (const InvTerm& t : terms) {
    std::vector<Val> vs = observed_values(t, traces);
    for (Val c : vs) out.push_back(F::cmp(InvCmp::Eq, t, InvTerm::lit(c)));
    out.push_back(F::cmp(InvCmp::Ge, t, InvTerm::lit(vs.front())));
    out.push_back(F::cmp(InvCmp::Le, t, InvTerm::lit(vs.back())));
  }

  // Rank 3: binary comparisons over term pairs.
  static const InvCmp kOps[] = {InvCmp::Eq, InvCmp::Ne, InvCmp::Lt,
                                InvCmp::Le, InvCmp::Gt, InvCmp::Ge};
  for (std::size_t i = 0; i < terms.size(); ++i) {
    for (std::size_t j = i + 1; j < terms.size(); ++j) {
      for (InvCmp op : kOps) out.push_back(F::cmp(op, terms[i], terms[j]));
    }
  }

  // Rank 4: (t1 == c1) ==> (t2 == c2), antecedent true in >= 2 traces.
  for (const InvTerm& t1 : terms) {
    std::map<Val, int> antecedent_count;
    for (const Trace& tr : traces) ++antecedent_count[term_value(t1, tr)];
    for (const auto& [c1, count] : antecedent_count) {
      if (count < 2) continue;
      for (const InvTerm& t2 : terms) {
        if (t2 == t1) continue;
        for (Val c2 : observed_values(t2, traces)) {
          out.push_back(
              F::implies(F::cmp(InvCmp::Eq, t1, InvTerm::lit(c1)),
                         F::cmp(InvCmp::Eq, t2, InvTerm::lit(c2))));
        }
      }
    }
  }
  return out;
}

std::vector<InvariantPtr> filter_candidates(
    const std::vector<InvariantPtr>& candidates,
    const std::vector<Trace>& traces) {
  std::vector<InvariantPtr> alive;
  for (const InvariantPtr& f : candidates) {
    bool ok = true;
    for (const Trace& tr : traces) {
      if (!evaluate_invariant(f, tr)) {
        ok = false;
        break;
      }
    }
    if (ok) alive.push_back(f);
  }

  std::set<std::string> texts;
  for (const InvariantPtr& f : alive) texts.insert(to_string(f));
  auto survives = [&](const InvariantPtr& f) {
    return texts.count(to_string(f)) > 0;
  };

  using F = InvariantFormula;
  std::vector<InvariantPtr> out;
  for (const InvariantPtr& f : alive) {
    if (f->kind == F::Kind::Cmp) {
      auto weaker = [&](InvCmp op) {
        return survives(F::cmp(op, f->lhs, f->rhs));
      };
      auto eq_same_sides = [&] { return weaker(InvCmp::Eq); };
      switch (f->op) {
        case InvCmp::Lt:
          if (weaker(InvCmp::Le)) continue;  // subsumption noted in spec
          break;
        case InvCmp::Gt:
          if (weaker(InvCmp::Ge)) continue;
          break;
        case InvCmp::Ne:
          if (weaker(InvCmp::Lt) || weaker(InvCmp::Gt)) continue;
          break;
        case InvCmp::Le:
        case InvCmp::Ge:
          if (eq_same_sides()) continue;  // equality is tighter
          break;
        case InvCmp::Eq:
          break;
      }
      out.push_back(f);
      continue;
    }
    if (f->kind == F::Kind::Implies && survives(f->b)) {
      continue;  // the consequent holds unconditionally
    }
    out.push_back(f);
  }
  return out;
}

std::vector<InvariantPtr> infer_invariants(const std::vector<Trace>& traces) {
  return filter_candidates(generate_candidates(traces), traces);
}

}  // namespace clpv
