#include "clpv/refute.hpp"

#include <chrono>

namespace clpv {

const char* to_string(Verdict::UnknownReason r) {
  switch (r) {
    case Verdict::UnknownReason::LabelBudget: return "LabelBudget";
    case Verdict::UnknownReason::UnfoldBudget: return "UnfoldBudget";
    case Verdict::UnknownReason::PropagationBudget: return "PropagationBudget";
    case Verdict::UnknownReason::WallClock: return "WallClock";
  }
  return "?";
}

namespace {

CmpOp to_cmp(InvCmp op) {
  switch (op) {
    case InvCmp::Eq: return CmpOp::Eq;
    case InvCmp::Ne: return CmpOp::Ne;
    case InvCmp::Lt: return CmpOp::Lt;
    case InvCmp::Le: return CmpOp::Le;
    case InvCmp::Gt: return CmpOp::Gt;
    case InvCmp::Ge: return CmpOp::Ge;
  }
  return CmpOp::Eq;
}

Term to_term(const InvTerm& t, const CompiledProgram& cp) {
  switch (t.kind) {
    case InvTerm::Kind::Const:
      return Term::c(t.value);
    case InvTerm::Kind::Return:
      return Term::v(cp.output);
    case InvTerm::Kind::Orig: {
      auto it = cp.var_index.find(SsaName{t.param, 0});
      if (it == cp.var_index.end()) {
        throw UnknownTerm("orig(" + t.param + ") names no parameter");
      }
      return Term::v(it->second);
    }
  }
  return Term::c(0);
}

ConstraintPtr convert(const InvariantPtr& f, const CompiledProgram& cp,
                      bool negated) {
  using K = InvariantFormula::Kind;
  switch (f->kind) {
    case K::Cmp: {
      CmpOp op = to_cmp(f->op);
      if (negated) op = negate(op);
      return Constraint::cmp(op, to_term(f->lhs, cp), to_term(f->rhs, cp));
    }
    case K::Not:
      return convert(f->a, cp, !negated);
    case K::And: {
      std::vector<ConstraintPtr> parts = {convert(f->a, cp, negated),
                                          convert(f->b, cp, negated)};
      return negated ? Constraint::disj(parts) : Constraint::conj(parts);
    }
    case K::Or: {
      std::vector<ConstraintPtr> parts = {convert(f->a, cp, negated),
                                          convert(f->b, cp, negated)};
      return negated ? Constraint::conj(parts) : Constraint::disj(parts);
    }
    case K::Implies:
      // A ==> B  is  !A \/ B;  its negation is  A /\ !B.
      if (negated) {
        return Constraint::conj(
            {convert(f->a, cp, false), convert(f->b, cp, true)});
      }
      return Constraint::disj(
          {convert(f->a, cp, true), convert(f->b, cp, false)});
  }
  return Constraint::truth(!negated);
}

Verdict::UnknownReason taint_reason(const ConstraintStore& s,
                                    Verdict::UnknownReason fallback) {
  if (s.unfold_taint()) return Verdict::UnknownReason::UnfoldBudget;
  if (s.wallclock_taint()) return Verdict::UnknownReason::WallClock;
  if (s.propagation_taint()) return Verdict::UnknownReason::PropagationBudget;
  return fallback;
}

}  // namespace

ConstraintPtr negate_invariant(const InvariantPtr& f,
                               const CompiledProgram& cp) {
  return convert(f, cp, true);
}

Verdict check_invariant(const ProgramAst& ast, const InvariantPtr& f,
                        const CheckConfig& cfg) {
  using clock = std::chrono::steady_clock;
  auto started = clock::now();
  Verdict v;
  auto finish = [&](ConstraintStore* s) {
    if (s) {
      v.stats.unfoldings = s->stats().unfoldings;
      v.stats.label_nodes = s->stats().label_nodes;
      v.stats.propagations = s->stats().propagations;
    }
    v.stats.millis = std::chrono::duration_cast<std::chrono::milliseconds>(
                         clock::now() - started)
                         .count();
    return v;
  };

  CompiledProgram cp;
  try {
    Val unfold =
        cfg.unfold_budget.value_or(2 * cfg.width.max_int() + 4);
    cp = compile(to_ssa(ast), cfg.width, unfold);
    ConstraintStore& s = *cp.store;
    s.set_propagation_budget(cfg.propagation_budget);
    s.set_deadline(started + std::chrono::duration_cast<clock::duration>(
                                 std::chrono::duration<double>(
                                     cfg.wall_clock_seconds)));
    s.post(negate_invariant(f, cp));

    std::vector<VarId> label_vars = cp.inputs;
    label_vars.push_back(cp.output);
    std::vector<Val> solution;
    LabelStatus ls = s.label(label_vars, cfg.label_budget, &solution);

    switch (ls) {
      case LabelStatus::Exhausted:
        if (s.tainted()) {
          v.kind = Verdict::Kind::Unknown;
          v.reason = taint_reason(s, Verdict::UnknownReason::LabelBudget);
        } else {
          v.kind = Verdict::Kind::Proved;
        }
        return finish(&s);
      case LabelStatus::BudgetOut:
        v.kind = Verdict::Kind::Unknown;
        v.reason = taint_reason(s, Verdict::UnknownReason::LabelBudget);
        return finish(&s);
      case LabelStatus::Solution:
        break;
    }

    std::map<std::string, Val> inputs;
    for (std::size_t i = 0; i < cp.inputs.size(); ++i) {
      inputs[cp.params[i]] = solution[i];
    }
    Val output = solution.back();
    RunResult rr = run(ast, inputs, cfg.width, cfg.step_budget);
    bool confirmed = rr.returned() && rr.value == output &&
                     !evaluate_invariant(f, rr.trace);
    if (confirmed) {
      v.kind = Verdict::Kind::Disproved;
      v.counter_inputs = std::move(inputs);
      v.counter_output = output;
      v.interpreter_confirmed = true;
      return finish(&s);
    }
    if (s.tainted()) {
      // Truncated unfolding (or another budget) left the network
      // under-constrained; the labeled point is spurious, not a defect.
      v.kind = Verdict::Kind::Unknown;
      v.reason = taint_reason(s, Verdict::UnknownReason::LabelBudget);
      return finish(&s);
    }
    v.kind = Verdict::Kind::Error;
    v.message = "internal error: counter-example failed interpreter replay";
    return finish(&s);
  } catch (const std::exception& e) {
    v.kind = Verdict::Kind::Error;
    v.message = e.what();
    return finish(cp.store ? cp.store.get() : nullptr);
  }
}

std::vector<Verdict> check_all(const ProgramAst& ast,
                               const std::vector<InvariantPtr>& fs,
                               const CheckConfig& cfg) {
  std::vector<Verdict> out;
  out.reserve(fs.size());
  for (const InvariantPtr& f : fs) out.push_back(check_invariant(ast, f, cfg));
  return out;
}

}  // namespace clpv
