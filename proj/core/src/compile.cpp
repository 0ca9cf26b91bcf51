#include "clpv/compile.hpp"

#include <cctype>
#include <sstream>

namespace clpv {

namespace {

using Env = std::map<std::string, VarId>;  // encoded SSA name -> variable

VarId var_for(ConstraintStore& s, Env& env, const SsaName& n) {
  std::string key = encode_ssa(n.base, n.version);
  auto it = env.find(key);
  if (it != env.end()) return it->second;
  VarId v = s.new_var(n.text());
  env.emplace(std::move(key), v);
  return v;
}

void define(ConstraintStore& s, Env& env, VarId x, const ExprPtr& e);

Term compile_int(ConstraintStore& s, Env& env, const ExprPtr& e) {
  switch (e->kind) {
    case Expr::Kind::IntLit:
      return Term::c(e->value);
    case Expr::Kind::Var:
      return Term::v(var_for(s, env, decode_ssa(e->name)));
    default: {
      VarId aux = s.new_var("_t" + std::to_string(s.var_count()));
      define(s, env, aux, e);
      return Term::v(aux);
    }
  }
}

void define(ConstraintStore& s, Env& env, VarId x, const ExprPtr& e) {
  switch (e->kind) {
    case Expr::Kind::IntLit:
      s.post(Constraint::cmp(CmpOp::Eq, Term::v(x), Term::c(e->value)));
      return;
    case Expr::Kind::Var:
      s.post(Constraint::cmp(CmpOp::Eq, Term::v(x),
                             Term::v(var_for(s, env, decode_ssa(e->name)))));
      return;
    case Expr::Kind::Unary:
      if (e->un_op == UnOp::Neg) {
        s.post(Constraint::arith(ArithOp::Neg, x, compile_int(s, env, e->a)));
        return;
      }
      break;
    case Expr::Kind::Binary: {
      ArithOp op;
      switch (e->bin_op) {
        case BinOp::Add: op = ArithOp::Add; break;
        case BinOp::Sub: op = ArithOp::Sub; break;
        case BinOp::Mul: op = ArithOp::Mul; break;
        case BinOp::Div: op = ArithOp::Div; break;
        case BinOp::Mod: op = ArithOp::Mod; break;
        default: goto bad;
      }
      {
        Term a = compile_int(s, env, e->a);
        Term b = compile_int(s, env, e->b);
        s.post(Constraint::arith(op, x, a, b));
      }
      return;
    }
  }
bad:
  throw std::logic_error("boolean expression in integer position");
}

ConstraintPtr compile_bool(ConstraintStore& s, Env& env, const ExprPtr& e) {
  if (e->kind == Expr::Kind::Unary && e->un_op == UnOp::Not) {
    return Constraint::negation(compile_bool(s, env, e->a));
  }
  if (e->kind == Expr::Kind::Binary) {
    switch (e->bin_op) {
      case BinOp::And:
        return Constraint::conj(
            {compile_bool(s, env, e->a), compile_bool(s, env, e->b)});
      case BinOp::Or:
        return Constraint::disj(
            {compile_bool(s, env, e->a), compile_bool(s, env, e->b)});
      case BinOp::Eq:
      case BinOp::Ne:
      case BinOp::Lt:
      case BinOp::Le:
      case BinOp::Gt:
      case BinOp::Ge: {
        CmpOp op;
        switch (e->bin_op) {
          case BinOp::Eq: op = CmpOp::Eq; break;
          case BinOp::Ne: op = CmpOp::Ne; break;
          case BinOp::Lt: op = CmpOp::Lt; break;
          case BinOp::Le: op = CmpOp::Le; break;
          case BinOp::Gt: op = CmpOp::Gt; break;
          default: op = CmpOp::Ge; break;
        }
        Term a = compile_int(s, env, e->a);
        Term b = compile_int(s, env, e->b);
        return Constraint::cmp(op, a, b);
      }
      default:
        break;
    }
  }
  throw std::logic_error("integer expression in boolean position");
}

void collect_read_names(const ExprPtr& e, std::vector<std::string>& out) {
  switch (e->kind) {
    case Expr::Kind::Var: out.push_back(e->name); break;
    case Expr::Kind::Unary: collect_read_names(e->a, out); break;
    case Expr::Kind::Binary:
      collect_read_names(e->a, out);
      collect_read_names(e->b, out);
      break;
    default: break;
  }
}

void collect_stmt_reads(const std::vector<SsaStmtPtr>& body,
                        std::vector<std::string>& out) {
  for (const SsaStmtPtr& st : body) {
    if (st->expr) collect_read_names(st->expr, out);
    collect_stmt_reads(st->body, out);
    collect_stmt_reads(st->else_body, out);
  }
}

std::vector<VarId> resolve_reads(const Env& env,
                                 const std::vector<std::string>& names) {
  std::vector<VarId> out;
  for (const std::string& n : names) {
    auto it = env.find(n);
    if (it != env.end()) out.push_back(it->second);
  }
  return out;
}

void post_stmts(ConstraintStore& s, Env& env,
                const std::vector<SsaStmtPtr>& body, Val unfold_budget);

void post_stmt(ConstraintStore& s, Env& env, const SsaStmtPtr& st,
               Val unfold_budget) {
  switch (st->kind) {
    case SsaStmt::Kind::Assign: {
      VarId x = var_for(s, env, st->target);
      define(s, env, x, st->expr);
      return;
    }
    case SsaStmt::Kind::If: {
      ConstraintPtr cond = compile_bool(s, env, st->expr);
      std::vector<VarId> v0, v1, v2;
      for (const SsaStmt::Join& j : st->joins) {
        v0.push_back(var_for(s, env, {j.base, j.v0}));
        v1.push_back(var_for(s, env, {j.base, j.v1}));
        v2.push_back(var_for(s, env, {j.base, j.v2}));
      }
      Env captured = env;
      auto branch = [captured, unfold_budget](std::vector<SsaStmtPtr> stmts) {
        return BranchTemplate{[captured, unfold_budget,
                               stmts = std::move(stmts)](
                                  ConstraintStore& t,
                                  const std::vector<VarId>&) {
          Env e = captured;
          post_stmts(t, e, stmts, unfold_budget);
        }};
      };
      std::vector<std::string> reads;
      collect_stmt_reads(st->body, reads);
      collect_stmt_reads(st->else_body, reads);
      post_ite(s, cond, v0, v1, v2, branch(st->body), branch(st->else_body),
               resolve_reads(env, reads));
      return;
    }
    case SsaStmt::Kind::While: {
      std::vector<VarId> v0, v1, v2;
      std::vector<std::string> entry_keys, final_keys, bases;
      for (const SsaStmt::Join& j : st->joins) {
        v0.push_back(var_for(s, env, {j.base, j.v0}));
        v1.push_back(var_for(s, env, {j.base, j.v1}));
        v2.push_back(var_for(s, env, {j.base, j.v2}));
        entry_keys.push_back(encode_ssa(j.base, j.v0));
        final_keys.push_back(encode_ssa(j.base, j.v1));
        bases.push_back(j.base);
      }
      Env captured = env;
      ExprPtr cexpr = st->expr;
      CondTemplate cond_t{
          [captured, cexpr, entry_keys](ConstraintStore& t,
                                        const std::vector<VarId>& vec) {
            Env e = captured;
            for (std::size_t i = 0; i < vec.size(); ++i) {
              e[entry_keys[i]] = vec[i];
            }
            return compile_bool(t, e, cexpr);
          }};
      BodyTemplate body_t{
          [captured, body = st->body, entry_keys, final_keys, unfold_budget](
              ConstraintStore& t, const std::vector<VarId>& in,
              const std::vector<VarId>& out) {
            Env e = captured;
            for (std::size_t i = 0; i < in.size(); ++i) {
              e[entry_keys[i]] = in[i];
              e[final_keys[i]] = out[i];
            }
            post_stmts(t, e, body, unfold_budget);
          }};
      std::vector<std::string> reads;
      collect_read_names(st->expr, reads);
      collect_stmt_reads(st->body, reads);
      post_w(s, cond_t, v0, v1, v2, body_t, unfold_budget, bases,
             resolve_reads(env, reads));
      return;
    }
  }
}

void post_stmts(ConstraintStore& s, Env& env,
                const std::vector<SsaStmtPtr>& body, Val unfold_budget) {
  for (const SsaStmtPtr& st : body) post_stmt(s, env, st, unfold_budget);
}

}  // namespace

CompiledProgram compile(const SsaProgram& ssa, IntWidth width,
                        Val unfold_budget) {
  CompiledProgram cp;
  cp.width = width;
  cp.store = std::make_unique<ConstraintStore>(width);
  cp.params = ssa.params;
  ConstraintStore& s = *cp.store;
  Env env;
  for (const std::string& p : ssa.params) {
    cp.inputs.push_back(var_for(s, env, {p, 0}));
  }
  post_stmts(s, env, ssa.body, unfold_budget);
  cp.output = s.new_var("RET");
  define(s, env, cp.output, ssa.return_expr);
  for (const auto& [key, v] : env) cp.var_index[decode_ssa(key)] = v;
  cp.var_index[SsaName{"return", 0}] = cp.output;
  return cp;
}

std::vector<std::pair<std::vector<Val>, Val>> solution_graph(
    const SsaProgram& ssa, IntWidth width) {
  if (width.bits > 6) {
    throw WidthTooLarge("solution_graph is limited to widths of at most 6");
  }
  CompiledProgram cp = compile(ssa, width, 2 * width.max_int() + 4);
  ConstraintStore& s = *cp.store;
  s.set_propagation_budget(1'000'000'000);
  std::vector<VarId> vars = cp.inputs;
  vars.push_back(cp.output);
  std::vector<std::pair<std::vector<Val>, Val>> graph;
  if (s.propagate() == PropagateStatus::Failed) return graph;
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == vars.size()) {
      if (s.tainted()) return;  // budget-truncated subtree: not a witness
      std::vector<Val> row;
      for (VarId v : cp.inputs) row.push_back(s.domain(v).min());
      graph.emplace_back(std::move(row), s.domain(cp.output).min());
      return;
    }
    for (Val v : s.domain(vars[i]).values()) {
      bool pre_taint = s.tainted();
      Snapshot tok = s.snapshot();
      s.post(Constraint::cmp(CmpOp::Eq, Term::v(vars[i]), Term::c(v)));
      if (s.propagate() == PropagateStatus::Fixpoint) rec(i + 1);
      s.restore(tok);
      if (!pre_taint) s.clear_taints();
    }
  };
  rec(0);
  return graph;
}

// ---------------------------------------------------------------------------
// Clause-syntax dump
// ---------------------------------------------------------------------------

namespace {

std::string clp_name(const SsaName& n) {
  std::string s = n.base;
  for (char& c : s) c = char(std::toupper(static_cast<unsigned char>(c)));
  return s + std::to_string(n.version);
}

void emit_expr(std::ostream& os, const ExprPtr& e, bool parens) {
  switch (e->kind) {
    case Expr::Kind::IntLit: os << e->value; break;
    case Expr::Kind::Var: os << clp_name(decode_ssa(e->name)); break;
    case Expr::Kind::Unary:
      if (e->un_op == UnOp::Neg) {
        os << "-(";
        emit_expr(os, e->a, false);
        os << ")";
      } else {
        os << "#\\ (";
        emit_expr(os, e->a, false);
        os << ")";
      }
      break;
    case Expr::Kind::Binary: {
      const char* op;
      switch (e->bin_op) {
        case BinOp::Add: op = "+"; break;
        case BinOp::Sub: op = "-"; break;
        case BinOp::Mul: op = "*"; break;
        case BinOp::Div: op = "//"; break;
        case BinOp::Mod: op = "rem"; break;
        case BinOp::Eq: op = "#="; break;
        case BinOp::Ne: op = "#\\="; break;
        case BinOp::Lt: op = "#<"; break;
        case BinOp::Le: op = "#=<"; break;
        case BinOp::Gt: op = "#>"; break;
        case BinOp::Ge: op = "#>="; break;
        case BinOp::And: op = "#/\\"; break;
        case BinOp::Or: op = "#\\/"; break;
      }
      if (parens) os << "(";
      emit_expr(os, e->a, true);
      os << " " << op << " ";
      emit_expr(os, e->b, true);
      if (parens) os << ")";
      break;
    }
  }
}

void emit_vec(std::ostream& os, const std::vector<SsaStmt::Join>& joins,
              int SsaStmt::Join::* which) {
  os << "[";
  for (std::size_t i = 0; i < joins.size(); ++i) {
    if (i) os << ", ";
    os << clp_name({joins[i].base, joins[i].*which});
  }
  os << "]";
}

void emit_stmts(std::ostream& os, const std::vector<SsaStmtPtr>& body,
                int indent, bool trailing_comma = false) {
  std::string pad(indent * 2, ' ');
  for (std::size_t k = 0; k < body.size(); ++k) {
    const SsaStmtPtr& st = body[k];
    os << pad;
    switch (st->kind) {
      case SsaStmt::Kind::Assign:
        os << clp_name(st->target) << " #= ";
        emit_expr(os, st->expr, false);
        break;
      case SsaStmt::Kind::If:
        os << "ite(";
        emit_expr(os, st->expr, false);
        os << ", ";
        emit_vec(os, st->joins, &SsaStmt::Join::v0);
        os << ", ";
        emit_vec(os, st->joins, &SsaStmt::Join::v1);
        os << ", ";
        emit_vec(os, st->joins, &SsaStmt::Join::v2);
        os << ", [\n";
        emit_stmts(os, st->body, indent + 1);
        os << pad << "], [\n";
        emit_stmts(os, st->else_body, indent + 1);
        os << pad << "])";
        break;
      case SsaStmt::Kind::While:
        os << "w(";
        emit_expr(os, st->expr, false);
        os << ", ";
        emit_vec(os, st->joins, &SsaStmt::Join::v0);
        os << ", ";
        emit_vec(os, st->joins, &SsaStmt::Join::v1);
        os << ", ";
        emit_vec(os, st->joins, &SsaStmt::Join::v2);
        os << ", [\n";
        emit_stmts(os, st->body, indent + 1);
        os << pad << "])";
        break;
    }
    os << (k + 1 < body.size() || trailing_comma ? ",\n" : "\n");
  }
}

}  // namespace

std::string emit_clp(const SsaProgram& ssa) {
  std::ostringstream os;
  os << ssa.name << "([";
  for (std::size_t i = 0; i < ssa.params.size(); ++i) {
    if (i) os << ", ";
    os << clp_name({ssa.params[i], 0});
  }
  os << "], [RET]) :-\n";
  emit_stmts(os, ssa.body, 1, true);
  os << "  RET #= ";
  emit_expr(os, ssa.return_expr, false);
  os << ".\n";
  return os.str();
}

}  // namespace clpv
