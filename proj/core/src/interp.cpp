#include "clpv/interp.hpp"

#include <stdexcept>

namespace clpv {

namespace {

struct Stop {
  RunResult::Status status;
  FaultKind fault{};
  std::string where;
};

class Machine {
 public:
  Machine(IntWidth w, std::uint64_t budget) : width_(w), budget_(budget) {}

  RunResult exec(const ProgramAst& ast,
                 const std::map<std::string, Val>& inputs) {
    RunResult r;
    for (const std::string& p : ast.params) {
      auto it = inputs.find(p);
      if (it == inputs.end()) {
        throw std::invalid_argument("missing input for parameter '" + p + "'");
      }
      if (!width_.contains(it->second)) {
        throw std::invalid_argument("input '" + p + "' outside the " +
                                    std::to_string(width_.bits) +
                                    "-bit range");
      }
      env_.emplace_back(p, it->second);
    }
    try {
      // Top-level declarations stay in scope for the return expression.
      for (const StmtPtr& s : ast.body) stmt(s);
      r.value = eval_int(ast.return_expr);
      r.status = RunResult::Status::Returned;
      r.trace.entry = inputs;
      r.trace.exit_return = r.value;
      r.trace.steps = steps_;
    } catch (const Stop& stop) {
      r.status = stop.status;
      r.fault = stop.fault;
      r.fault_where = stop.where;
    }
    r.steps = steps_;
    return r;
  }

 private:
  void block(const std::vector<StmtPtr>& stmts) {
    std::size_t mark = env_.size();
    for (const StmtPtr& s : stmts) stmt(s);
    env_.resize(mark);
  }

  void stmt(const StmtPtr& s) {
    step();
    switch (s->kind) {
      case Stmt::Kind::Decl:
        env_.emplace_back(s->name, eval_int(s->expr));
        break;
      case Stmt::Kind::Assign:
        *slot(s->name) = eval_int(s->expr);
        break;
      case Stmt::Kind::If:
        if (eval_bool(s->expr)) {
          block(s->body);
        } else {
          block(s->else_body);
        }
        break;
      case Stmt::Kind::While:
        while (eval_bool(s->expr)) {
          block(s->body);
          step();  // each condition re-check costs a step
        }
        break;
    }
  }

  Val eval_int(const ExprPtr& e) {
    switch (e->kind) {
      case Expr::Kind::IntLit:
        return clip(e->value, "literal");
      case Expr::Kind::Var:
        return *slot(e->name);
      case Expr::Kind::Unary:
        return clip(-eval_int(e->a), "negation");
      case Expr::Kind::Binary: {
        Val a = eval_int(e->a);
        Val b = eval_int(e->b);
        switch (e->bin_op) {
          case BinOp::Add: return clip(a + b, "addition");
          case BinOp::Sub: return clip(a - b, "subtraction");
          case BinOp::Mul: return clip(a * b, "multiplication");
          case BinOp::Div:
            if (b == 0) fault(FaultKind::DivisionByZero, "division by zero");
            return clip(a / b, "division");
          case BinOp::Mod:
            if (b == 0) fault(FaultKind::DivisionByZero, "modulo by zero");
            return clip(a % b, "modulo");
          default:
            break;
        }
        break;
      }
    }
    throw std::logic_error("boolean expression in integer position");
  }

  bool eval_bool(const ExprPtr& e) {
    if (e->kind == Expr::Kind::Unary && e->un_op == UnOp::Not) {
      return !eval_bool(e->a);
    }
    switch (e->bin_op) {
      case BinOp::And: return eval_bool(e->a) && eval_bool(e->b);
      case BinOp::Or: return eval_bool(e->a) || eval_bool(e->b);
      case BinOp::Eq: return eval_int(e->a) == eval_int(e->b);
      case BinOp::Ne: return eval_int(e->a) != eval_int(e->b);
      case BinOp::Lt: return eval_int(e->a) < eval_int(e->b);
      case BinOp::Le: return eval_int(e->a) <= eval_int(e->b);
      case BinOp::Gt: return eval_int(e->a) > eval_int(e->b);
      case BinOp::Ge: return eval_int(e->a) >= eval_int(e->b);
      default:
        throw std::logic_error("integer expression in boolean position");
    }
  }

  Val clip(Val v, const char* what) {
    if (!width_.contains(v)) fault(FaultKind::Overflow, what);
    return v;
  }

  [[noreturn]] void fault(FaultKind k, const std::string& where) {
    throw Stop{RunResult::Status::Fault, k, where};
  }

  void step() {
    if (++steps_ > budget_) {
      throw Stop{RunResult::Status::DivergedAtBudget, {}, "step budget"};
    }
  }

  Val* slot(const std::string& name) {
    for (auto it = env_.rbegin(); it != env_.rend(); ++it) {
      if (it->first == name) return &it->second;
    }
    throw std::logic_error("unbound variable '" + name + "'");
  }

  IntWidth width_;
  std::uint64_t budget_;
  std::uint64_t steps_ = 0;
  std::vector<std::pair<std::string, Val>> env_;
};

}  // namespace

RunResult run(const ProgramAst& ast, const std::map<std::string, Val>& inputs,
              IntWidth width, std::uint64_t step_budget) {
  return Machine(width, step_budget).exec(ast, inputs);
}

std::vector<Trace> run_suite(const ProgramAst& ast,
                             const std::vector<std::vector<Val>>& rows,
                             IntWidth width, std::uint64_t step_budget) {
  std::vector<Trace> traces;
  for (const std::vector<Val>& row : rows) {
    if (row.size() != ast.params.size()) {
      throw std::invalid_argument("input row arity mismatch");
    }
    std::map<std::string, Val> inputs;
    for (std::size_t i = 0; i < row.size(); ++i) {
      inputs[ast.params[i]] = row[i];
    }
    RunResult r = run(ast, inputs, width, step_budget);
    if (r.returned()) traces.push_back(std::move(r.trace));
  }
  return traces;
}

}  // namespace clpv
