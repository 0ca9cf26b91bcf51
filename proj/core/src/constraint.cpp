#include "clpv/constraint.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace clpv {

CmpOp negate(CmpOp op) {
  switch (op) {
    case CmpOp::Eq: return CmpOp::Ne;
    case CmpOp::Ne: return CmpOp::Eq;
    case CmpOp::Lt: return CmpOp::Ge;
    case CmpOp::Le: return CmpOp::Gt;
    case CmpOp::Gt: return CmpOp::Le;
    case CmpOp::Ge: return CmpOp::Lt;
  }
  return op;
}

CmpOp flip(CmpOp op) {
  switch (op) {
    case CmpOp::Lt: return CmpOp::Gt;
    case CmpOp::Le: return CmpOp::Ge;
    case CmpOp::Gt: return CmpOp::Lt;
    case CmpOp::Ge: return CmpOp::Le;
    default: return op;
  }
}

bool cmp_holds(CmpOp op, Val a, Val b) {
  switch (op) {
    case CmpOp::Eq: return a == b;
    case CmpOp::Ne: return a != b;
    case CmpOp::Lt: return a < b;
    case CmpOp::Le: return a <= b;
    case CmpOp::Gt: return a > b;
    case CmpOp::Ge: return a >= b;
  }
  return false;
}

std::string to_string(CmpOp op) {
  switch (op) {
    case CmpOp::Eq: return "==";
    case CmpOp::Ne: return "!=";
    case CmpOp::Lt: return "<";
    case CmpOp::Le: return "<=";
    case CmpOp::Gt: return ">";
    case CmpOp::Ge: return ">=";
  }
  return "?";
}

std::string to_string(ArithOp op) {
  switch (op) {
    case ArithOp::Add: return "+";
    case ArithOp::Sub: return "-";
    case ArithOp::Mul: return "*";
    case ArithOp::Div: return "/";
    case ArithOp::Mod: return "%";
    case ArithOp::Neg: return "-";
  }
  return "?";
}

ConstraintPtr Constraint::cmp(CmpOp op, Term a, Term b) {
  auto c = std::make_shared<Constraint>();
  c->kind = Kind::Cmp;
  c->cmp_op = op;
  c->lhs = a;
  c->rhs = b;
  return c;
}

ConstraintPtr Constraint::arith(ArithOp op, VarId x, Term y, Term z) {
  auto c = std::make_shared<Constraint>();
  c->kind = Kind::Arith;
  c->arith_op = op;
  c->result = x;
  c->op_a = y;
  c->op_b = z;
  return c;
}

ConstraintPtr Constraint::conj(std::vector<ConstraintPtr> parts) {
  if (parts.size() == 1) return parts[0];
  auto c = std::make_shared<Constraint>();
  c->kind = Kind::And;
  c->parts = std::move(parts);
  return c;
}

ConstraintPtr Constraint::disj(std::vector<ConstraintPtr> parts) {
  if (parts.size() == 1) return parts[0];
  auto c = std::make_shared<Constraint>();
  c->kind = Kind::Or;
  c->parts = std::move(parts);
  return c;
}

ConstraintPtr Constraint::truth(bool b) {
  auto c = std::make_shared<Constraint>();
  c->kind = b ? Kind::True : Kind::False;
  return c;
}

ConstraintPtr Constraint::negation(const ConstraintPtr& c) {
  switch (c->kind) {
    case Kind::Cmp:
      return cmp(negate(c->cmp_op), c->lhs, c->rhs);
    case Kind::And: {
      std::vector<ConstraintPtr> parts;
      for (const auto& p : c->parts) parts.push_back(negation(p));
      return disj(std::move(parts));
    }
    case Kind::Or: {
      std::vector<ConstraintPtr> parts;
      for (const auto& p : c->parts) parts.push_back(negation(p));
      return conj(std::move(parts));
    }
    case Kind::True: return truth(false);
    case Kind::False: return truth(true);
    case Kind::Arith:
      throw std::logic_error("cannot negate an arithmetic definition");
  }
  return c;
}

void Constraint::collect_vars(std::vector<VarId>& out) const {
  auto add = [&](const Term& t) {
    if (t.is_var) out.push_back(t.var);
  };
  switch (kind) {
    case Kind::Cmp:
      add(lhs);
      add(rhs);
      break;
    case Kind::Arith:
      out.push_back(result);
      add(op_a);
      add(op_b);
      break;
    case Kind::And:
    case Kind::Or:
      for (const auto& p : parts) p->collect_vars(out);
      break;
    default:
      break;
  }
}

std::vector<VarId> Constraint::vars() const {
  std::vector<VarId> out;
  collect_vars(out);
  std::sort(out.begin(), out.end(),
            [](VarId a, VarId b) { return a.idx < b.idx; });
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool Constraint::eval(const std::function<Val(VarId)>& value) const {
  auto tv = [&](const Term& t) { return t.is_var ? value(t.var) : t.lit; };
  switch (kind) {
    case Kind::Cmp:
      return cmp_holds(cmp_op, tv(lhs), tv(rhs));
    case Kind::Arith: {
      Val a = tv(op_a);
      Val b = tv(op_b);
      Val r = 0;
      switch (arith_op) {
        case ArithOp::Add: r = a + b; break;
        case ArithOp::Sub: r = a - b; break;
        case ArithOp::Mul: r = a * b; break;
        case ArithOp::Div:
          if (b == 0) return false;
          r = a / b;
          break;
        case ArithOp::Mod:
          if (b == 0) return false;
          r = a % b;
          break;
        case ArithOp::Neg: r = -a; break;
      }
      return value(result) == r;
    }
    case Kind::And:
      return std::all_of(parts.begin(), parts.end(),
                         [&](const auto& p) { return p->eval(value); });
    case Kind::Or:
      return std::any_of(parts.begin(), parts.end(),
                         [&](const auto& p) { return p->eval(value); });
    case Kind::True: return true;
    case Kind::False: return false;
  }
  return false;
}

std::string Constraint::to_string(
    const std::function<std::string(VarId)>& name) const {
  auto ts = [&](const Term& t) {
    return t.is_var ? name(t.var) : std::to_string(t.lit);
  };
  std::ostringstream os;
  switch (kind) {
    case Kind::Cmp:
      os << ts(lhs) << " " << clpv::to_string(cmp_op) << " " << ts(rhs);
      break;
    case Kind::Arith:
      if (arith_op == ArithOp::Neg) {
        os << name(result) << " = -" << ts(op_a);
      } else {
        os << name(result) << " = " << ts(op_a) << " "
           << clpv::to_string(arith_op) << " " << ts(op_b);
      }
      break;
    case Kind::And:
    case Kind::Or: {
      const char* sep = kind == Kind::And ? " /\\ " : " \\/ ";
      os << "(";
      for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) os << sep;
        os << parts[i]->to_string(name);
      }
      os << ")";
      break;
    }
    case Kind::True: os << "true"; break;
    case Kind::False: os << "false"; break;
  }
  return os.str();
}

}  // namespace clpv
