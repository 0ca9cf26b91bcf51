#include "clpv/ssa.hpp"

#include <map>
#include <set>
#include <sstream>

namespace clpv {

std::string encode_ssa(const std::string& base, int version) {
  return base + "@" + std::to_string(version);
}

SsaName decode_ssa(const std::string& encoded) {
  std::size_t at = encoded.rfind('@');
  return {encoded.substr(0, at), std::stoi(encoded.substr(at + 1))};
}

namespace {

class Converter {
 public:
  SsaProgram convert(const ProgramAst& ast) {
    SsaProgram out;
    out.name = ast.name;
    out.params = ast.params;
    for (const std::string& p : ast.params) define(p);
    // Top-level declarations stay in scope for the return expression.
    for (const StmtPtr& s : ast.body) stmt(s, out.body);
    out.return_expr = rename(ast.return_expr);
    return out;
  }

 private:
  // env_: base -> current version, in declaration order.
  std::vector<std::pair<std::string, int>> env_;
  std::map<std::string, int> next_;  // base -> next unused version

  int fresh(const std::string& base) {
    auto it = next_.find(base);
    if (it == next_.end()) {
      next_[base] = 1;
      return 0;
    }
    return it->second++;
  }

  void define(const std::string& base) { env_.emplace_back(base, fresh(base)); }

  int* lookup(const std::string& base) {
    for (auto& [b, v] : env_) {
      if (b == base) return &v;
    }
    return nullptr;
  }

  ExprPtr rename(const ExprPtr& e) {
    switch (e->kind) {
      case Expr::Kind::IntLit:
        return e;
      case Expr::Kind::Var:
        return Expr::var(encode_ssa(e->name, *lookup(e->name)));
      case Expr::Kind::Unary:
        return Expr::unary(e->un_op, rename(e->a));
      case Expr::Kind::Binary:
        return Expr::binary(e->bin_op, rename(e->a), rename(e->b));
    }
    return e;
  }

  static void assigned_bases(const std::vector<StmtPtr>& body,
                             std::set<std::string>& out) {
    for (const StmtPtr& s : body) {
      if (s->kind == Stmt::Kind::Assign) out.insert(s->name);
      assigned_bases(s->body, out);
      assigned_bases(s->else_body, out);
    }
  }

  std::vector<SsaStmtPtr> stmts(const std::vector<StmtPtr>& in) {
    std::vector<SsaStmtPtr> out;
    std::size_t scope_mark = env_.size();
    for (const StmtPtr& s : in) stmt(s, out);
    env_.resize(scope_mark);  // declarations fall out of scope
    return out;
  }

  void stmt(const StmtPtr& s, std::vector<SsaStmtPtr>& out) {
    switch (s->kind) {
      case Stmt::Kind::Decl: {
        ExprPtr rhs = rename(s->expr);
        define(s->name);
        auto n = std::make_shared<SsaStmt>();
        n->kind = SsaStmt::Kind::Assign;
        n->target = {s->name, *lookup(s->name)};
        n->expr = rhs;
        out.push_back(n);
        break;
      }
      case Stmt::Kind::Assign: {
        ExprPtr rhs = rename(s->expr);
        int* v = lookup(s->name);
        *v = fresh(s->name);
        auto n = std::make_shared<SsaStmt>();
        n->kind = SsaStmt::Kind::Assign;
        n->target = {s->name, *v};
        n->expr = rhs;
        out.push_back(n);
        break;
      }
      case Stmt::Kind::If: {
        auto n = std::make_shared<SsaStmt>();
        n->kind = SsaStmt::Kind::If;
        n->expr = rename(s->expr);
        auto entry = env_;
        n->body = stmts(s->body);
        auto then_env = env_;
        env_ = entry;
        n->else_body = stmts(s->else_body);
        auto else_env = env_;
        env_ = entry;
        for (std::size_t i = 0; i < entry.size(); ++i) {
          int tv = then_env[i].second;
          int ev = else_env[i].second;
          if (tv == entry[i].second && ev == entry[i].second) continue;
          const std::string& base = entry[i].first;
          int joined = fresh(base);
          n->joins.push_back({base, tv, ev, joined});
          env_[i].second = joined;
        }
        out.push_back(n);
        break;
      }
      case Stmt::Kind::While: {
        std::set<std::string> assigned;
        assigned_bases(s->body, assigned);
        auto n = std::make_shared<SsaStmt>();
        n->kind = SsaStmt::Kind::While;
        n->expr = rename(s->expr);  // condition over the entry versions
        auto entry = env_;
        n->body = stmts(s->body);
        auto body_env = env_;
        env_ = entry;
        for (std::size_t i = 0; i < entry.size(); ++i) {
          const std::string& base = entry[i].first;
          if (!assigned.count(base)) continue;
          n->joins.push_back({base, entry[i].second, body_env[i].second,
                              fresh(base)});
          env_[i].second = n->joins.back().v2;
        }
        out.push_back(n);
        break;
      }
    }
  }
};

void print_ssa_expr(std::ostream& os, const ExprPtr& e, int parent_prec);

int ssa_prec(BinOp op) {
  switch (op) {
    case BinOp::Or: return 1;
    case BinOp::And: return 2;
    case BinOp::Add:
    case BinOp::Sub: return 4;
    case BinOp::Mul:
    case BinOp::Div:
    case BinOp::Mod: return 5;
    default: return 3;
  }
}

const char* ssa_op(BinOp op) {
  switch (op) {
    case BinOp::Add: return "+";
    case BinOp::Sub: return "-";
    case BinOp::Mul: return "*";
    case BinOp::Div: return "/";
    case BinOp::Mod: return "%";
    case BinOp::Eq: return "==";
    case BinOp::Ne: return "!=";
    case BinOp::Lt: return "<";
    case BinOp::Le: return "<=";
    case BinOp::Gt: return ">";
    case BinOp::Ge: return ">=";
    case BinOp::And: return "&&";
    case BinOp::Or: return "||";
  }
  return "?";
}

void print_ssa_expr(std::ostream& os, const ExprPtr& e, int parent_prec) {
  switch (e->kind) {
    case Expr::Kind::IntLit: os << e->value; break;
    case Expr::Kind::Var: os << decode_ssa(e->name).text(); break;
    case Expr::Kind::Unary:
      os << (e->un_op == UnOp::Neg ? "-" : "!") << "(";
      print_ssa_expr(os, e->a, 0);
      os << ")";
      break;
    case Expr::Kind::Binary: {
      int prec = ssa_prec(e->bin_op);
      bool paren = prec < parent_prec;
      if (paren) os << "(";
      print_ssa_expr(os, e->a, prec);
      os << " " << ssa_op(e->bin_op) << " ";
      print_ssa_expr(os, e->b, prec + 1);
      if (paren) os << ")";
      break;
    }
  }
}

void print_ssa_stmts(std::ostream& os, const std::vector<SsaStmtPtr>& body,
                     int indent) {
  std::string pad(indent * 2, ' ');
  for (const SsaStmtPtr& s : body) {
    switch (s->kind) {
      case SsaStmt::Kind::Assign:
        os << pad << s->target.text() << " = ";
        print_ssa_expr(os, s->expr, 0);
        os << ";\n";
        break;
      case SsaStmt::Kind::If:
        os << pad << "if (";
        print_ssa_expr(os, s->expr, 0);
        os << ") {\n";
        print_ssa_stmts(os, s->body, indent + 1);
        os << pad << "} else {\n";
        print_ssa_stmts(os, s->else_body, indent + 1);
        os << pad << "}\n";
        for (const SsaStmt::Join& j : s->joins) {
          os << pad << SsaName{j.base, j.v2}.text() << " = phi("
             << SsaName{j.base, j.v0}.text() << ", "
             << SsaName{j.base, j.v1}.text() << ");\n";
        }
        break;
      case SsaStmt::Kind::While:
        for (const SsaStmt::Join& j : s->joins) {
          os << pad << SsaName{j.base, j.v2}.text() << " = phi("
             << SsaName{j.base, j.v0}.text() << ", "
             << SsaName{j.base, j.v1}.text() << ");\n";
        }
        os << pad << "while (";
        print_ssa_expr(os, s->expr, 0);
        os << ") {\n";
        print_ssa_stmts(os, s->body, indent + 1);
        os << pad << "}\n";
        break;
    }
  }
}

}  // namespace

SsaProgram to_ssa(const ProgramAst& ast) { return Converter().convert(ast); }

std::string pretty_print_ssa(const SsaProgram& ssa) {
  std::ostringstream os;
  os << "int " << ssa.name << "(";
  for (std::size_t i = 0; i < ssa.params.size(); ++i) {
    if (i) os << ", ";
    os << "int " << SsaName{ssa.params[i], 0}.text();
  }
  os << ") {\n";
  print_ssa_stmts(os, ssa.body, 1);
  os << "  return ";
  print_ssa_expr(os, ssa.return_expr, 0);
  os << ";\n}\n";
  return os.str();
}

}  // namespace clpv
