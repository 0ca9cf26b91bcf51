#include "clpv/invariant.hpp"

#include <cctype>
#include <sstream>

namespace clpv {

InvariantPtr InvariantFormula::cmp(InvCmp op, InvTerm l, InvTerm r) {
  auto f = std::make_shared<InvariantFormula>();
  f->kind = Kind::Cmp;
  f->op = op;
  f->lhs = std::move(l);
  f->rhs = std::move(r);
  return f;
}

InvariantPtr InvariantFormula::negate(InvariantPtr inner) {
  auto f = std::make_shared<InvariantFormula>();
  f->kind = Kind::Not;
  f->a = std::move(inner);
  return f;
}

static InvariantPtr pair_node(InvariantFormula::Kind k, InvariantPtr a,
                              InvariantPtr b) {
  auto f = std::make_shared<InvariantFormula>();
  f->kind = k;
  f->a = std::move(a);
  f->b = std::move(b);
  return f;
}

InvariantPtr InvariantFormula::conj(InvariantPtr a, InvariantPtr b) {
  return pair_node(Kind::And, std::move(a), std::move(b));
}
InvariantPtr InvariantFormula::disj(InvariantPtr a, InvariantPtr b) {
  return pair_node(Kind::Or, std::move(a), std::move(b));
}
InvariantPtr InvariantFormula::implies(InvariantPtr a, InvariantPtr b) {
  return pair_node(Kind::Implies, std::move(a), std::move(b));
}

namespace {

class InvParser {
 public:
  explicit InvParser(const std::string& s) : s_(s) {}

  InvariantPtr parse() {
    InvariantPtr f = implication();
    skip_ws();
    if (i_ < s_.size()) {
      err("trailing input after formula: '" + s_.substr(i_) + "'");
    }
    return f;
  }

 private:
  [[noreturn]] void err(const std::string& msg) {
    throw InvariantSyntaxError(msg);
  }

  void skip_ws() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_])))
      ++i_;
  }

  bool eat(const std::string& tok) {
    skip_ws();
    if (s_.compare(i_, tok.size(), tok) != 0) return false;
    // "==" must not consume the prefix of "==>".
    char next = i_ + tok.size() < s_.size() ? s_[i_ + tok.size()] : '\0';
    if (tok == "==" && next == '>') return false;
    i_ += tok.size();
    return true;
  }

  bool peek_word(const std::string& w) {
    skip_ws();
    if (s_.compare(i_, w.size(), w) != 0) return false;
    char next = i_ + w.size() < s_.size() ? s_[i_ + w.size()] : '\0';
    return !std::isalnum(static_cast<unsigned char>(next)) && next != '_';
  }

  InvariantPtr implication() {  // right-associative, lowest precedence
    InvariantPtr a = disjunction();
    if (eat("==>")) return InvariantFormula::implies(a, implication());
    return a;
  }

  InvariantPtr disjunction() {
    InvariantPtr a = conjunction();
    while (eat("||")) a = InvariantFormula::disj(a, conjunction());
    return a;
  }

  InvariantPtr conjunction() {
    InvariantPtr a = negation();
    while (eat("&&")) a = InvariantFormula::conj(a, negation());
    return a;
  }

  InvariantPtr negation() {
    skip_ws();
    if (i_ < s_.size() && s_[i_] == '!' &&
        (i_ + 1 >= s_.size() || s_[i_ + 1] != '=')) {
      ++i_;
      return InvariantFormula::negate(negation());
    }
    return atom();
  }

  InvariantPtr atom() {
    skip_ws();
    if (i_ < s_.size() && s_[i_] == '(') {
      // Could be a parenthesized formula; terms never start with '('.
      ++i_;
      InvariantPtr f = implication();
      skip_ws();
      if (i_ >= s_.size() || s_[i_] != ')') err("expected ')'");
      ++i_;
      return f;
    }
    return comparison();
  }

  InvariantPtr comparison() {
    InvTerm l = term();
    skip_ws();
    InvCmp op;
    if (s_.compare(i_, 3, "==>") == 0) {
      err("expected a comparison operator before '==>'");
    } else if (eat("==")) {
      op = InvCmp::Eq;
    } else if (eat("!=")) {
      op = InvCmp::Ne;
    } else if (eat("<=")) {
      op = InvCmp::Le;
    } else if (eat(">=")) {
      op = InvCmp::Ge;
    } else if (eat("<")) {
      op = InvCmp::Lt;
    } else if (eat(">")) {
      op = InvCmp::Gt;
    } else {
      err("expected a comparison operator at '" + s_.substr(i_) + "'");
    }
    InvTerm r = term();
    return InvariantFormula::cmp(op, std::move(l), std::move(r));
  }

  InvTerm term() {
    skip_ws();
    if (peek_word("return")) {
      i_ += 6;
      return InvTerm::ret();
    }
    if (peek_word("orig")) {
      i_ += 4;
      skip_ws();
      if (i_ >= s_.size() || s_[i_] != '(') err("expected '(' after orig");
      ++i_;
      skip_ws();
      std::string name;
      while (i_ < s_.size() &&
             (std::isalnum(static_cast<unsigned char>(s_[i_])) ||
              s_[i_] == '_')) {
        name += s_[i_++];
      }
      if (name.empty()) err("expected a parameter name inside orig(...)");
      skip_ws();
      if (i_ >= s_.size() || s_[i_] != ')') err("expected ')' after orig");
      ++i_;
      return InvTerm::orig(std::move(name));
    }
    bool neg = false;
    if (i_ < s_.size() && s_[i_] == '-') {
      neg = true;
      ++i_;
    }
    if (i_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[i_]))) {
      err("expected a term at '" + s_.substr(i_) + "'");
    }
    Val v = 0;
    std::string digits;
    while (i_ < s_.size() &&
           std::isdigit(static_cast<unsigned char>(s_[i_]))) {
      digits += s_[i_++];
    }
    try {
      v = std::stoll(digits);
    } catch (const std::out_of_range&) {
      err("integer literal out of range: " + digits);
    }
    return InvTerm::lit(neg ? -v : v);
  }

  const std::string& s_;
  std::size_t i_ = 0;
};

std::string term_text(const InvTerm& t) {
  switch (t.kind) {
    case InvTerm::Kind::Orig: return "orig(" + t.param + ")";
    case InvTerm::Kind::Return: return "return";
    case InvTerm::Kind::Const: return std::to_string(t.value);
  }
  return "?";
}

const char* cmp_text(InvCmp op) {
  switch (op) {
    case InvCmp::Eq: return "==";
    case InvCmp::Ne: return "!=";
    case InvCmp::Lt: return "<";
    case InvCmp::Le: return "<=";
    case InvCmp::Gt: return ">";
    case InvCmp::Ge: return ">=";
  }
  return "?";
}

void print_formula(std::ostream& os, const InvariantPtr& f, bool parens) {
  switch (f->kind) {
    case InvariantFormula::Kind::Cmp:
      os << term_text(f->lhs) << " " << cmp_text(f->op) << " "
         << term_text(f->rhs);
      break;
    case InvariantFormula::Kind::Not:
      os << "!(";
      print_formula(os, f->a, false);
      os << ")";
      break;
    case InvariantFormula::Kind::And:
    case InvariantFormula::Kind::Or:
    case InvariantFormula::Kind::Implies: {
      const char* op = f->kind == InvariantFormula::Kind::And   ? " && "
                       : f->kind == InvariantFormula::Kind::Or ? " || "
                                                               : " ==> ";
      if (parens) os << "(";
      print_formula(os, f->a, true);
      os << op;
      print_formula(os, f->b, true);
      if (parens) os << ")";
      break;
    }
  }
}

}  // namespace

InvariantPtr parse_invariant(const std::string& text) {
  return InvParser(text).parse();
}

std::string to_string(const InvariantPtr& f) {
  std::ostringstream os;
  print_formula(os, f, false);
  return os.str();
}

static Val term_value(const InvTerm& t, const Trace& trace) {
  switch (t.kind) {
    case InvTerm::Kind::Const:
      return t.value;
    case InvTerm::Kind::Return:
      return trace.exit_return;
    case InvTerm::Kind::Orig: {
      auto it = trace.entry.find(t.param);
      if (it == trace.entry.end()) {
        throw UnknownTerm("orig(" + t.param + ") is not a trace entry value");
      }
      return it->second;
    }
  }
  return 0;
}

bool evaluate_invariant(const InvariantPtr& f, const Trace& trace) {
  switch (f->kind) {
    case InvariantFormula::Kind::Cmp: {
      Val a = term_value(f->lhs, trace);
      Val b = term_value(f->rhs, trace);
      switch (f->op) {
        case InvCmp::Eq: return a == b;
        case InvCmp::Ne: return a != b;
        case InvCmp::Lt: return a < b;
        case InvCmp::Le: return a <= b;
        case InvCmp::Gt: return a > b;
        case InvCmp::Ge: return a >= b;
      }
      return false;
    }
    case InvariantFormula::Kind::Not:
      return !evaluate_invariant(f->a, trace);
    case InvariantFormula::Kind::And:
      return evaluate_invariant(f->a, trace) && evaluate_invariant(f->b, trace);
    case InvariantFormula::Kind::Or:
      return evaluate_invariant(f->a, trace) || evaluate_invariant(f->b, trace);
    case InvariantFormula::Kind::Implies:
      return !evaluate_invariant(f->a, trace) ||
             evaluate_invariant(f->b, trace);
  }
  return false;
}

}  // namespace clpv
