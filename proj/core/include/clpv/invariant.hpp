#ifndef CLPV_INVARIANT_HPP
#define CLPV_INVARIANT_HPP

#include <memory>
#include <stdexcept>
#include <string>

#include "clpv/interp.hpp"

namespace clpv {

/// A term of the exit-point invariant language: the value of a parameter at
/// entry (`orig(name)`), the returned value (`return`), or a literal.
struct InvTerm {
  enum class Kind { Orig, Return, Const };
  Kind kind = Kind::Const;
  std::string param;  // Orig
  Val value = 0;      // Const

  static InvTerm orig(std::string p) {
    return {Kind::Orig, std::move(p), 0};
  }
  static InvTerm ret() { return {Kind::Return, {}, 0}; }
  static InvTerm lit(Val v) { return {Kind::Const, {}, v}; }
  bool operator==(const InvTerm&) const = default;
};

enum class InvCmp { Eq, Ne, Lt, Le, Gt, Ge };

struct InvariantFormula;
using InvariantPtr = std::shared_ptr<const InvariantFormula>;

struct InvariantFormula {
  enum class Kind { Cmp, Not, And, Or, Implies };
  Kind kind;
  InvCmp op = InvCmp::Eq;  // Cmp
  InvTerm lhs, rhs;        // Cmp
  InvariantPtr a, b;       // Not uses a; And/Or/Implies use a and b

  static InvariantPtr cmp(InvCmp op, InvTerm l, InvTerm r);
  static InvariantPtr negate(InvariantPtr f);
  static InvariantPtr conj(InvariantPtr a, InvariantPtr b);
  static InvariantPtr disj(InvariantPtr a, InvariantPtr b);
  static InvariantPtr implies(InvariantPtr a, InvariantPtr b);
};

class InvariantSyntaxError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when a formula references a parameter absent from the program or
/// trace under evaluation.
class UnknownTerm : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parses one invariant in the shared line syntax: terms `orig(name)`,
/// `return`, integers; operators `== != < <= > >= && || ! ==>`.
InvariantPtr parse_invariant(const std::string& text);

std::string to_string(const InvariantPtr& f);

/// Standard boolean evaluation against one trace. Throws UnknownTerm if an
/// orig(p) is not among the trace's entry values.
bool evaluate_invariant(const InvariantPtr& f, const Trace& trace);

}  // namespace clpv

#endif
