#ifndef CLPV_CONSTRAINT_HPP
#define CLPV_CONSTRAINT_HPP

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "clpv/domain.hpp"

namespace clpv {

struct VarId {
  std::uint32_t idx = UINT32_MAX;
  bool valid() const { return idx != UINT32_MAX; }
  bool operator==(const VarId&) const = default;
};

/// A variable or an integer literal.
struct Term {
  bool is_var = false;
  VarId var{};
  Val lit = 0;

  static Term v(VarId id) { return Term{true, id, 0}; }
  static Term c(Val k) { return Term{false, {}, k}; }
  bool operator==(const Term&) const = default;
};

enum class CmpOp { Eq, Ne, Lt, Le, Gt, Ge };
CmpOp negate(CmpOp op);
CmpOp flip(CmpOp op);  // swap sides: a op b  <=>  b flip(op) a
bool cmp_holds(CmpOp op, Val a, Val b);
std::string to_string(CmpOp op);

enum class ArithOp { Add, Sub, Mul, Div, Mod, Neg };
std::string to_string(ArithOp op);

/// Constraints in negation normal form: negation appears only inside the
/// comparison operators. Arithmetic nodes are functional definitions
/// x = y op z and are never negated.
class Constraint;
using ConstraintPtr = std::shared_ptr<const Constraint>;

class Constraint {
 public:
  enum class Kind { Cmp, Arith, And, Or, True, False };

  Kind kind;
  // Cmp
  CmpOp cmp_op = CmpOp::Eq;
  Term lhs, rhs;
  // Arith: x = y op z (z ignored for Neg)
  ArithOp arith_op = ArithOp::Add;
  VarId result;
  Term op_a, op_b;
  // And / Or
  std::vector<ConstraintPtr> parts;

  static ConstraintPtr cmp(CmpOp op, Term a, Term b);
  static ConstraintPtr arith(ArithOp op, VarId x, Term y, Term z = Term::c(0));
  static ConstraintPtr conj(std::vector<ConstraintPtr> parts);
  static ConstraintPtr disj(std::vector<ConstraintPtr> parts);
  static ConstraintPtr truth(bool b);

  /// NNF negation. Arithmetic definitions cannot be negated.
  static ConstraintPtr negation(const ConstraintPtr& c);

  void collect_vars(std::vector<VarId>& out) const;
  std::vector<VarId> vars() const;

  /// Evaluate under a total valuation (used by brute-force oracles).
  bool eval(const std::function<Val(VarId)>& value) const;

  std::string to_string(const std::function<std::string(VarId)>& name) const;
};

}  // namespace clpv

#endif
