#ifndef CLPV_COMBINATORS_HPP
#define CLPV_COMBINATORS_HPP

#include <functional>
#include <string>
#include <vector>

#include "clpv/store.hpp"

namespace clpv {

/// Condition pattern over a vector of variables: posts auxiliary arithmetic
/// definitions for subexpressions and returns the comparison tree. Called
/// once per loop iteration with that iteration's entry versions.
struct CondTemplate {
  std::function<ConstraintPtr(ConstraintStore&, const std::vector<VarId>&)>
      make;
};

/// Loop-body pattern: posts the body's constraints between the entry
/// versions `in` and the end-of-iteration versions `out` (positionally
/// aligned with the loop vectors).
struct BodyTemplate {
  std::function<void(ConstraintStore&, const std::vector<VarId>& in,
                     const std::vector<VarId>& out)>
      post;
};

/// Branch pattern for a conditional: posts the branch's constraints, binding
/// the final version of each assigned variable to the given slot.
struct BranchTemplate {
  std::function<void(ConstraintStore&, const std::vector<VarId>& finals)> post;
};

/// Conditional combinator. Posts the semantics of
///   if (cond) { then } else { else }   with join vector v2 = phi(v0, v1):
/// forward guards on the condition, backward guards from the join values,
/// and a constructive disjunction of the two complete branches.
/// `extern_reads` lists variables the branches read beyond the vectors.
void post_ite(ConstraintStore& s, ConstraintPtr cond, std::vector<VarId> v0,
              std::vector<VarId> v1, std::vector<VarId> v2,
              BranchTemplate then_t, BranchTemplate else_t,
              std::vector<VarId> extern_reads = {});

/// Iteration combinator for  v2 = phi(v0, v1) while (cond) { body }.
/// Guards: cond entailed -> enter; cond disentailed -> exit (v2 = v0);
/// cond /\ body refuted -> exit; some v0[i] = v2[i] disentailed -> enter.
/// Entering posts the condition and body firmly and lazily materializes the
/// next iteration over a fresh vector; `depth_left` bounds the number of
/// materializations, after which the store is unfold-tainted.
void post_w(ConstraintStore& s, CondTemplate cond_t, std::vector<VarId> v0,
            std::vector<VarId> v1, std::vector<VarId> v2, BodyTemplate body_t,
            Val depth_left, std::vector<std::string> base_names = {},
            std::vector<VarId> extern_reads = {});

/// Exit-guard test of the iteration combinator, exposed for direct testing:
/// if cond /\ body is refuted by speculative propagation, posts the
/// loop-skip constraints (negated condition and v2 = v0) and returns true.
bool check_body_contradiction(ConstraintStore& s, const ConstraintPtr& cond,
                              const BodyTemplate& body_t,
                              const std::vector<VarId>& v0,
                              const std::vector<VarId>& v1,
                              const std::vector<VarId>& v2);

}  // namespace clpv

#endif
