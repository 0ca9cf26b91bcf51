#ifndef CLPV_INFER_HPP
#define CLPV_INFER_HPP

#include <vector>

#include "clpv/invariant.hpp"

namespace clpv {

class EmptyTraceSet : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Instantiates the template pool against the trace set, in deterministic
/// order (template rank, then term order, then constant):
///   - t == c / t >= c / t <= c with c drawn from the values of t;
///   - t1 {==,!=,<,<=,>,>=} t2 over all term pairs;
///   - (t1 == c1) ==> (t2 == c2) where the antecedent holds in at least two
///     traces.
/// Terms are orig(p) for each parameter (alphabetical) followed by return.
std::vector<InvariantPtr> generate_candidates(const std::vector<Trace>& traces);

/// Keeps the candidates satisfied by every trace, then prunes subsumed
/// survivors: strict comparisons and != drop when the matching non-strict
/// form survives; implications drop when their consequent alone survives.
std::vector<InvariantPtr> filter_candidates(
    const std::vector<InvariantPtr>& candidates,
    const std::vector<Trace>& traces);

/// generate + filter.
std::vector<InvariantPtr> infer_invariants(const std::vector<Trace>& traces);

}  // namespace clpv

#endif
