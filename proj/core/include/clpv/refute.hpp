#ifndef CLPV_REFUTE_HPP
#define CLPV_REFUTE_HPP

#include <optional>

#include "clpv/compile.hpp"
#include "clpv/invariant.hpp"

namespace clpv {

struct CheckConfig {
  IntWidth width{8};
  /// Loop materialization bound; defaults to 2 * MAX_INT + 4 for the width.
  std::optional<Val> unfold_budget;
  std::uint64_t label_budget = 1'000'000;
  std::uint64_t propagation_budget = 10'000'000;
  double wall_clock_seconds = 60.0;
  std::uint64_t step_budget = 1'000'000;  // counter-example replay
};

struct Verdict {
  enum class Kind { Proved, Disproved, Unknown, Error };
  enum class UnknownReason {
    LabelBudget,
    UnfoldBudget,
    PropagationBudget,
    WallClock,
  };
  struct Stats {
    std::uint64_t unfoldings = 0;
    std::uint64_t label_nodes = 0;
    std::uint64_t propagations = 0;
    std::int64_t millis = 0;
  };

  Kind kind = Kind::Unknown;
  std::map<std::string, Val> counter_inputs;  // Disproved
  Val counter_output = 0;                     // Disproved
  bool interpreter_confirmed = false;         // Disproved
  UnknownReason reason = UnknownReason::LabelBudget;  // Unknown
  std::string message;                        // Error
  Stats stats;
};

const char* to_string(Verdict::UnknownReason r);

/// Negation of the invariant as a negation-normal-form constraint over the
/// compiled network's input variables (orig terms) and output (return).
/// Throws UnknownTerm for orig terms that name no parameter.
ConstraintPtr negate_invariant(const InvariantPtr& f,
                               const CompiledProgram& cp);

/// Decides whether the constraint network entails the invariant by solving
/// network /\ !invariant: a failed store or exhausted untainted search proves
/// the invariant; a labeled solution, once re-validated by the interpreter,
/// disproves it with a counter-example; every budget event is Unknown.
Verdict check_invariant(const ProgramAst& ast, const InvariantPtr& f,
                        const CheckConfig& cfg);

/// Independent checks on fresh stores, order-preserving. A formula whose
/// terms do not match the program yields an Error verdict for that entry
/// without disturbing the others.
std::vector<Verdict> check_all(const ProgramAst& ast,
                               const std::vector<InvariantPtr>& fs,
                               const CheckConfig& cfg);

}  // namespace clpv

#endif
