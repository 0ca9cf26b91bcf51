#ifndef CLPV_COMPILE_HPP
#define CLPV_COMPILE_HPP

#include <map>
#include <memory>
#include <stdexcept>

#include "clpv/combinators.hpp"
#include "clpv/ssa.hpp"
#include "clpv/store.hpp"

namespace clpv {

/// The constraint-network form of a program: a relation between the
/// version-0 parameter variables and the returned value.
struct CompiledProgram {
  std::unique_ptr<ConstraintStore> store;
  IntWidth width{8};
  std::vector<std::string> params;
  std::vector<VarId> inputs;  // version-0 parameter variables
  VarId output;               // registered in var_index as ("return", 0)
  std::map<SsaName, VarId> var_index;  // top-level SSA versions

  VarId lookup(const SsaName& n) const { return var_index.at(n); }
};

/// Builds the constraint network: a domain-constrained variable per SSA
/// version, arithmetic constraints for assignments, the conditional
/// combinator for if nodes and the iteration combinator for while nodes
/// (body iterations materialize lazily up to unfold_budget).
CompiledProgram compile(const SsaProgram& ssa, IntWidth width,
                        Val unfold_budget);

class WidthTooLarge : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Exhaustively labels the inputs and output of the compiled network,
/// returning every (input vector, output) pair the network admits.
/// Refuses widths above 6 bits.
std::vector<std::pair<std::vector<Val>, Val>> solution_graph(
    const SsaProgram& ssa, IntWidth width);

/// Readable dump of the network in clause syntax, used by the CLI.
/// Deterministic for a given program.
std::string emit_clp(const SsaProgram& ssa);

}  // namespace clpv

#endif
