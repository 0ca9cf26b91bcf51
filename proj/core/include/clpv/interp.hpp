#ifndef CLPV_INTERP_HPP
#define CLPV_INTERP_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "clpv/ast.hpp"

namespace clpv {

/// One observed execution: the parameter values and the returned value.
struct Trace {
  std::map<std::string, Val> entry;
  Val exit_return = 0;
  std::uint64_t steps = 0;
};

enum class FaultKind { Overflow, DivisionByZero };

struct RunResult {
  enum class Status { Returned, DivergedAtBudget, Fault };
  Status status = Status::Returned;
  Val value = 0;           // Returned
  Trace trace;             // Returned
  FaultKind fault{};       // Fault
  std::string fault_where; // Fault: short description
  std::uint64_t steps = 0;

  bool returned() const { return status == Status::Returned; }
};

/// Executes the program under math-integer semantics clipped to the given
/// width: any intermediate value outside [min_int, max_int] is an overflow
/// fault (no wraparound); division truncates toward zero; a zero divisor is
/// a fault. Throws std::invalid_argument for missing or out-of-range inputs.
RunResult run(const ProgramAst& ast, const std::map<std::string, Val>& inputs,
              IntWidth width, std::uint64_t step_budget = 1'000'000);

/// Runs the program once per input row; rows that fault or exhaust the step
/// budget yield no trace. Each row assigns the parameters positionally.
std::vector<Trace> run_suite(const ProgramAst& ast,
                             const std::vector<std::vector<Val>>& rows,
                             IntWidth width,
                             std::uint64_t step_budget = 1'000'000);

}  // namespace clpv

#endif
