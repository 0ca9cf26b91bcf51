#ifndef CLPV_SSA_HPP
#define CLPV_SSA_HPP

#include <string>
#include <vector>

#include "clpv/ast.hpp"

namespace clpv {

/// A versioned variable. Version 0 is the parameter / declaration value.
struct SsaName {
  std::string base;
  int version = 0;

  bool operator==(const SsaName&) const = default;
  auto operator<=>(const SsaName&) const = default;
  std::string text() const { return base + std::to_string(version); }
};

/// Versioned variables are carried inside ordinary expressions as encoded
/// names ("base@version") so the expression walkers can be shared.
std::string encode_ssa(const std::string& base, int version);
SsaName decode_ssa(const std::string& encoded);

struct SsaStmt;
using SsaStmtPtr = std::shared_ptr<const SsaStmt>;

struct SsaStmt {
  enum class Kind { Assign, If, While };

  /// One merged variable of a control join.
  /// If:    v2 = phi(v0, v1) with v0 the then-final and v1 the else-final
  ///        version.
  /// While: v2 = phi(v0, v1) with v0 the loop-entry and v1 the
  ///        end-of-iteration version; v2 holds after the loop exits.
  struct Join {
    std::string base;
    int v0 = 0, v1 = 0, v2 = 0;
  };

  Kind kind;
  SsaName target;  // Assign
  ExprPtr expr;    // Assign rhs; If/While condition (over entry versions)
  std::vector<SsaStmtPtr> body, else_body;
  std::vector<Join> joins;
};

struct SsaProgram {
  std::string name;
  std::vector<std::string> params;  // each enters as version 0
  std::vector<SsaStmtPtr> body;
  ExprPtr return_expr;
};

/// Syntax-directed conversion of a validated program into static single
/// assignment form.
SsaProgram to_ssa(const ProgramAst& ast);

std::string pretty_print_ssa(const SsaProgram& ssa);

}  // namespace clpv

#endif
