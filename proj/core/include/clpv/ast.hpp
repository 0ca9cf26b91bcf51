#ifndef CLPV_AST_HPP
#define CLPV_AST_HPP

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "clpv/domain.hpp"

namespace clpv {

struct SourcePos {
  int line = 0;
  int col = 0;
};

struct Diagnostic {
  enum class Kind { Syntax, Name, Type, Structure };
  Kind kind;
  SourcePos pos;
  std::string message;

  std::string to_string() const;
};

/// Raised by parse_program on any malformed input; carries the diagnostic.
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(Diagnostic d)
      : std::runtime_error(d.to_string()), diag(std::move(d)) {}
  Diagnostic diag;
};

enum class UnOp { Neg, Not };
enum class BinOp { Add, Sub, Mul, Div, Mod, Eq, Ne, Lt, Le, Gt, Ge, And, Or };

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  enum class Kind { IntLit, Var, Unary, Binary };
  Kind kind;
  Val value = 0;        // IntLit
  std::string name;     // Var
  UnOp un_op{};         // Unary
  BinOp bin_op{};       // Binary
  ExprPtr a, b;
  bool is_bool = false;  // set during type checking
  SourcePos pos;

  static ExprPtr lit(Val v);
  static ExprPtr var(std::string name);
  static ExprPtr unary(UnOp op, ExprPtr e);
  static ExprPtr binary(BinOp op, ExprPtr a, ExprPtr b);
};

struct Stmt;
using StmtPtr = std::shared_ptr<const Stmt>;

struct Stmt {
  enum class Kind { Decl, Assign, If, While };
  Kind kind;
  std::string name;  // Decl/Assign target
  ExprPtr expr;      // Decl/Assign rhs, If/While condition
  std::vector<StmtPtr> body;       // If: then, While: body
  std::vector<StmtPtr> else_body;  // If only
  SourcePos pos;
};

/// A validated mini-language function: int-typed parameters, a statement
/// body, and the single trailing return expression.
struct ProgramAst {
  std::string name;
  std::vector<std::string> params;
  std::vector<StmtPtr> body;
  ExprPtr return_expr;
};

/// Parses and validates a `.mc` source text. Throws ParseError with a
/// position and category on any malformed input; never returns a partial
/// program.
ProgramAst parse_program(const std::string& source);

std::string pretty_print(const ProgramAst& ast);
std::string pretty_print_expr(const ExprPtr& e);

bool expr_equal(const ExprPtr& a, const ExprPtr& b);
bool ast_equal(const ProgramAst& a, const ProgramAst& b);

}  // namespace clpv

#endif
