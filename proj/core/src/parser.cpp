#include <cctype>
#include <map>
#include <sstream>

#include "clpv/ast.hpp"

namespace clpv {

std::string Diagnostic::to_string() const {
  const char* k = "error";
  switch (kind) {
    case Kind::Syntax: k = "syntax error"; break;
    case Kind::Name: k = "name error"; break;
    case Kind::Type: k = "type error"; break;
    case Kind::Structure: k = "structure error"; break;
  }
  std::ostringstream os;
  os << pos.line << ":" << pos.col << ": " << k << ": " << message;
  return os.str();
}

ExprPtr Expr::lit(Val v) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::IntLit;
  e->value = v;
  return e;
}
ExprPtr Expr::var(std::string name) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::Var;
  e->name = std::move(name);
  return e;
}
ExprPtr Expr::unary(UnOp op, ExprPtr inner) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::Unary;
  e->un_op = op;
  e->a = std::move(inner);
  return e;
}
ExprPtr Expr::binary(BinOp op, ExprPtr a, ExprPtr b) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::Binary;
  e->bin_op = op;
  e->a = std::move(a);
  e->b = std::move(b);
  return e;
}

namespace {

struct Token {
  enum class Kind { Ident, Int, Punct, Kw, Eof };
  Kind kind;
  std::string text;
  Val value = 0;
  SourcePos pos;
};

class Lexer {
 public:
  explicit Lexer(const std::string& src) : src_(src) { advance(); }
  const Token& peek() const { return tok_; }
  Token take() {
    Token t = tok_;
    advance();
    return t;
  }

 private:
  [[noreturn]] void err(const std::string& msg) {
    throw ParseError({Diagnostic::Kind::Syntax, {line_, col_}, msg});
  }

  void advance() {
    skip_ws();
    tok_.pos = {line_, col_};
    if (i_ >= src_.size()) {
      tok_ = {Token::Kind::Eof, "<eof>", 0, tok_.pos};
      return;
    }
    char c = src_[i_];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::string s;
      while (i_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[i_])) ||
              src_[i_] == '_')) {
        s += src_[i_];
        bump();
      }
      bool kw = s == "int" || s == "if" || s == "else" || s == "while" ||
                s == "return";
      tok_ = {kw ? Token::Kind::Kw : Token::Kind::Ident, s, 0, tok_.pos};
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::string s;
      while (i_ < src_.size() &&
             std::isdigit(static_cast<unsigned char>(src_[i_]))) {
        s += src_[i_];
        bump();
      }
      Val v;
      try {
        v = std::stoll(s);
      } catch (const std::out_of_range&) {
        err("integer literal out of range: " + s);
      }
      tok_ = {Token::Kind::Int, s, v, tok_.pos};
      return;
    }
    static const char* two[] = {"==", "!=", "<=", ">=", "&&", "||", "++", "--"};
    if (i_ + 1 < src_.size()) {
      std::string pair = src_.substr(i_, 2);
      for (const char* t : two) {
        if (pair == t) {
          bump();
          bump();
          tok_ = {Token::Kind::Punct, pair, 0, tok_.pos};
          return;
        }
      }
    }
    if (std::string("+-*/%<>=!(){},;").find(c) != std::string::npos) {
      bump();
      tok_ = {Token::Kind::Punct, std::string(1, c), 0, tok_.pos};
      return;
    }
    err(std::string("unexpected character '") + c + "'");
  }

  void skip_ws() {
    while (i_ < src_.size()) {
      char c = src_[i_];
      if (c == '/' && i_ + 1 < src_.size() && src_[i_ + 1] == '/') {
        while (i_ < src_.size() && src_[i_] != '\n') bump();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        bump();
      } else {
        break;
      }
    }
  }

  void bump() {
    if (src_[i_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++i_;
  }

  const std::string& src_;
  std::size_t i_ = 0;
  int line_ = 1;
  int col_ = 1;
  Token tok_;
};

class Parser {
 public:
  explicit Parser(const std::string& src) : lex_(src) {}

  ProgramAst parse() {
    ProgramAst ast;
    expect_kw("int");
    ast.name = expect_ident("function name");
    expect_punct("(");
    if (!at_punct(")")) {
      do {
        expect_kw("int");
        ast.params.push_back(expect_ident("parameter name"));
      } while (eat_punct(","));
    }
    expect_punct(")");
    expect_punct("{");
    scopes_.emplace_back();
    for (const std::string& p : ast.params) {
      if (!declare(p)) {
        throw ParseError({Diagnostic::Kind::Name, lex_.peek().pos,
                          "duplicate parameter '" + p + "'"});
      }
    }
    while (!at_punct("}") && !at_kw("return")) {
      ast.body.push_back(statement());
    }
    if (!at_kw("return")) {
      throw ParseError({Diagnostic::Kind::Structure, lex_.peek().pos,
                        "function body must end with a return statement"});
    }
    lex_.take();
    ast.return_expr = expression();
    require_int(ast.return_expr, "return value");
    expect_punct(";");
    expect_punct("}");
    if (lex_.peek().kind != Token::Kind::Eof) {
      throw ParseError({Diagnostic::Kind::Syntax, lex_.peek().pos,
                        "trailing input after function"});
    }
    scopes_.pop_back();
    return ast;
  }

 private:
  StmtPtr statement() {
    Token t = lex_.peek();
    auto stmt = std::make_shared<Stmt>();
    stmt->pos = t.pos;
    if (at_kw("return")) {
      throw ParseError({Diagnostic::Kind::Structure, t.pos,
                        "return is only allowed at the end of the function"});
    }
    if (at_kw("int")) {
      lex_.take();
      stmt->kind = Stmt::Kind::Decl;
      stmt->name = expect_ident("variable name");
      if (!declare(stmt->name)) {
        throw ParseError({Diagnostic::Kind::Name, t.pos,
                          "redeclaration of '" + stmt->name + "'"});
      }
      expect_punct("=");
      stmt->expr = expression();
      require_int(stmt->expr, "initializer");
      expect_punct(";");
      return stmt;
    }
    if (at_kw("if")) {
      lex_.take();
      stmt->kind = Stmt::Kind::If;
      expect_punct("(");
      stmt->expr = expression();
      require_bool(stmt->expr, "if condition");
      expect_punct(")");
      stmt->body = block();
      if (at_kw("else")) {
        lex_.take();
        stmt->else_body = block();
      }
      return stmt;
    }
    if (at_kw("while")) {
      lex_.take();
      stmt->kind = Stmt::Kind::While;
      expect_punct("(");
      stmt->expr = expression();
      require_bool(stmt->expr, "while condition");
      expect_punct(")");
      stmt->body = block();
      return stmt;
    }
    if (t.kind == Token::Kind::Ident) {
      std::string name = lex_.take().text;
      check_declared(name, t.pos);
      stmt->kind = Stmt::Kind::Assign;
      stmt->name = name;
      if (eat_punct("++") || at_punct("--")) {
        bool inc = lex_.peek().text != "--";
        if (!inc) lex_.take();
        // v++ / v-- desugar to v = v +/- 1
        stmt->expr = Expr::binary(inc ? BinOp::Add : BinOp::Sub,
                                  Expr::var(name), Expr::lit(1));
        type_of(stmt->expr);
        expect_punct(";");
        return stmt;
      }
      expect_punct("=");
      stmt->expr = expression();
      require_int(stmt->expr, "assigned value");
      expect_punct(";");
      return stmt;
    }
    throw ParseError({Diagnostic::Kind::Syntax, t.pos,
                      "expected a statement, got '" + t.text + "'"});
  }

  std::vector<StmtPtr> block() {
    expect_punct("{");
    scopes_.emplace_back();
    std::vector<StmtPtr> stmts;
    while (!at_punct("}")) stmts.push_back(statement());
    expect_punct("}");
    scopes_.pop_back();
    return stmts;
  }

  // expression := or_expr
  ExprPtr expression() { return or_expr(); }

  ExprPtr or_expr() {
    ExprPtr e = and_expr();
    while (at_punct("||")) {
      SourcePos p = lex_.take().pos;
      e = typed(Expr::binary(BinOp::Or, e, and_expr()), p);
    }
    return e;
  }
  ExprPtr and_expr() {
    ExprPtr e = cmp_expr();
    while (at_punct("&&")) {
      SourcePos p = lex_.take().pos;
      e = typed(Expr::binary(BinOp::And, e, cmp_expr()), p);
    }
    return e;
  }
  ExprPtr cmp_expr() {
    ExprPtr e = add_expr();
    static const std::map<std::string, BinOp> ops = {
        {"==", BinOp::Eq}, {"!=", BinOp::Ne}, {"<", BinOp::Lt},
        {"<=", BinOp::Le}, {">", BinOp::Gt},  {">=", BinOp::Ge}};
    if (lex_.peek().kind == Token::Kind::Punct &&
        ops.count(lex_.peek().text)) {
      Token t = lex_.take();
      e = typed(Expr::binary(ops.at(t.text), e, add_expr()), t.pos);
    }
    return e;
  }
  ExprPtr add_expr() {
    ExprPtr e = mul_expr();
    while (at_punct("+") || at_punct("-")) {
      Token t = lex_.take();
      e = typed(
          Expr::binary(t.text == "+" ? BinOp::Add : BinOp::Sub, e, mul_expr()),
          t.pos);
    }
    return e;
  }
  ExprPtr mul_expr() {
    ExprPtr e = unary_expr();
    while (at_punct("*") || at_punct("/") || at_punct("%")) {
      Token t = lex_.take();
      BinOp op = t.text == "*"   ? BinOp::Mul
                 : t.text == "/" ? BinOp::Div
                                 : BinOp::Mod;
      e = typed(Expr::binary(op, e, unary_expr()), t.pos);
    }
    return e;
  }
  ExprPtr unary_expr() {
    if (at_punct("-")) {
      SourcePos p = lex_.take().pos;
      return typed(Expr::unary(UnOp::Neg, unary_expr()), p);
    }
    if (at_punct("!")) {
      SourcePos p = lex_.take().pos;
      return typed(Expr::unary(UnOp::Not, unary_expr()), p);
    }
    return primary();
  }
  ExprPtr primary() {
    Token t = lex_.peek();
    if (t.kind == Token::Kind::Int) {
      lex_.take();
      return typed(Expr::lit(t.value), t.pos);
    }
    if (t.kind == Token::Kind::Ident) {
      lex_.take();
      check_declared(t.text, t.pos);
      return typed(Expr::var(t.text), t.pos);
    }
    if (eat_punct("(")) {
      ExprPtr e = expression();
      expect_punct(")");
      return e;
    }
    throw ParseError({Diagnostic::Kind::Syntax, t.pos,
                      "expected an expression, got '" + t.text + "'"});
  }

  ExprPtr typed(ExprPtr e, SourcePos p) {
    auto m = std::const_pointer_cast<Expr>(e);
    m->pos = p;
    m->is_bool = type_of(e);
    return e;
  }

  // Returns true for boolean-typed expressions, false for integers.
  bool type_of(const ExprPtr& e) {
    switch (e->kind) {
      case Expr::Kind::IntLit:
      case Expr::Kind::Var:
        return false;
      case Expr::Kind::Unary:
        if (e->un_op == UnOp::Neg) {
          require_int(e->a, "operand of unary -");
          return false;
        }
        require_bool(e->a, "operand of !");
        return true;
      case Expr::Kind::Binary:
        switch (e->bin_op) {
          case BinOp::Add:
          case BinOp::Sub:
          case BinOp::Mul:
          case BinOp::Div:
          case BinOp::Mod:
            require_int(e->a, "arithmetic operand");
            require_int(e->b, "arithmetic operand");
            return false;
          case BinOp::And:
          case BinOp::Or:
            require_bool(e->a, "logical operand");
            require_bool(e->b, "logical operand");
            return true;
          default:
            require_int(e->a, "comparison operand");
            require_int(e->b, "comparison operand");
            return true;
        }
    }
    return false;
  }

  void require_int(const ExprPtr& e, const std::string& what) {
    if (e->is_bool) {
      throw ParseError({Diagnostic::Kind::Type, e->pos,
                        what + " must be an integer expression"});
    }
  }
  void require_bool(const ExprPtr& e, const std::string& what) {
    if (!e->is_bool) {
      throw ParseError(
          {Diagnostic::Kind::Type, e->pos, what + " must be boolean"});
    }
  }

  bool declare(const std::string& name) {
    if (visible(name)) return false;
    scopes_.back().push_back(name);
    return true;
  }
  bool visible(const std::string& name) const {
    for (const auto& scope : scopes_) {
      for (const auto& n : scope) {
        if (n == name) return true;
      }
    }
    return false;
  }
  void check_declared(const std::string& name, SourcePos pos) const {
    if (!visible(name)) {
      throw ParseError(
          {Diagnostic::Kind::Name, pos, "undeclared variable '" + name + "'"});
    }
  }

  bool at_punct(const std::string& p) const {
    return lex_.peek().kind == Token::Kind::Punct && lex_.peek().text == p;
  }
  bool at_kw(const std::string& k) const {
    return lex_.peek().kind == Token::Kind::Kw && lex_.peek().text == k;
  }
  bool eat_punct(const std::string& p) {
    if (!at_punct(p)) return false;
    lex_.take();
    return true;
  }
  void expect_punct(const std::string& p) {
    if (!at_punct(p)) {
      throw ParseError({Diagnostic::Kind::Syntax, lex_.peek().pos,
                        "expected '" + p + "', got '" + lex_.peek().text +
                            "'"});
    }
    lex_.take();
  }
  void expect_kw(const std::string& k) {
    if (!at_kw(k)) {
      throw ParseError({Diagnostic::Kind::Syntax, lex_.peek().pos,
                        "expected '" + k + "', got '" + lex_.peek().text +
                            "'"});
    }
    lex_.take();
  }
  std::string expect_ident(const std::string& what) {
    if (lex_.peek().kind != Token::Kind::Ident) {
      throw ParseError({Diagnostic::Kind::Syntax, lex_.peek().pos,
                        "expected " + what + ", got '" + lex_.peek().text +
                            "'"});
    }
    return lex_.take().text;
  }

  Lexer lex_;
  std::vector<std::vector<std::string>> scopes_;
};

// ---------------------------------------------------------------------------
// Pretty printing
// ---------------------------------------------------------------------------

int precedence(BinOp op) {
  switch (op) {
    case BinOp::Or: return 1;
    case BinOp::And: return 2;
    case BinOp::Eq:
    case BinOp::Ne:
    case BinOp::Lt:
    case BinOp::Le:
    case BinOp::Gt:
    case BinOp::Ge: return 3;
    case BinOp::Add:
    case BinOp::Sub: return 4;
    default: return 5;
  }
}

const char* op_text(BinOp op) {
  switch (op) {
    case BinOp::Add: return "+";
    case BinOp::Sub: return "-";
    case BinOp::Mul: return "*";
    case BinOp::Div: return "/";
    case BinOp::Mod: return "%";
    case BinOp::Eq: return "==";
    case BinOp::Ne: return "!=";
    case BinOp::Lt: return "<";
    case BinOp::Le: return "<=";
    case BinOp::Gt: return ">";
    case BinOp::Ge: return ">=";
    case BinOp::And: return "&&";
    case BinOp::Or: return "||";
  }
  return "?";
}

void print_expr(std::ostream& os, const ExprPtr& e, int parent_prec) {
  switch (e->kind) {
    case Expr::Kind::IntLit: os << e->value; break;
    case Expr::Kind::Var: os << e->name; break;
    case Expr::Kind::Unary:
      os << (e->un_op == UnOp::Neg ? "-" : "!");
      os << "(";
      print_expr(os, e->a, 0);
      os << ")";
      break;
    case Expr::Kind::Binary: {
      int prec = precedence(e->bin_op);
      bool paren = prec < parent_prec;
      if (paren) os << "(";
      print_expr(os, e->a, prec);
      os << " " << op_text(e->bin_op) << " ";
      print_expr(os, e->b, prec + 1);
      if (paren) os << ")";
      break;
    }
  }
}

void print_stmts(std::ostream& os, const std::vector<StmtPtr>& stmts,
                 int indent) {
  std::string pad(indent * 2, ' ');
  for (const StmtPtr& s : stmts) {
    os << pad;
    switch (s->kind) {
      case Stmt::Kind::Decl:
        os << "int " << s->name << " = ";
        print_expr(os, s->expr, 0);
        os << ";\n";
        break;
      case Stmt::Kind::Assign:
        os << s->name << " = ";
        print_expr(os, s->expr, 0);
        os << ";\n";
        break;
      case Stmt::Kind::If:
        os << "if (";
        print_expr(os, s->expr, 0);
        os << ") {\n";
        print_stmts(os, s->body, indent + 1);
        os << pad << "}";
        if (!s->else_body.empty()) {
          os << " else {\n";
          print_stmts(os, s->else_body, indent + 1);
          os << pad << "}";
        }
        os << "\n";
        break;
      case Stmt::Kind::While:
        os << "while (";
        print_expr(os, s->expr, 0);
        os << ") {\n";
        print_stmts(os, s->body, indent + 1);
        os << pad << "}\n";
        break;
    }
  }
}

}  // namespace

ProgramAst parse_program(const std::string& source) {
  return Parser(source).parse();
}

std::string pretty_print_expr(const ExprPtr& e) {
  std::ostringstream os;
  print_expr(os, e, 0);
  return os.str();
}

std::string pretty_print(const ProgramAst& ast) {
  std::ostringstream os;
  os << "int " << ast.name << "(";
  for (std::size_t i = 0; i < ast.params.size(); ++i) {
    if (i) os << ", ";
    os << "int " << ast.params[i];
  }
  os << ") {\n";
  print_stmts(os, ast.body, 1);
  os << "  return ";
  print_expr(os, ast.return_expr, 0);
  os << ";\n}\n";
  return os.str();
}

bool expr_equal(const ExprPtr& a, const ExprPtr& b) {
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case Expr::Kind::IntLit: return a->value == b->value;
    case Expr::Kind::Var: return a->name == b->name;
    case Expr::Kind::Unary:
      return a->un_op == b->un_op && expr_equal(a->a, b->a);
    case Expr::Kind::Binary:
      return a->bin_op == b->bin_op && expr_equal(a->a, b->a) &&
             expr_equal(a->b, b->b);
  }
  return false;
}

static bool stmts_equal(const std::vector<StmtPtr>& a,
                        const std::vector<StmtPtr>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const Stmt& x = *a[i];
    const Stmt& y = *b[i];
    if (x.kind != y.kind || x.name != y.name) return false;
    if ((x.expr == nullptr) != (y.expr == nullptr)) return false;
    if (x.expr && !expr_equal(x.expr, y.expr)) return false;
    if (!stmts_equal(x.body, y.body) || !stmts_equal(x.else_body, y.else_body))
      return false;
  }
  return true;
}

bool ast_equal(const ProgramAst& a, const ProgramAst& b) {
  return a.name == b.name && a.params == b.params &&
         stmts_equal(a.body, b.body) &&
         expr_equal(a.return_expr, b.return_expr);
}

}  // namespace clpv
