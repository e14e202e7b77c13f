#pragma once

#include "fldx/numeric/rational.hpp"

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace fldx {

struct Loc {
  int line = 0;
  int col = 0;
  std::string str() const { return std::to_string(line) + ":" + std::to_string(col); }
};

/// Syntax or static-semantics error in a source program.
class FrontendError : public std::runtime_error {
public:
  FrontendError(Loc loc, const std::string &msg) : std::runtime_error(loc.str() + ": " + msg), loc_(loc) {}
  Loc loc() const { return loc_; }

private:
  Loc loc_;
};

enum class Scalar { Void, Char, UChar, Short, UShort, Int, UInt, Long, ULong, Float, Double };

std::string to_string(Scalar s);
bool is_float(Scalar s);
bool is_integral(Scalar s);
bool is_unsigned(Scalar s);
/// Bit width of an integral scalar.
int int_bits(Scalar s);
/// Range of values of an integral scalar.
Rational int_min(Scalar s);
Rational int_max(Scalar s);

struct Type {
  Scalar scalar = Scalar::Int;
  /// -1 for a scalar, 0 for an unsized array parameter, else the array length.
  long array = -1;

  bool is_array() const { return array >= 0; }
  bool is_float() const { return !is_array() && fldx::is_float(scalar); }
  bool is_integral() const { return !is_array() && fldx::is_integral(scalar); }
  std::string str() const;
  friend bool operator==(const Type &, const Type &) = default;
};

enum class UnOp { Neg, Plus, Not };
enum class BinOp { Add, Sub, Mul, Div, Mod, Lt, Le, Gt, Ge, Eq, Ne, And, Or };

std::string to_string(UnOp op);
std::string to_string(BinOp op);
bool is_comparison(BinOp op);
bool is_arithmetic(BinOp op);

enum class ExprKind { IntLit, FloatLit, Var, Index, Unary, Binary, Cond, Cast, Call };

struct Expr;
using ExprPtr = std::shared_ptr<Expr>;

struct Expr {
  ExprKind kind = ExprKind::IntLit;
  Loc loc;
  int id = -1;
  /// Variable, array or callee name.
  std::string name;
  /// Literal spelling as written.
  std::string text;
  /// Exact literal value.
  Rational value;
  UnOp unop = UnOp::Neg;
  BinOp binop = BinOp::Add;
  /// Static type, filled by check_program(); the target type for casts.
  Type type;
  std::vector<ExprPtr> args;
};

// Annotation language.

enum class TermKind { Int, Rat, LVal, Binder, Neg, Binary, Builtin, MinMax };

struct Term;
using TermPtr = std::shared_ptr<Term>;

struct Term {
  TermKind kind = TermKind::Int;
  Loc loc;
  int id = -1;
  /// Variable, binder, builtin or min/max name.
  std::string name;
  std::string text;
  Rational value;
  BinOp op = BinOp::Add;
  /// Operands; for LVal an optional index term.
  std::vector<TermPtr> args;
};

enum class PredKind { True, False, Rel, And, Or, Implies, Not, Let, Builtin };

struct Pred;
using PredPtr = std::shared_ptr<Pred>;

struct Pred {
  PredKind kind = PredKind::True;
  Loc loc;
  BinOp op = BinOp::Eq;
  std::vector<TermPtr> terms;
  std::vector<PredPtr> preds;
  /// Let binders (one, or two for a tuple), or the builtin name.
  std::vector<std::string> names;
  std::string name;
};

enum class StmtKind { Block, Decl, Assign, Call, If, While, DoWhile, Return, Assert, Section };

struct Stmt;
using StmtPtr = std::shared_ptr<Stmt>;

struct SectionInfo {
  int id = -1;
  std::vector<std::string> save_list;
  std::vector<std::string> merge_list;
};

struct Stmt {
  StmtKind kind = StmtKind::Block;
  Loc loc;
  int id = -1;
  /// Children of blocks and sections.
  std::vector<StmtPtr> body;
  /// Condition, right-hand side, initializer, call or returned value.
  ExprPtr expr;
  /// Assignment target (Var or Index).
  ExprPtr target;
  /// Operator of a compound assignment.
  std::optional<BinOp> compound;
  StmtPtr then_s;
  StmtPtr else_s;
  /// Declared name and type.
  std::string name;
  Type type;
  std::vector<ExprPtr> init_list;
  PredPtr pred;
  SectionInfo section;
};

struct Param {
  std::string name;
  Type type;
  Loc loc;
};

struct Function {
  std::string name;
  Type ret;
  std::vector<Param> params;
  StmtPtr body;
  Loc loc;
};

struct Program {
  std::vector<StmtPtr> globals;
  std::vector<Function> functions;
  /// Next unused node id; ids are unique across statements, expressions and
  /// terms of one program.
  int next_id = 0;

  const Function *find(const std::string &name) const;
};

/// Calls visit(stmt) on every statement in pre-order.
template <class F> void walk_stmts(const StmtPtr &s, F &&visit) {
  if (!s)
    return;
  visit(s);
  for (const auto &c : s->body)
    walk_stmts(c, visit);
  walk_stmts(s->then_s, visit);
  walk_stmts(s->else_s, visit);
}

template <class F> void walk_exprs(const ExprPtr &e, F &&visit) {
  if (!e)
    return;
  visit(e);
  for (const auto &a : e->args)
    walk_exprs(a, visit);
}

/// Expressions directly owned by a statement (not by its children).
std::vector<ExprPtr> own_exprs(const Stmt &s);

} // namespace fldx
