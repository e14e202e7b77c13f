#pragma once

#include "fldx/domain/abstract_float.hpp"
#include "fldx/spec/typing.hpp"

#include <functional>

namespace fldx {

/// Three-valued outcome of an annotation: it holds on every execution
/// represented by the abstract state, fails on all of them, or cannot be
/// decided from the abstraction.
enum class Verdict { Valid, Invalid, Unknown };

std::string to_string(Verdict v);

struct SpecAlarm {
  AlarmKind kind;
  Loc loc;
  std::string message;
};

/// Snapshot written by fprint/dprint.
struct PrintRecord {
  Loc loc;
  std::string variable;
  RInterval float_iv;
  RInterval real_iv;
  RInterval err_iv;
  std::optional<RInterval> rel;
  std::string real_form;
  std::string err_form;
};

struct EvalOutcome {
  Verdict verdict = Verdict::Valid;
  std::vector<SpecAlarm> alarms;
  std::vector<PrintRecord> prints;
};

/// What the evaluator needs from the abstract memory of one path.
class SpecMemory {
public:
  virtual ~SpecMemory() = default;
  /// Values of an integer variable or array element. Throws DomainAlarm for
  /// an out-of-bounds index.
  virtual RInterval int_value(const std::string &name, std::optional<long> index) = 0;
  /// Storage of a float variable or array element.
  virtual AbstractFloat &float_cell(const std::string &name, std::optional<long> index) = 0;
  virtual DomainContext &context() = 0;
};

/// Machine integer arithmetic in `type` with two's-complement wrap-around.
/// Division and modulo truncate toward zero; b must be nonzero for them.
Rational machine_int_op(BinOp op, const Rational &a, const Rational &b, Scalar type);

/// Evaluates annotations against a memory. Integer operations typed at a
/// machine type run in machine arithmetic; the rest run exactly.
class SpecEvaluator {
public:
  SpecEvaluator(const TypedPred &typing, SpecMemory &mem) : typing_(typing), mem_(mem) {}

  EvalOutcome eval(const Pred &p);
  /// Value set of a term. Pair-valued built-ins are not terms on their own.
  RInterval term(const Term &t);

  /// Number of operations executed in machine and exact arithmetic.
  int machine_ops = 0;
  int exact_ops = 0;

private:
  Verdict pred(const Pred &p);
  Verdict builtin(const Pred &p);
  std::pair<RInterval, RInterval> pair_term(const Term &t);
  std::optional<long> index_of(const Term &lval);
  AbstractFloat &cell(const Term &lval);

  const TypedPred &typing_;
  SpecMemory &mem_;
  std::map<std::string, RInterval> binders_;
  EvalOutcome out_;
};

/// Types and evaluates in one step.
EvalOutcome eval_pred(const Pred &p, const FunctionScope &scope, SpecMemory &mem);

} // namespace fldx
