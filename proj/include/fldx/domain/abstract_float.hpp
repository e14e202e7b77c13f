#pragma once

#include "fldx/domain/affine_form.hpp"
#include "fldx/domain/errors.hpp"
#include "fldx/numeric/float_format.hpp"

#include <optional>
#include <vector>

namespace fldx {

/// Shared state for the abstract arithmetic of one execution path.
struct DomainContext {
  SymbolTable &table;
  SymbolRanges &ranges;
  std::size_t max_syms = 64;
  /// Minimal relative width gain for a constraint substitution to apply.
  Rational threshold = Rational(BigInt(1), BigInt(20));
};

/// Shadow value replacing a floating-point number: the set of machine values,
/// the ideal real value, the absolute error machine - real, and the relative
/// error. The true (real, error) pair lies in the meet of each affine form's
/// concretization and its interval refinement.
struct AbstractFloat {
  FloatFormat format = FloatFormat::binary64();
  RInterval float_iv;
  AffineForm real;
  RInterval real_iv;
  AffineForm err;
  RInterval err_iv;
  /// Relative error err/real; nullopt when the real part can be zero.
  std::optional<RInterval> rel;

  /// Exact machine value `value` (must be representable) with zero error.
  static AbstractFloat exact(const Rational &value, const FloatFormat &fmt);
  /// A source constant: real part `value`, machine part its rounding.
  static AbstractFloat constant(const Rational &value, const FloatFormat &fmt);
  /// An input whose machine value lies in `value` (rounded outward) and whose
  /// error lies in `error`; the real part is value - error.
  static AbstractFloat with_error(const RInterval &value, const RInterval &error, const FloatFormat &fmt,
                                  SymbolTable &table);
  /// An input whose real value lies in `real`; the machine value is its
  /// rounding, so the error is the representation error.
  static AbstractFloat from_real(const RInterval &real, const FloatFormat &fmt, SymbolTable &table);

  RInterval real_range(const SymbolRanges &ranges) const;
  RInterval err_range(const SymbolRanges &ranges) const;

  /// Tightens the interval fields against the affine forms and the identity
  /// machine = real + err, and recomputes rel. Throws InfeasiblePath if the
  /// fields become inconsistent.
  void refine(const SymbolRanges &ranges);

  /// True when both forms and all intervals coincide.
  bool same_as(const AbstractFloat &o) const;
};

enum class AbsOp { Add, Sub, Mul, Div };

/// Abstract counterpart of a correctly rounded operation in `fmt`.
/// Throws DomainAlarm on division by zero or overflow.
AbstractFloat abs_op(AbsOp op, const AbstractFloat &a, const AbstractFloat &b, const FloatFormat &fmt,
                     DomainContext &ctx);

AbstractFloat abs_neg(const AbstractFloat &a);

/// Conversion to another format, rounding when `to` does not contain the
/// source format.
AbstractFloat abs_convert(const AbstractFloat &a, const FloatFormat &to, DomainContext &ctx);

/// `form >= 0` when nonneg, else `form <= 0`.
struct LinearConstraint {
  AffineForm form;
  bool nonneg = true;
};

/// Interval propagation of linear constraints onto symbol ranges. Returns the
/// narrowed ranges, or nullopt if the constraints have no solution.
std::optional<SymbolRanges> propagate(const std::vector<LinearConstraint> &constraints, const SymbolRanges &ranges,
                                      int rounds = 8);

/// Narrows `sym` to `new_range`: creates eps_d with sym = mid + rad * eps_d and
/// rewrites every form of `env` whose width shrinks by at least the context
/// threshold. The symbol's recorded range is updated regardless. Returns the
/// new symbol id, or -1 if the range did not change. Throws InfeasiblePath if
/// new_range is not within the current range.
int constrain(const std::vector<AffineForm *> &env, int sym, const RInterval &new_range, DomainContext &ctx);

/// Applies every range narrowed from ctx.ranges to `target` (in increasing
/// symbol order) through constrain(), then refines the values in env that
/// mention a changed symbol.
void commit_ranges(const std::vector<AbstractFloat *> &env, const SymbolRanges &target, DomainContext &ctx);

/// Join. Interval fields are hulled; the forms are kept when identical and
/// otherwise collapsed onto fresh Merge symbols. Each operand is read with
/// its own path ranges.
AbstractFloat union_of(const AbstractFloat &a, const SymbolRanges &ra, const AbstractFloat &b,
                       const SymbolRanges &rb, SymbolTable &table);

/// Re-expresses `v` over collapsed symbols: every form becomes center + radius
/// on a fresh Merge symbol.
AbstractFloat collapse(const AbstractFloat &v, const SymbolRanges &ranges, SymbolTable &table);

} // namespace fldx
