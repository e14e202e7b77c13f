#pragma once

#include "fldx/numeric/interval.hpp"

#include <map>
#include <string>
#include <vector>

namespace fldx {

enum class SymbolOrigin { Input, Rounding, Nonlinear, Constraint, Merge, Condense };

std::string to_string(SymbolOrigin o);

/// Record of a constraint-derived symbol: `replaced = mid + rad * self`.
struct Substitution {
  int replaced = -1;
  Rational mid;
  Rational rad;
};

/// Static information about a noise symbol. Ranges are path-scoped and live in
/// SymbolRanges.
struct NoiseSymbol {
  int id = -1;
  SymbolOrigin origin = SymbolOrigin::Input;
  std::optional<Substitution> substitution;
};

/// Allocates noise symbols for one analysis. Ids are never reused, so every
/// symbol created on any path is distinct.
class SymbolTable {
public:
  int fresh(SymbolOrigin origin);
  int fresh_substitute(int replaced, const Rational &mid, const Rational &rad);
  const NoiseSymbol &info(int id) const { return symbols_.at(static_cast<std::size_t>(id)); }
  std::size_t size() const { return symbols_.size(); }

private:
  std::vector<NoiseSymbol> symbols_;
};

/// Current range of every noise symbol on one execution path. Symbols without
/// an entry range over [-1, 1].
class SymbolRanges {
public:
  static const RInterval &unit();
  const RInterval &range(int id) const;
  void set(int id, const RInterval &r);
  bool is_default(int id) const { return ranges_.find(id) == ranges_.end(); }
  const std::map<int, RInterval> &narrowed() const { return ranges_; }

  /// Pointwise hull; a symbol narrowed in only one operand goes back to its
  /// default range.
  SymbolRanges join(const SymbolRanges &o) const;
  /// Pointwise meet, or nullopt if some symbol has no common value.
  std::optional<SymbolRanges> meet(const SymbolRanges &o) const;

  friend bool operator==(const SymbolRanges &, const SymbolRanges &) = default;

private:
  std::map<int, RInterval> ranges_;
};

/// center + sum_i coeff_i * eps_i. Zero coefficients are never stored.
class AffineForm {
public:
  AffineForm() = default;
  AffineForm(const Rational &c) : center_(c) {}
  /// coeff * eps_sym
  static AffineForm symbol(int sym, const Rational &coeff, const Rational &center = Rational(0));
  /// mid(iv) + rad(iv) * eps_sym for a fresh symbol when iv is not a point.
  static AffineForm from_interval(const RInterval &iv, SymbolTable &table, SymbolOrigin origin);

  const Rational &center() const { return center_; }
  const std::map<int, Rational> &terms() const { return terms_; }
  Rational coeff(int sym) const;
  bool is_constant() const { return terms_.empty(); }
  bool has(int sym) const { return terms_.count(sym) != 0; }

  RInterval concretize(const SymbolRanges &ranges) const;
  /// Concretization of the non-constant part.
  RInterval deviation(const SymbolRanges &ranges) const;

  AffineForm operator-() const;
  friend AffineForm operator+(const AffineForm &a, const AffineForm &b);
  friend AffineForm operator-(const AffineForm &a, const AffineForm &b);
  friend AffineForm operator*(const Rational &k, const AffineForm &a);
  AffineForm &operator+=(const AffineForm &b);

  /// Replaces eps_sym by mid + rad * eps_new.
  AffineForm substitute(int sym, const Rational &mid, const Rational &rad, int new_sym) const;

  friend bool operator==(const AffineForm &, const AffineForm &) = default;

  std::string str() const;

private:
  void add_term(int sym, const Rational &c);
  Rational center_;
  std::map<int, Rational> terms_;
};

enum class LinearOp { Add, Sub };

AffineForm af_linear(LinearOp op, const AffineForm &a, const AffineForm &b);
AffineForm af_scale(const Rational &k, const AffineForm &a);

/// Product of two forms. The linear part is exact; the quadratic part is
/// bounded over the current symbol ranges (a squared symbol contributes a
/// nonnegative interval) and re-centered on one fresh Nonlinear symbol.
AffineForm af_mul(const AffineForm &a, const AffineForm &b, SymbolTable &table, const SymbolRanges &ranges);

/// Min-range linear approximation of 1/t over `hint`, which must not contain
/// zero and must enclose every value of `a`. Throws NumericError otherwise.
AffineForm af_inverse(const AffineForm &a, const RInterval &hint, SymbolTable &table);

/// Folds the smallest terms into a single fresh symbol so that at most
/// max_syms terms remain. Never narrows the concretization.
AffineForm condense(const AffineForm &a, std::size_t max_syms, SymbolTable &table, const SymbolRanges &ranges);

} // namespace fldx
