#pragma once

#include "fldx/numeric/rational.hpp"

#include <optional>
#include <string>

namespace fldx {

/// Closed interval with exact rational endpoints. Never empty; operations
/// that can produce an empty set return std::optional.
class RInterval {
public:
  RInterval() = default;
  RInterval(const Rational &point) : lo_(point), hi_(point) {}
  /// Throws NumericError if lo > hi.
  RInterval(const Rational &lo, const Rational &hi);

  const Rational &lo() const { return lo_; }
  const Rational &hi() const { return hi_; }

  bool is_point() const { return lo_ == hi_; }
  bool contains(const Rational &x) const { return lo_ <= x && x <= hi_; }
  bool contains(const RInterval &o) const { return lo_ <= o.lo_ && o.hi_ <= hi_; }
  bool contains_zero() const { return lo_.sign() <= 0 && hi_.sign() >= 0; }
  Rational width() const { return hi_ - lo_; }
  Rational mid() const { return (lo_ + hi_) * Rational(BigInt(1), BigInt(2)); }
  Rational rad() const { return (hi_ - lo_) * Rational(BigInt(1), BigInt(2)); }
  /// max(|lo|, |hi|)
  Rational mag() const { return max(lo_.abs(), hi_.abs()); }

  RInterval operator-() const { return RInterval(-hi_, -lo_); }
  friend RInterval operator+(const RInterval &a, const RInterval &b) { return {a.lo_ + b.lo_, a.hi_ + b.hi_}; }
  friend RInterval operator-(const RInterval &a, const RInterval &b) { return {a.lo_ - b.hi_, a.hi_ - b.lo_}; }
  friend RInterval operator*(const RInterval &a, const RInterval &b);
  friend RInterval operator*(const Rational &k, const RInterval &a);
  /// Throws NumericError if b contains zero.
  friend RInterval operator/(const RInterval &a, const RInterval &b);

  RInterval join(const RInterval &o) const { return {min(lo_, o.lo_), max(hi_, o.hi_)}; }
  std::optional<RInterval> meet(const RInterval &o) const;

  friend bool operator==(const RInterval &a, const RInterval &b) { return a.lo_ == b.lo_ && a.hi_ == b.hi_; }

  std::string str() const { return "[" + lo_.str() + ", " + hi_.str() + "]"; }

private:
  Rational lo_;
  Rational hi_;
};

enum class IntervalOp { Add, Sub, Mul, Div, Join, Meet };

/// Interval arithmetic. Returns nullopt only for the meet of disjoint
/// intervals; division by an interval containing zero throws NumericError.
std::optional<RInterval> interval_arith(IntervalOp op, const RInterval &a, const RInterval &b);

} // namespace fldx
