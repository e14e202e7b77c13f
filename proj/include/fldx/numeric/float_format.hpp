#pragma once

#include "fldx/numeric/interval.hpp"

#include <string>

namespace fldx {

/// Raised when a value exceeds the largest finite number of a format.
class OverflowError : public NumericError {
public:
  using NumericError::NumericError;
};

/// A floating-point type parameterized by radix, precision and exponent
/// range. Finite values are (-1)^s * m * beta^(e-p+1) with an integral
/// significand 0 <= m < beta^p and e_min <= e <= e_max; m < beta^(p-1) is
/// only allowed at e_min (gradual underflow).
struct FloatFormat {
  long beta = 2;
  long p = 53;
  long e_min = -1022;
  long e_max = 1023;

  static FloatFormat binary32() { return {2, 24, -126, 127}; }
  static FloatFormat binary64() { return {2, 53, -1022, 1023}; }
  /// The decimal two-digit format used in textbook illustrations.
  static FloatFormat toy() { return {10, 2, 0, 2}; }
  /// Throws NumericError if the parameters are inconsistent.
  static FloatFormat custom(long beta, long p, long e_min, long e_max);

  /// Largest finite value.
  Rational max_finite() const;
  /// Distance between consecutive subnormals, beta^(e_min-p+1).
  Rational subnormal_step() const;
  /// Smallest positive normal number, beta^e_min.
  Rational min_normal() const;

  /// True when every value of `other` is exactly representable here.
  bool contains(const FloatFormat &other) const;

  std::string name() const;

  friend bool operator==(const FloatFormat &, const FloatFormat &) = default;
};

/// A rational known to be representable in a given format.
class FloatValue {
public:
  const Rational &value() const { return value_; }
  const FloatFormat &format() const { return fmt_; }
  int sign_bit() const { return value_.sign() < 0 ? 1 : 0; }
  /// Integral significand m with value = (-1)^s * m * beta^(exponent-p+1).
  BigInt significand() const;
  long exponent() const;

  /// Throws NumericError if x is not representable in fmt.
  static FloatValue checked(const Rational &x, const FloatFormat &fmt);

  friend bool operator==(const FloatValue &a, const FloatValue &b) { return a.value_ == b.value_; }

private:
  FloatValue(Rational v, FloatFormat fmt) : value_(std::move(v)), fmt_(fmt) {}
  friend FloatValue round_nearest(const Rational &, const FloatFormat &);
  Rational value_;
  FloatFormat fmt_;
};

enum class RoundingMode { NearestEven, Up, Down };

/// Round-to-nearest, ties to an even last digit. Throws OverflowError if the
/// rounded magnitude exceeds max_finite().
FloatValue round_nearest(const Rational &x, const FloatFormat &fmt);

/// Directed or nearest rounding, returning the plain rational. Directed modes
/// are used to keep interval endpoints representable.
Rational round_to(const Rational &x, const FloatFormat &fmt, RoundingMode mode);

bool is_representable(const Rational &x, const FloatFormat &fmt);

/// Exponent e of x in fmt: beta^e <= |x| < beta^(e+1), clamped below to
/// e_min. x must be nonzero.
long exponent_of(const Rational &x, const FloatFormat &fmt);

/// beta^(1-p)/2.
Rational unit_roundoff(const FloatFormat &fmt);

/// Half the spacing of representable numbers at magnitude m, i.e. the
/// largest rounding error round_nearest can commit on any |x| <= m.
Rational half_ulp_bound(const Rational &magnitude, const FloatFormat &fmt);

/// Smallest representable value strictly greater than x (x representable).
Rational next_up(const Rational &x, const FloatFormat &fmt);
/// Largest representable value strictly smaller than x (x representable).
Rational next_down(const Rational &x, const FloatFormat &fmt);

/// Smallest interval with representable endpoints containing iv.
RInterval round_outward(const RInterval &iv, const FloatFormat &fmt);
/// Largest interval with representable endpoints contained in iv, or nullopt
/// when iv holds no representable value.
std::optional<RInterval> round_inward(const RInterval &iv, const FloatFormat &fmt);

} // namespace fldx
