#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace fldx {

/// Raised when an exact operation has no defined result (division by zero,
/// malformed literal).
class NumericError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Arbitrary-precision integer.
class BigInt {
public:
  BigInt() = default;
  BigInt(long v) : v_(v) {}
  BigInt(int v) : v_(v) {}
  explicit BigInt(const mpz_class &v) : v_(v) {}
  static BigInt from_string(std::string_view s);
  static BigInt from_i64(std::int64_t v);

  const mpz_class &raw() const { return v_; }

  BigInt operator-() const { return BigInt(mpz_class(-v_)); }
  friend BigInt operator+(const BigInt &a, const BigInt &b) { return BigInt(mpz_class(a.v_ + b.v_)); }
  friend BigInt operator-(const BigInt &a, const BigInt &b) { return BigInt(mpz_class(a.v_ - b.v_)); }
  friend BigInt operator*(const BigInt &a, const BigInt &b) { return BigInt(mpz_class(a.v_ * b.v_)); }
  /// Truncating division, as in C.
  BigInt div_trunc(const BigInt &d) const;
  BigInt rem_trunc(const BigInt &d) const;

  friend bool operator==(const BigInt &a, const BigInt &b) { return cmp(a.v_, b.v_) == 0; }
  friend std::strong_ordering operator<=>(const BigInt &a, const BigInt &b) {
    int c = cmp(a.v_, b.v_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  int sign() const { return sgn(v_); }
  bool fits_i64() const;
  std::int64_t to_i64() const;
  std::string str() const { return v_.get_str(); }

  static BigInt pow(const BigInt &base, unsigned long exp);

private:
  mpz_class v_;
};

/// Exact rational number, always kept in normalized form (positive
/// denominator, coprime numerator and denominator).
class Rational {
public:
  Rational() = default;
  Rational(long v) : v_(v) {}
  Rational(int v) : v_(v) {}
  Rational(const BigInt &n) : v_(n.raw()) {}
  Rational(const BigInt &num, const BigInt &den);
  explicit Rational(const mpq_class &v) : v_(v) { v_.canonicalize(); }

  /// Parses integers ("12"), fractions ("1/3") and decimal literals with an
  /// optional exponent ("0.1", "-1e-7", "2.5E+3"). The decimal value is kept
  /// exactly.
  static Rational parse(std::string_view text);
  /// The exact value of a binary64 number.
  static Rational from_double(double d);
  /// beta^e for any integer exponent.
  static Rational power(long beta, long e);

  const mpq_class &raw() const { return v_; }
  BigInt num() const { return BigInt(mpz_class(v_.get_num())); }
  BigInt den() const { return BigInt(mpz_class(v_.get_den())); }

  Rational operator-() const { return Rational(mpq_class(-v_)); }
  friend Rational operator+(const Rational &a, const Rational &b) { return Rational(mpq_class(a.v_ + b.v_)); }
  friend Rational operator-(const Rational &a, const Rational &b) { return Rational(mpq_class(a.v_ - b.v_)); }
  friend Rational operator*(const Rational &a, const Rational &b) { return Rational(mpq_class(a.v_ * b.v_)); }
  /// Throws NumericError when b is zero.
  friend Rational operator/(const Rational &a, const Rational &b);
  Rational &operator+=(const Rational &b) { v_ += b.v_; return *this; }
  Rational &operator-=(const Rational &b) { v_ -= b.v_; return *this; }
  Rational &operator*=(const Rational &b) { v_ *= b.v_; return *this; }

  friend bool operator==(const Rational &a, const Rational &b) { return cmp(a.v_, b.v_) == 0; }
  friend std::strong_ordering operator<=>(const Rational &a, const Rational &b) {
    int c = cmp(a.v_, b.v_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  int sign() const { return sgn(v_); }
  bool is_zero() const { return sign() == 0; }
  bool is_integer() const { return v_.get_den() == 1; }
  Rational abs() const { return Rational(mpq_class(::abs(v_))); }
  /// Rounds toward zero.
  BigInt trunc() const;
  BigInt floor() const;
  BigInt ceil() const;
  double to_double() const { return v_.get_d(); }

  /// "n" or "n/d".
  std::string str() const { return v_.get_str(); }
  /// Exact decimal expansion if the denominator has only factors 2 and 5 and
  /// the expansion fits in max_digits significant characters.
  std::optional<std::string> exact_decimal(std::size_t max_digits = 40) const;
  /// Decimal approximation for human-readable output.
  std::string approx(int digits = 6) const;

private:
  mpq_class v_;
};

inline Rational min(const Rational &a, const Rational &b) { return b < a ? b : a; }
inline Rational max(const Rational &a, const Rational &b) { return a < b ? b : a; }

enum class ArithOp { Add, Sub, Mul, Div };

/// Exact arithmetic with an explicit empty result for division by zero.
std::optional<Rational> rat_arith(ArithOp op, const Rational &a, const Rational &b);

} // namespace fldx
