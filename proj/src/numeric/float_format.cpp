#include "fldx/numeric/float_format.hpp"

#include <cmath>

namespace fldx {

FloatFormat FloatFormat::custom(long beta, long p, long e_min, long e_max) {
  if (beta < 2 || p < 2 || e_min > e_max)
    throw NumericError("invalid float format: beta=" + std::to_string(beta) + " p=" + std::to_string(p) +
                       " e_min=" + std::to_string(e_min) + " e_max=" + std::to_string(e_max));
  return {beta, p, e_min, e_max};
}

Rational FloatFormat::max_finite() const {
  return (Rational::power(beta, p) - Rational(1)) * Rational::power(beta, e_max - p + 1);
}

Rational FloatFormat::subnormal_step() const { return Rational::power(beta, e_min - p + 1); }

Rational FloatFormat::min_normal() const { return Rational::power(beta, e_min); }

bool FloatFormat::contains(const FloatFormat &o) const {
  return beta == o.beta && p >= o.p && e_min <= o.e_min && e_max >= o.e_max;
}

std::string FloatFormat::name() const {
  if (*this == binary32())
    return "binary32";
  if (*this == binary64())
    return "binary64";
  if (*this == toy())
    return "toy";
  return "custom(" + std::to_string(beta) + "," + std::to_string(p) + "," + std::to_string(e_min) + "," +
         std::to_string(e_max) + ")";
}

namespace {

long bit_length(const mpz_class &z) { return static_cast<long>(mpz_sizeinbase(z.get_mpz_t(), 2)); }

// floor(log_beta(a)) for a > 0, unclamped.
long floor_log(const Rational &a, long beta) {
  long l2 = bit_length(a.raw().get_num()) - bit_length(a.raw().get_den());
  long e = static_cast<long>(std::floor(static_cast<double>(l2) / std::log2(static_cast<double>(beta)))) - 1;
  while (Rational::power(beta, e) > a)
    --e;
  while (Rational::power(beta, e + 1) <= a)
    ++e;
  return e;
}

// Integer nearest to q, ties to even.
BigInt round_half_even(const Rational &q) {
  BigInt fl = q.floor();
  Rational frac = q - Rational(fl);
  Rational half(BigInt(1), BigInt(2));
  if (frac < half)
    return fl;
  if (frac > half)
    return fl + BigInt(1);
  return fl.rem_trunc(BigInt(2)).sign() == 0 ? fl : fl + BigInt(1);
}

} // namespace

long exponent_of(const Rational &x, const FloatFormat &fmt) {
  if (x.is_zero())
    return fmt.e_min;
  return std::max(floor_log(x.abs(), fmt.beta), fmt.e_min);
}

Rational round_to(const Rational &x, const FloatFormat &fmt, RoundingMode mode) {
  if (x.is_zero())
    return x;
  const bool neg = x.sign() < 0;
  const Rational a = x.abs();
  const long e = exponent_of(a, fmt);
  const Rational quantum = Rational::power(fmt.beta, e - fmt.p + 1);
  const Rational m = a / quantum;
  BigInt mi;
  switch (mode) {
  case RoundingMode::NearestEven: mi = round_half_even(m); break;
  // Directed modes act on the signed value; on the magnitude they swap.
  case RoundingMode::Up: mi = neg ? m.floor() : m.ceil(); break;
  case RoundingMode::Down: mi = neg ? m.ceil() : m.floor(); break;
  }
  Rational r = Rational(mi) * quantum;
  if (r > fmt.max_finite())
    throw OverflowError("value " + x.approx(17) + " overflows " + fmt.name());
  return neg ? -r : r;
}

FloatValue round_nearest(const Rational &x, const FloatFormat &fmt) {
  return FloatValue(round_to(x, fmt, RoundingMode::NearestEven), fmt);
}

bool is_representable(const Rational &x, const FloatFormat &fmt) {
  if (x.abs() > fmt.max_finite())
    return false;
  return round_to(x, fmt, RoundingMode::Down) == x;
}

FloatValue FloatValue::checked(const Rational &x, const FloatFormat &fmt) {
  if (!is_representable(x, fmt))
    throw NumericError(x.str() + " is not representable in " + fmt.name());
  return FloatValue(x, fmt);
}

long FloatValue::exponent() const { return exponent_of(value_, fmt_); }

BigInt FloatValue::significand() const {
  if (value_.is_zero())
    return BigInt(0);
  Rational m = value_.abs() / Rational::power(fmt_.beta, exponent() - fmt_.p + 1);
  return m.trunc();
}

Rational unit_roundoff(const FloatFormat &fmt) {
  return Rational::power(fmt.beta, 1 - fmt.p) * Rational(BigInt(1), BigInt(2));
}

Rational half_ulp_bound(const Rational &magnitude, const FloatFormat &fmt) {
  const long e = exponent_of(magnitude, fmt);
  return Rational::power(fmt.beta, e - fmt.p + 1) * Rational(BigInt(1), BigInt(2));
}

namespace {

Rational succ_magnitude(const Rational &a, const FloatFormat &fmt) {
  if (a.is_zero())
    return fmt.subnormal_step();
  const long e = exponent_of(a, fmt);
  Rational r = a + Rational::power(fmt.beta, e - fmt.p + 1);
  if (r > fmt.max_finite())
    throw OverflowError("no representable successor of " + a.approx(17) + " in " + fmt.name());
  return r;
}

Rational pred_magnitude(const Rational &a, const FloatFormat &fmt) {
  const long e = exponent_of(a, fmt);
  const Rational quantum = Rational::power(fmt.beta, e - fmt.p + 1);
  // At a binade boundary the spacing below is beta times smaller.
  if (e > fmt.e_min && a == Rational::power(fmt.beta, e))
    return a - quantum / Rational(fmt.beta);
  return a - quantum;
}

} // namespace

Rational next_up(const Rational &x, const FloatFormat &fmt) {
  if (x.sign() >= 0)
    return succ_magnitude(x, fmt);
  return -pred_magnitude(x.abs(), fmt);
}

Rational next_down(const Rational &x, const FloatFormat &fmt) { return -next_up(-x, fmt); }

RInterval round_outward(const RInterval &iv, const FloatFormat &fmt) {
  return {round_to(iv.lo(), fmt, RoundingMode::Down), round_to(iv.hi(), fmt, RoundingMode::Up)};
}

std::optional<RInterval> round_inward(const RInterval &iv, const FloatFormat &fmt) {
  const Rational big = fmt.max_finite();
  Rational lo = iv.lo() < -big ? -big : round_to(iv.lo(), fmt, RoundingMode::Up);
  Rational hi = iv.hi() > big ? big : round_to(iv.hi(), fmt, RoundingMode::Down);
  if (hi < lo)
    return std::nullopt;
  return RInterval(lo, hi);
}

} // namespace fldx
