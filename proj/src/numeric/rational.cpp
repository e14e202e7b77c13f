#include "fldx/numeric/rational.hpp"

#include <cctype>
#include <climits>
#include <cmath>
#include <sstream>

namespace fldx {

BigInt BigInt::from_string(std::string_view s) {
  mpz_class v;
  if (v.set_str(std::string(s), 10) != 0)
    throw NumericError("malformed integer literal '" + std::string(s) + "'");
  return BigInt(v);
}

BigInt BigInt::from_i64(std::int64_t v) {
  if (v >= LONG_MIN && v <= LONG_MAX)
    return BigInt(static_cast<long>(v));
  return from_string(std::to_string(v));
}

BigInt BigInt::div_trunc(const BigInt &d) const {
  if (d.sign() == 0)
    throw NumericError("integer division by zero");
  mpz_class q;
  mpz_tdiv_q(q.get_mpz_t(), v_.get_mpz_t(), d.v_.get_mpz_t());
  return BigInt(q);
}

BigInt BigInt::rem_trunc(const BigInt &d) const {
  if (d.sign() == 0)
    throw NumericError("integer modulo by zero");
  mpz_class r;
  mpz_tdiv_r(r.get_mpz_t(), v_.get_mpz_t(), d.v_.get_mpz_t());
  return BigInt(r);
}

bool BigInt::fits_i64() const { return v_.fits_slong_p(); }

std::int64_t BigInt::to_i64() const {
  if (!fits_i64())
    throw NumericError("integer " + str() + " does not fit in 64 bits");
  return v_.get_si();
}

BigInt BigInt::pow(const BigInt &base, unsigned long exp) {
  mpz_class r;
  mpz_pow_ui(r.get_mpz_t(), base.v_.get_mpz_t(), exp);
  return BigInt(r);
}

Rational::Rational(const BigInt &num, const BigInt &den) {
  if (den.sign() == 0)
    throw NumericError("zero denominator");
  v_ = mpq_class(num.raw(), den.raw());
  v_.canonicalize();
}

Rational operator/(const Rational &a, const Rational &b) {
  if (b.is_zero())
    throw NumericError("division by zero");
  return Rational(mpq_class(a.v_ / b.v_));
}

Rational Rational::power(long beta, long e) {
  mpz_class p;
  mpz_ui_pow_ui(p.get_mpz_t(), static_cast<unsigned long>(beta),
                static_cast<unsigned long>(e < 0 ? -e : e));
  if (e >= 0)
    return Rational(mpq_class(p));
  return Rational(mpq_class(mpz_class(1), p));
}

Rational Rational::parse(std::string_view text) {
  std::string s(text);
  if (s.empty())
    throw NumericError("empty numeric literal");
  if (auto slash = s.find('/'); slash != std::string::npos) {
    return Rational(BigInt::from_string(s.substr(0, slash)), BigInt::from_string(s.substr(slash + 1)));
  }
  std::size_t i = 0;
  bool neg = false;
  if (s[i] == '+' || s[i] == '-') {
    neg = s[i] == '-';
    ++i;
  }
  std::string digits;
  long frac_digits = 0;
  bool seen_point = false, seen_digit = false;
  for (; i < s.size(); ++i) {
    char c = s[i];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      digits.push_back(c);
      seen_digit = true;
      if (seen_point)
        ++frac_digits;
    } else if (c == '.' && !seen_point) {
      seen_point = true;
    } else {
      break;
    }
  }
  if (!seen_digit)
    throw NumericError("malformed numeric literal '" + s + "'");
  long exponent = 0;
  if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
    ++i;
    std::size_t start = i;
    if (i < s.size() && (s[i] == '+' || s[i] == '-'))
      ++i;
    if (i >= s.size())
      throw NumericError("malformed exponent in '" + s + "'");
    try {
      exponent = std::stol(s.substr(start));
    } catch (const std::exception &) {
      throw NumericError("malformed exponent in '" + s + "'");
    }
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i])))
      ++i;
  }
  if (i != s.size())
    throw NumericError("trailing characters in numeric literal '" + s + "'");
  Rational mant(BigInt::from_string(digits));
  Rational r = mant * power(10, exponent - frac_digits);
  return neg ? -r : r;
}

Rational Rational::from_double(double d) {
  if (!std::isfinite(d))
    throw NumericError("non-finite double has no rational value");
  mpq_class q(d);
  return Rational(q);
}

BigInt Rational::trunc() const {
  mpz_class q;
  mpz_tdiv_q(q.get_mpz_t(), v_.get_num_mpz_t(), v_.get_den_mpz_t());
  return BigInt(q);
}

BigInt Rational::floor() const {
  mpz_class q;
  mpz_fdiv_q(q.get_mpz_t(), v_.get_num_mpz_t(), v_.get_den_mpz_t());
  return BigInt(q);
}

BigInt Rational::ceil() const {
  mpz_class q;
  mpz_cdiv_q(q.get_mpz_t(), v_.get_num_mpz_t(), v_.get_den_mpz_t());
  return BigInt(q);
}

std::optional<std::string> Rational::exact_decimal(std::size_t max_digits) const {
  mpz_class den = v_.get_den();
  long twos = 0, fives = 0;
  while (mpz_divisible_ui_p(den.get_mpz_t(), 2)) {
    den /= 2;
    ++twos;
  }
  while (mpz_divisible_ui_p(den.get_mpz_t(), 5)) {
    den /= 5;
    ++fives;
  }
  if (den != 1)
    return std::nullopt;
  long scale = std::max(twos, fives);
  mpz_class pow10;
  mpz_ui_pow_ui(pow10.get_mpz_t(), 10, static_cast<unsigned long>(scale));
  mpz_class scaled = v_.get_num() * (pow10 / v_.get_den());
  bool neg = scaled < 0;
  if (neg)
    scaled = -scaled;
  std::string ds = scaled.get_str();
  if (scale > 0) {
    if (ds.size() <= static_cast<std::size_t>(scale))
      ds.insert(0, static_cast<std::size_t>(scale) - ds.size() + 1, '0');
    ds.insert(ds.size() - static_cast<std::size_t>(scale), ".");
  }
  if (ds.size() > max_digits)
    return std::nullopt;
  return neg ? "-" + ds : ds;
}

std::string Rational::approx(int digits) const {
  std::ostringstream os;
  os.precision(digits);
  os << to_double();
  return os.str();
}

std::optional<Rational> rat_arith(ArithOp op, const Rational &a, const Rational &b) {
  switch (op) {
  case ArithOp::Add: return a + b;
  case ArithOp::Sub: return a - b;
  case ArithOp::Mul: return a * b;
  case ArithOp::Div:
    if (b.is_zero())
      return std::nullopt;
    return a / b;
  }
  return std::nullopt;
}

} // namespace fldx
