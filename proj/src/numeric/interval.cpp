#include "fldx/numeric/interval.hpp"

#include <array>
#include <algorithm>

namespace fldx {

RInterval::RInterval(const Rational &lo, const Rational &hi) : lo_(lo), hi_(hi) {
  if (hi_ < lo_)
    throw NumericError("interval with lo > hi: [" + lo.str() + ", " + hi.str() + "]");
}

RInterval operator*(const RInterval &a, const RInterval &b) {
  std::array<Rational, 4> p{a.lo_ * b.lo_, a.lo_ * b.hi_, a.hi_ * b.lo_, a.hi_ * b.hi_};
  auto [mn, mx] = std::minmax_element(p.begin(), p.end());
  return {*mn, *mx};
}

RInterval operator*(const Rational &k, const RInterval &a) {
  if (k.sign() >= 0)
    return {k * a.lo_, k * a.hi_};
  return {k * a.hi_, k * a.lo_};
}

RInterval operator/(const RInterval &a, const RInterval &b) {
  if (b.contains_zero())
    throw NumericError("interval division by " + b.str() + " which contains zero");
  RInterval inv(Rational(1) / b.hi_, Rational(1) / b.lo_);
  return a * inv;
}

std::optional<RInterval> RInterval::meet(const RInterval &o) const {
  Rational lo = max(lo_, o.lo_);
  Rational hi = min(hi_, o.hi_);
  if (hi < lo)
    return std::nullopt;
  return RInterval(lo, hi);
}

std::optional<RInterval> interval_arith(IntervalOp op, const RInterval &a, const RInterval &b) {
  switch (op) {
  case IntervalOp::Add: return a + b;
  case IntervalOp::Sub: return a - b;
  case IntervalOp::Mul: return a * b;
  case IntervalOp::Div: return a / b;
  case IntervalOp::Join: return a.join(b);
  case IntervalOp::Meet: return a.meet(b);
  }
  return std::nullopt;
}

} // namespace fldx
