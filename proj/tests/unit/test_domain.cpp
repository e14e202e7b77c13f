#include "doctest.h"

#include "fldx/domain/abstract_float.hpp"

#include <random>

using namespace fldx;

namespace {

Rational q(const char *s) { return Rational::parse(s); }

Rational sample(std::mt19937_64 &rng, const RInterval &r) {
  std::uniform_int_distribution<long> d(0, 1000);
  return r.lo() + r.width() * Rational(BigInt(d(rng)), BigInt(1000));
}

} // namespace

TEST_CASE("zonotope of x - x*x over [0, 1]") {
  SymbolTable table;
  SymbolRanges ranges;
  AffineForm x = AffineForm::from_interval(RInterval(q("0"), q("1")), table, SymbolOrigin::Input);
  AffineForm x2 = af_mul(x, x, table, ranges);
  CHECK(x2.concretize(ranges) == RInterval(q("-0.25"), q("1")));
  CHECK((x - x2).concretize(ranges) == RInterval(q("0"), q("0.25")));
  // Interval arithmetic loses the correlation.
  RInterval xi(q("0"), q("1"));
  CHECK(xi - xi * xi == RInterval(q("-1"), q("1")));
}

TEST_CASE("affine product and inverse are sound on sampled points") {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<long> c(-20, 20);
  for (int trial = 0; trial < 200; ++trial) {
    SymbolTable table;
    for (int i = 0; i < 3; ++i)
      table.fresh(SymbolOrigin::Input);
    SymbolRanges ranges;
    ranges.set(1, RInterval(q("-0.5"), q("1")));
    AffineForm a = AffineForm::symbol(0, Rational(c(rng))) + AffineForm::symbol(1, Rational(c(rng)), Rational(c(rng)));
    AffineForm b = AffineForm::symbol(1, Rational(c(rng))) + AffineForm::symbol(2, Rational(c(rng)), Rational(c(rng)));
    AffineForm prod = af_mul(a, b, table, ranges);
    AffineForm den = b + AffineForm(Rational(100));
    RInterval hint = den.concretize(ranges);
    AffineForm inv = af_inverse(den, hint, table);
    for (int s = 0; s < 20; ++s) {
      std::map<int, Rational> pt;
      for (int i = 0; i < 3; ++i)
        pt[i] = sample(rng, ranges.range(i));
      auto eval = [&](const AffineForm &f) {
        Rational v = f.center();
        for (const auto &[sym, k] : f.terms())
          if (sym < 3)
            v += k * pt[sym];
        return v;
      };
      // Value of the form after fixing the original symbols; the new symbols
      // must be able to account for the rest.
      auto reachable = [&](const AffineForm &f, const Rational &target) {
        Rational fixed = eval(f);
        Rational slack(0);
        for (const auto &[sym, k] : f.terms())
          if (sym >= 3)
            slack += k.abs();
        return (target - fixed).abs() <= slack;
      };
      CHECK(reachable(prod, eval(a) * eval(b)));
      CHECK(reachable(inv, Rational(1) / eval(den)));
    }
  }
}

TEST_CASE("condense keeps the concretization") {
  SymbolTable table;
  SymbolRanges ranges;
  AffineForm f(q("1"));
  for (int i = 1; i <= 10; ++i)
    f += AffineForm::symbol(table.fresh(SymbolOrigin::Input), Rational(i));
  AffineForm g = condense(f, 4, table, ranges);
  CHECK(g.terms().size() == 4);
  CHECK(g.concretize(ranges) == f.concretize(ranges));
  CHECK(g.coeff(9) == Rational(10));
}

TEST_CASE("abstract operations enclose concrete executions") {
  std::mt19937_64 rng(2024);
  const FloatFormat fmt = FloatFormat::binary32();
  const AbsOp ops[] = {AbsOp::Add, AbsOp::Sub, AbsOp::Mul, AbsOp::Div};
  for (int trial = 0; trial < 60; ++trial) {
    SymbolTable table;
    SymbolRanges ranges;
    DomainContext ctx{table, ranges};
    RInterval va(q("1"), q("2")), vb(q("0.5"), q("3"));
    RInterval e(q("-1e-6"), q("1e-6"));
    AbstractFloat a = AbstractFloat::with_error(va, e, fmt, table);
    AbstractFloat b = AbstractFloat::from_real(vb, fmt, table);
    for (AbsOp op : ops) {
      AbstractFloat r = abs_op(op, a, b, fmt, ctx);
      for (int s = 0; s < 10; ++s) {
        Rational fa = round_nearest(sample(rng, va), fmt).value();
        Rational ea = sample(rng, e);
        Rational rb = sample(rng, vb);
        Rational fb = round_nearest(rb, fmt).value();
        Rational ra = fa - ea;
        Rational exact_f = *rat_arith(static_cast<ArithOp>(op), fa, fb);
        Rational f = round_nearest(exact_f, fmt).value();
        Rational real = *rat_arith(static_cast<ArithOp>(op), ra, rb);
        REQUIRE(r.float_iv.contains(f));
        REQUIRE(r.real_iv.contains(real));
        REQUIRE(r.err_iv.contains(f - real));
      }
    }
  }
}

TEST_CASE("division by a range containing zero raises an alarm") {
  SymbolTable table;
  SymbolRanges ranges;
  DomainContext ctx{table, ranges};
  auto fmt = FloatFormat::binary64();
  AbstractFloat a = AbstractFloat::constant(q("1"), fmt);
  AbstractFloat b = AbstractFloat::from_real(RInterval(q("-1"), q("1")), fmt, table);
  try {
    abs_op(AbsOp::Div, a, b, fmt, ctx);
    FAIL("expected an alarm");
  } catch (const DomainAlarm &al) {
    CHECK(al.kind() == AlarmKind::DivisionByZero);
  }
}

TEST_CASE("constant rounding error is exact") {
  auto fmt = FloatFormat::binary32();
  AbstractFloat c = AbstractFloat::constant(q("0.1"), fmt);
  Rational f = Rational::from_double(static_cast<double>(0.1f));
  CHECK(c.float_iv == RInterval(f));
  CHECK(c.err_iv == RInterval(f - q("0.1")));
  CHECK(c.rel.has_value());
}

TEST_CASE("propagation narrows symbol ranges") {
  // e0 + e1 >= 1.5 forces both symbols into [0.5, 1].
  AffineForm g = AffineForm::symbol(0, q("1")) + AffineForm::symbol(1, q("1"), q("-1.5"));
  auto r = propagate({{g, true}}, SymbolRanges{});
  REQUIRE(r.has_value());
  CHECK(r->range(0) == RInterval(q("0.5"), q("1")));
  CHECK(r->range(1) == RInterval(q("0.5"), q("1")));
  CHECK(!propagate({{g + AffineForm(q("-1")), true}}, SymbolRanges{}).has_value());
}

TEST_CASE("constrain substitutes when the gain passes the threshold") {
  SymbolTable table;
  SymbolRanges ranges;
  DomainContext ctx{table, ranges};
  int e0 = table.fresh(SymbolOrigin::Input);
  int e1 = table.fresh(SymbolOrigin::Input);
  AffineForm big = AffineForm::symbol(e0, q("1"));
  AffineForm dominated = AffineForm::symbol(e0, q("0.01")) + AffineForm::symbol(e1, q("1"));
  std::vector<AffineForm *> env{&big, &dominated};
  int d = constrain(env, e0, RInterval(q("0"), q("1")), ctx);
  REQUIRE(d >= 0);
  CHECK(big == AffineForm::symbol(d, q("0.5"), q("0.5")));
  CHECK(dominated.has(e0));
  CHECK(ctx.ranges.range(e0) == RInterval(q("0"), q("1")));
  CHECK(table.info(d).substitution->replaced == e0);
  CHECK_THROWS_AS(constrain(env, e0, RInterval(q("-1"), q("0.5")), ctx), InfeasiblePath);
}

TEST_CASE("union keeps identical forms and collapses different ones") {
  SymbolTable table;
  auto fmt = FloatFormat::binary64();
  AbstractFloat a = AbstractFloat::from_real(RInterval(q("0"), q("1")), fmt, table);
  SymbolRanges rs;
  AbstractFloat same = union_of(a, rs, a, rs, table);
  CHECK(same.real == a.real);
  AbstractFloat b = AbstractFloat::constant(q("3"), fmt);
  AbstractFloat u = union_of(a, rs, b, rs, table);
  CHECK(u.real_iv == RInterval(q("0"), q("3")));
  CHECK(u.float_iv.contains(q("3")));
  CHECK(u.real.terms().size() == 1);
  CHECK(table.info(u.real.terms().begin()->first).origin == SymbolOrigin::Merge);
}
