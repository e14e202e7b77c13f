#include "fldx/domain/abstract_float.hpp"

#include <set>

namespace fldx {

std::string to_string(AlarmKind k) {
  switch (k) {
  case AlarmKind::DivisionByZero: return "division-by-zero";
  case AlarmKind::Overflow: return "overflow";
  case AlarmKind::OutOfBounds: return "out-of-bounds";
  case AlarmKind::AssertionFailed: return "assertion-failed";
  case AlarmKind::AssertionIndeterminate: return "assertion-indeterminate";
  case AlarmKind::RelativeErrorUndefined: return "relative-error-undefined";
  case AlarmKind::InstrumentationGap: return "instrumentation-gap";
  case AlarmKind::NoFeasibleExecution: return "no-feasible-execution";
  case AlarmKind::CastRange: return "cast-range";
  case AlarmKind::Unsupported: return "unsupported";
  case AlarmKind::Uninitialized: return "uninitialized";
  }
  return "?";
}

namespace {

RInterval meet_or_infeasible(const RInterval &a, const RInterval &b, const char *what) {
  auto m = a.meet(b);
  if (!m)
    throw InfeasiblePath(std::string("inconsistent ") + what + " domain");
  return *m;
}

Rational round_or_alarm(const Rational &x, const FloatFormat &fmt) {
  try {
    return round_nearest(x, fmt).value();
  } catch (const OverflowError &e) {
    throw DomainAlarm(AlarmKind::Overflow, e.what());
  }
}

// Rounding error committed when rounding any value of `exact` to `fmt`, as a
// form and its interval.
std::pair<AffineForm, RInterval> rounding_term(const RInterval &exact, const FloatFormat &fmt, SymbolTable &table) {
  if (exact.is_point()) {
    Rational d = round_or_alarm(exact.lo(), fmt) - exact.lo();
    return {AffineForm(d), RInterval(d)};
  }
  Rational h = half_ulp_bound(exact.mag(), fmt);
  RInterval iv(-h, h);
  return {AffineForm::from_interval(iv, table, SymbolOrigin::Rounding), iv};
}

void finish(AbstractFloat &r, DomainContext &ctx) {
  r.real = condense(r.real, ctx.max_syms, ctx.table, ctx.ranges);
  r.err = condense(r.err, ctx.max_syms, ctx.table, ctx.ranges);
  r.refine(ctx.ranges);
}

} // namespace

AbstractFloat AbstractFloat::exact(const Rational &value, const FloatFormat &fmt) {
  AbstractFloat r;
  r.format = fmt;
  r.float_iv = RInterval(value);
  r.real = AffineForm(value);
  r.real_iv = RInterval(value);
  r.err = AffineForm(Rational(0));
  r.err_iv = RInterval(Rational(0));
  r.rel = value.is_zero() ? std::nullopt : std::optional<RInterval>(RInterval(Rational(0)));
  return r;
}

AbstractFloat AbstractFloat::constant(const Rational &value, const FloatFormat &fmt) {
  AbstractFloat r;
  r.format = fmt;
  Rational f = round_or_alarm(value, fmt);
  r.float_iv = RInterval(f);
  r.real = AffineForm(value);
  r.real_iv = RInterval(value);
  r.err = AffineForm(f - value);
  r.err_iv = RInterval(f - value);
  r.rel = value.is_zero() ? std::nullopt : std::optional<RInterval>(RInterval((f - value) / value));
  return r;
}

AbstractFloat AbstractFloat::with_error(const RInterval &value, const RInterval &error, const FloatFormat &fmt,
                                        SymbolTable &table) {
  AbstractFloat r;
  r.format = fmt;
  try {
    r.float_iv = round_outward(value, fmt);
  } catch (const OverflowError &e) {
    throw DomainAlarm(AlarmKind::Overflow, e.what());
  }
  AffineForm f = AffineForm::from_interval(r.float_iv, table, SymbolOrigin::Input);
  r.err = AffineForm::from_interval(error, table, SymbolOrigin::Input);
  r.err_iv = error;
  r.real = f - r.err;
  r.real_iv = r.float_iv - error;
  r.refine(SymbolRanges{});
  return r;
}

AbstractFloat AbstractFloat::from_real(const RInterval &real, const FloatFormat &fmt, SymbolTable &table) {
  AbstractFloat r;
  r.format = fmt;
  r.real = AffineForm::from_interval(real, table, SymbolOrigin::Input);
  r.real_iv = real;
  r.float_iv = RInterval(round_or_alarm(real.lo(), fmt), round_or_alarm(real.hi(), fmt));
  auto [e, eiv] = rounding_term(real, fmt, table);
  r.err = e;
  r.err_iv = eiv;
  r.refine(SymbolRanges{});
  return r;
}

RInterval AbstractFloat::real_range(const SymbolRanges &ranges) const {
  return meet_or_infeasible(real_iv, real.concretize(ranges), "real");
}

RInterval AbstractFloat::err_range(const SymbolRanges &ranges) const {
  return meet_or_infeasible(err_iv, err.concretize(ranges), "error");
}

void AbstractFloat::refine(const SymbolRanges &ranges) {
  real_iv = meet_or_infeasible(real_iv, real.concretize(ranges), "real");
  err_iv = meet_or_infeasible(err_iv, err.concretize(ranges), "error");
  err_iv = meet_or_infeasible(err_iv, float_iv - real_iv, "error");
  real_iv = meet_or_infeasible(real_iv, float_iv - err_iv, "real");
  RInterval sum = real_iv + err_iv;
  std::optional<RInterval> inner;
  try {
    inner = round_inward(sum, format);
  } catch (const OverflowError &) {
    inner = sum; // out-of-range sums do not narrow float_iv
  }
  if (!inner)
    throw InfeasiblePath("no representable machine value");
  float_iv = meet_or_infeasible(float_iv, *inner, "machine");
  if (real_iv.contains_zero())
    rel.reset();
  else
    rel = err_iv / real_iv;
}

bool AbstractFloat::same_as(const AbstractFloat &o) const {
  return format == o.format && float_iv == o.float_iv && real == o.real && real_iv == o.real_iv && err == o.err &&
         err_iv == o.err_iv;
}

AbstractFloat abs_neg(const AbstractFloat &a) {
  AbstractFloat r = a;
  r.float_iv = -a.float_iv;
  r.real = -a.real;
  r.real_iv = -a.real_iv;
  r.err = -a.err;
  r.err_iv = -a.err_iv;
  if (a.rel)
    r.rel = a.rel; // err/real is invariant under negation
  return r;
}

AbstractFloat abs_op(AbsOp op, const AbstractFloat &a, const AbstractFloat &b, const FloatFormat &fmt,
                     DomainContext &ctx) {
  const SymbolRanges &rg = ctx.ranges;
  const RInterval ra = a.real_range(rg), rb = b.real_range(rg);
  const RInterval ea = a.err_range(rg), eb = b.err_range(rg);
  AbstractFloat r;
  r.format = fmt;
  RInterval exact;
  AffineForm err_lin;
  RInterval err_lin_iv;
  switch (op) {
  case AbsOp::Add:
    r.real = a.real + b.real;
    r.real_iv = ra + rb;
    exact = a.float_iv + b.float_iv;
    err_lin = a.err + b.err;
    err_lin_iv = ea + eb;
    break;
  case AbsOp::Sub:
    r.real = a.real - b.real;
    r.real_iv = ra - rb;
    exact = a.float_iv - b.float_iv;
    err_lin = a.err - b.err;
    err_lin_iv = ea - eb;
    break;
  case AbsOp::Mul:
    r.real = af_mul(a.real, b.real, ctx.table, rg);
    r.real_iv = ra * rb;
    exact = a.float_iv * b.float_iv;
    // (ra+ea)(rb+eb) - ra*rb
    err_lin = af_mul(a.real, b.err, ctx.table, rg) + af_mul(b.real, a.err, ctx.table, rg) +
              af_mul(a.err, b.err, ctx.table, rg);
    err_lin_iv = ra * eb + rb * ea + ea * eb;
    break;
  case AbsOp::Div: {
    if (b.float_iv.contains_zero())
      throw DomainAlarm(AlarmKind::DivisionByZero, "machine divisor " + b.float_iv.str() + " may be zero");
    if (rb.contains_zero())
      throw DomainAlarm(AlarmKind::DivisionByZero, "real divisor " + rb.str() + " may be zero");
    r.real = af_mul(a.real, af_inverse(b.real, rb, ctx.table), ctx.table, rg);
    r.real_iv = ra / rb;
    exact = a.float_iv / b.float_iv;
    // fa/fb - ra/rb = (ea - (ra/rb) * eb) / fb
    AffineForm fb_form = b.real + b.err;
    RInterval fb_hint = meet_or_infeasible(b.float_iv, fb_form.concretize(rg), "machine");
    AffineForm num = a.err - af_mul(r.real, b.err, ctx.table, rg);
    err_lin = af_mul(num, af_inverse(fb_form, fb_hint, ctx.table), ctx.table, rg);
    RInterval quotient = meet_or_infeasible(r.real_iv, r.real.concretize(rg), "real");
    err_lin_iv = (ea - quotient * eb) / fb_hint;
    break;
  }
  }
  r.float_iv = RInterval(round_or_alarm(exact.lo(), fmt), round_or_alarm(exact.hi(), fmt));
  auto [delta, delta_iv] = rounding_term(exact, fmt, ctx.table);
  r.err = err_lin + delta;
  r.err_iv = err_lin_iv + delta_iv;
  finish(r, ctx);
  return r;
}

AbstractFloat abs_convert(const AbstractFloat &a, const FloatFormat &to, DomainContext &ctx) {
  AbstractFloat r = a;
  r.format = to;
  if (to.contains(a.format))
    return r;
  r.float_iv = RInterval(round_or_alarm(a.float_iv.lo(), to), round_or_alarm(a.float_iv.hi(), to));
  auto [delta, delta_iv] = rounding_term(a.float_iv, to, ctx.table);
  r.err = a.err + delta;
  r.err_iv = a.err_range(ctx.ranges) + delta_iv;
  finish(r, ctx);
  return r;
}

std::optional<SymbolRanges> propagate(const std::vector<LinearConstraint> &constraints, const SymbolRanges &ranges,
                                      int rounds) {
  SymbolRanges cur = ranges;
  for (int round = 0; round < rounds; ++round) {
    bool changed = false;
    for (const auto &c : constraints) {
      // Normalize to g >= 0.
      const AffineForm g = c.nonneg ? c.form : -c.form;
      const RInterval total = g.concretize(cur);
      if (total.hi().sign() < 0)
        return std::nullopt;
      for (const auto &[sym, coef] : g.terms()) {
        const RInterval &r = cur.range(sym);
        const Rational term_hi = coef.sign() > 0 ? coef * r.hi() : coef * r.lo();
        const Rational rest_hi = total.hi() - term_hi;
        // coef * eps >= -rest_hi
        const Rational bound = -rest_hi / coef;
        std::optional<RInterval> next;
        if (coef.sign() > 0)
          next = bound > r.lo() ? r.meet(RInterval(bound, max(bound, r.hi()))) : r;
        else
          next = bound < r.hi() ? r.meet(RInterval(min(bound, r.lo()), bound)) : r;
        if (!next)
          return std::nullopt;
        if (!(*next == r)) {
          cur.set(sym, *next);
          changed = true;
        }
      }
    }
    if (!changed)
      break;
  }
  return cur;
}

int constrain(const std::vector<AffineForm *> &env, int sym, const RInterval &new_range, DomainContext &ctx) {
  const RInterval old = ctx.ranges.range(sym);
  if (!old.contains(new_range))
    throw InfeasiblePath("constraint range " + new_range.str() + " outside " + old.str());
  if (new_range == old)
    return -1;
  const Rational mid = new_range.mid();
  const Rational rad = new_range.rad();
  const int fresh = ctx.table.fresh_substitute(sym, mid, rad);
  SymbolRanges after = ctx.ranges;
  after.set(sym, new_range);
  for (AffineForm *f : env) {
    if (!f->has(sym))
      continue;
    const Rational before = f->concretize(ctx.ranges).width();
    if (before.is_zero())
      continue;
    AffineForm sub = f->substitute(sym, mid, rad, fresh);
    const Rational width = sub.concretize(after).width();
    if ((before - width) >= ctx.threshold * before)
      *f = std::move(sub);
  }
  ctx.ranges = std::move(after);
  return fresh;
}

void commit_ranges(const std::vector<AbstractFloat *> &env, const SymbolRanges &target, DomainContext &ctx) {
  std::set<int> changed;
  for (const auto &[sym, r] : target.narrowed())
    if (!(ctx.ranges.range(sym) == r))
      changed.insert(sym);
  for (const auto &[sym, r] : ctx.ranges.narrowed())
    if (target.is_default(sym))
      throw InfeasiblePath("constraint widened a symbol range");
  if (changed.empty())
    return;
  std::vector<AffineForm *> forms;
  std::vector<AbstractFloat *> touched;
  for (AbstractFloat *v : env) {
    bool uses = false;
    for (int s : changed)
      uses = uses || v->real.has(s) || v->err.has(s);
    if (uses)
      touched.push_back(v);
    forms.push_back(&v->real);
    forms.push_back(&v->err);
  }
  for (int s : changed)
    constrain(forms, s, target.range(s), ctx);
  for (AbstractFloat *v : touched)
    v->refine(ctx.ranges);
}

AbstractFloat collapse(const AbstractFloat &v, const SymbolRanges &ranges, SymbolTable &table) {
  AbstractFloat r = v;
  r.real_iv = v.real_range(ranges);
  r.err_iv = v.err_range(ranges);
  r.real = AffineForm::from_interval(r.real_iv, table, SymbolOrigin::Merge);
  r.err = AffineForm::from_interval(r.err_iv, table, SymbolOrigin::Merge);
  r.refine(SymbolRanges{});
  return r;
}

AbstractFloat union_of(const AbstractFloat &a, const SymbolRanges &ra, const AbstractFloat &b,
                       const SymbolRanges &rb, SymbolTable &table) {
  AbstractFloat r;
  r.format = a.format;
  r.float_iv = a.float_iv.join(b.float_iv);
  r.real_iv = a.real_range(ra).join(b.real_range(rb));
  r.err_iv = a.err_range(ra).join(b.err_range(rb));
  if (a.real == b.real && a.err == b.err) {
    r.real = a.real;
    r.err = a.err;
    r.refine(ra.join(rb));
    return r;
  }
  r.real = AffineForm::from_interval(r.real_iv, table, SymbolOrigin::Merge);
  r.err = AffineForm::from_interval(r.err_iv, table, SymbolOrigin::Merge);
  r.refine(SymbolRanges{});
  return r;
}

} // namespace fldx
