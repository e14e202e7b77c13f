#include "fldx/exec/decision.hpp"

#include "fldx/numeric/float_format.hpp"

#include <stdexcept>

namespace fldx {

namespace {

const char *truth(bool b) { return b ? "true" : "false"; }

const char *interp_name(Interp i) {
  switch (i) {
  case Interp::Stable: return "stable";
  case Interp::AsFloat: return "as-float";
  case Interp::AsReal: return "as-real";
  }
  return "?";
}

RInterval meet(const RInterval &a, const RInterval &b, const char *what) {
  auto m = a.meet(b);
  if (!m)
    throw InfeasiblePath(std::string("empty ") + what + " after constraint");
  return *m;
}

// Whether some value of d satisfies `d op 0`.
bool possible(BinOp op, const RInterval &d) {
  switch (op) {
  case BinOp::Lt: return d.lo().sign() < 0;
  case BinOp::Le: return d.lo().sign() <= 0;
  case BinOp::Gt: return d.hi().sign() > 0;
  case BinOp::Ge: return d.hi().sign() >= 0;
  case BinOp::Eq: return d.contains_zero();
  case BinOp::Ne: return !(d.is_point() && d.lo().is_zero());
  default: throw std::logic_error("not a comparison");
  }
}

void add_constraints(std::vector<LinearConstraint> &out, BinOp op, const AffineForm &diff) {
  switch (op) {
  case BinOp::Lt:
  case BinOp::Le: out.push_back({diff, false}); break;
  case BinOp::Gt:
  case BinOp::Ge: out.push_back({diff, true}); break;
  case BinOp::Eq:
    out.push_back({diff, true});
    out.push_back({diff, false});
    break;
  default: break;
  }
}

void commit(const std::vector<LinearConstraint> &cons, const std::vector<AbstractFloat *> &env, DomainContext &ctx) {
  if (cons.empty())
    return;
  auto narrowed = propagate(cons, ctx.ranges);
  if (!narrowed)
    throw InfeasiblePath("constraints on noise symbols have no solution");
  commit_ranges(env, *narrowed, ctx);
}

// a' = a restricted to values <= bound (or < bound when strict, on the
// representable grid of fmt).
RInterval below(const RInterval &a, const Rational &bound, bool strict, const FloatFormat *fmt) {
  Rational hi = bound;
  if (strict && fmt) {
    try {
      hi = next_down(bound, *fmt);
    } catch (const NumericError &) {
      throw InfeasiblePath("no machine value below the lowest finite number");
    }
  }
  if (a.lo() > hi)
    throw InfeasiblePath("empty range after constraint");
  return RInterval(a.lo(), min(a.hi(), hi));
}

RInterval above(const RInterval &a, const Rational &bound, bool strict, const FloatFormat *fmt) {
  Rational lo = bound;
  if (strict && fmt) {
    try {
      lo = next_up(bound, *fmt);
    } catch (const NumericError &) {
      throw InfeasiblePath("no machine value above the largest finite number");
    }
  }
  if (a.hi() < lo)
    throw InfeasiblePath("empty range after constraint");
  return RInterval(max(a.lo(), lo), a.hi());
}

// Narrows the sets A and B to the values compatible with A op B. Strict
// bounds move to the neighbouring representable value when fmt is given.
void narrow_pair(BinOp op, RInterval &a, RInterval &b, const FloatFormat *fmt) {
  switch (op) {
  case BinOp::Lt:
  case BinOp::Le: {
    const bool strict = op == BinOp::Lt;
    RInterval a2 = below(a, b.hi(), strict, fmt);
    RInterval b2 = above(b, a.lo(), strict, fmt);
    a = a2;
    b = b2;
    break;
  }
  case BinOp::Gt: narrow_pair(BinOp::Lt, b, a, fmt); break;
  case BinOp::Ge: narrow_pair(BinOp::Le, b, a, fmt); break;
  case BinOp::Eq:
    a = b = meet(a, b, "equality");
    break;
  case BinOp::Ne:
    if (a.is_point() && b.is_point() && a.lo() == b.lo())
      throw InfeasiblePath("equal points compared unequal");
    break;
  default: throw std::logic_error("not a comparison");
  }
}

struct Preimage {
  Rational lo, hi;
  bool lo_open = false, hi_open = false;
};

// Values that truncate to k.
Preimage preimage(long k) {
  if (k > 0)
    return {Rational(k), Rational(k + 1), false, true};
  if (k < 0)
    return {Rational(k - 1), Rational(k), true, false};
  return {Rational(-1), Rational(1), true, true};
}

// Machine values of fmt within `x` that truncate to k.
RInterval machine_preimage(const RInterval &x, long k, const FloatFormat &fmt) {
  const Preimage p = preimage(k);
  RInterval iv = p.lo_open ? above(x, p.lo, true, &fmt) : above(x, p.lo, false, nullptr);
  return p.hi_open ? below(iv, p.hi, true, &fmt) : below(iv, p.hi, false, nullptr);
}

long to_long(const BigInt &b) {
  if (!b.fits_i64())
    throw DomainAlarm(AlarmKind::CastRange, "integer " + b.str() + " does not fit in 64 bits");
  return static_cast<long>(b.to_i64());
}

constexpr long kMaxCastSpan = 4096;

} // namespace

std::string Flow::str(bool is_cast) const {
  if (is_cast) {
    std::string s = "cast(kf=" + std::to_string(kf) + ", kr=" + std::to_string(kr);
    return s + (diverges() ? std::string(", ") + interp_name(interp) : std::string()) + ")";
  }
  if (!diverges())
    return std::string("stable(") + truth(cf) + ")";
  return std::string("unstable(float=") + truth(cf) + ", real=" + truth(cr) + ", " + interp_name(interp) + ")";
}

Mode next_mode(Mode m, const Flow &f) {
  if (m != Mode::Both || !f.diverges())
    return m;
  return f.interp == Interp::AsFloat ? Mode::FloatOnly : Mode::RealOnly;
}

BinOp negate_comparison(BinOp op) {
  switch (op) {
  case BinOp::Lt: return BinOp::Ge;
  case BinOp::Le: return BinOp::Gt;
  case BinOp::Gt: return BinOp::Le;
  case BinOp::Ge: return BinOp::Lt;
  case BinOp::Eq: return BinOp::Ne;
  case BinOp::Ne: return BinOp::Eq;
  default: throw std::logic_error("not a comparison");
  }
}

std::vector<Flow> compare_flows(Mode m) {
  if (m != Mode::Both)
    return {{true, true}, {false, false}};
  return {{true, true},
          {false, false},
          {true, false, Interp::AsFloat},
          {true, false, Interp::AsReal},
          {false, true, Interp::AsFloat},
          {false, true, Interp::AsReal}};
}

void apply_compare(const Flow &f, BinOp op, AbstractFloat &a, AbstractFloat &b, const std::vector<AbstractFloat *> &env,
                   Mode m, DomainContext &ctx) {
  const bool use_float = m != Mode::RealOnly;
  const bool use_real = m != Mode::FloatOnly;
  const BinOp op_f = f.cf ? op : negate_comparison(op);
  const BinOp op_r = f.cr ? op : negate_comparison(op);
  const AffineForm fdiff = (a.real + a.err) - (b.real + b.err);
  const AffineForm rdiff = a.real - b.real;

  std::vector<LinearConstraint> cons;
  if (use_float)
    add_constraints(cons, op_f, fdiff);
  if (use_real)
    add_constraints(cons, op_r, rdiff);
  commit(cons, env, ctx);

  if (use_float) {
    const FloatFormat *fmt = a.format == b.format ? &a.format : nullptr;
    narrow_pair(op_f, a.float_iv, b.float_iv, fmt);
  }
  if (use_real) {
    RInterval ra = a.real_range(ctx.ranges), rb = b.real_range(ctx.ranges);
    narrow_pair(op_r, ra, rb, nullptr);
    a.real_iv = ra;
    b.real_iv = rb;
  }
  a.refine(ctx.ranges);
  b.refine(ctx.ranges);

  if (use_float) {
    auto d = fdiff.concretize(ctx.ranges).meet(a.float_iv - b.float_iv);
    if (!d || !possible(op_f, *d))
      throw InfeasiblePath("machine test outcome impossible");
  }
  if (use_real) {
    auto d = rdiff.concretize(ctx.ranges).meet(a.real_range(ctx.ranges) - b.real_range(ctx.ranges));
    if (!d || !possible(op_r, *d))
      throw InfeasiblePath("real test outcome impossible");
  }
}

std::vector<Flow> cast_flows(const AbstractFloat &x, Scalar target, Mode m, const SymbolRanges &ranges) {
  std::vector<Flow> out;
  const RInterval fl = x.float_iv;
  const Rational lo_ok = int_min(target) - Rational(1), hi_ok = int_max(target) + Rational(1);
  if (m != Mode::RealOnly && (fl.lo() <= lo_ok || fl.hi() >= hi_ok))
    throw DomainAlarm(AlarmKind::CastRange,
                      "machine value " + fl.str() + " may not fit in " + to_string(target) + " after truncation");
  const RInterval real = x.real_range(ranges);
  if (m == Mode::RealOnly) {
    const long a = to_long(real.lo().trunc()), b = to_long(real.hi().trunc());
    if (b - a > kMaxCastSpan)
      throw DomainAlarm(AlarmKind::Unsupported, "cast of a real value spanning more than 4096 integers");
    for (long k = a; k <= b; ++k)
      out.push_back({true, true, Interp::Stable, k, k});
    return out;
  }
  const long a = to_long(fl.lo().trunc()), b = to_long(fl.hi().trunc());
  if (b - a > kMaxCastSpan)
    throw DomainAlarm(AlarmKind::Unsupported, "cast of a machine value spanning more than 4096 integers");
  const RInterval err = x.err_range(ranges);
  for (long kf = a; kf <= b; ++kf) {
    if (m == Mode::FloatOnly) {
      out.push_back({true, true, Interp::Stable, kf, kf});
      continue;
    }
    std::optional<RInterval> fset;
    try {
      fset = machine_preimage(fl, kf, x.format);
    } catch (const InfeasiblePath &) {
      continue;
    }
    auto rset = (*fset - err).meet(real);
    if (!rset)
      continue;
    const long ra = to_long(rset->lo().trunc()), rb = to_long(rset->hi().trunc());
    if (rb - ra > kMaxCastSpan)
      throw DomainAlarm(AlarmKind::Unsupported, "cast whose real value spans more than 4096 integers");
    if (ra <= kf && kf <= rb)
      out.push_back({true, true, Interp::Stable, kf, kf});
    for (long kr = ra; kr <= rb; ++kr) {
      if (kr == kf)
        continue;
      out.push_back({true, true, Interp::AsFloat, kf, kr});
      out.push_back({true, true, Interp::AsReal, kf, kr});
    }
  }
  return out;
}

void apply_cast(const Flow &f, AbstractFloat &x, const std::vector<AbstractFloat *> &env, Mode m, DomainContext &ctx) {
  const bool use_float = m != Mode::RealOnly;
  const bool use_real = m != Mode::FloatOnly;
  const Preimage pf = preimage(f.kf), pr = preimage(f.kr);
  std::vector<LinearConstraint> cons;
  if (use_float) {
    const AffineForm fform = x.real + x.err;
    cons.push_back({fform - AffineForm(pf.lo), true});
    cons.push_back({fform - AffineForm(pf.hi), false});
  }
  if (use_real) {
    cons.push_back({x.real - AffineForm(pr.lo), true});
    cons.push_back({x.real - AffineForm(pr.hi), false});
  }
  commit(cons, env, ctx);
  if (use_float)
    x.float_iv = machine_preimage(x.float_iv, f.kf, x.format);
  if (use_real)
    x.real_iv = meet(x.real_range(ctx.ranges), RInterval(pr.lo, pr.hi), "real");
  x.refine(ctx.ranges);
  if (use_real) {
    const RInterval r = x.real_range(ctx.ranges);
    if (r.is_point() && ((pr.lo_open && r.lo() == pr.lo) || (pr.hi_open && r.lo() == pr.hi)))
      throw InfeasiblePath("real value on an excluded truncation boundary");
  }
}

const Decision &PathExplorer::replay(int site) {
  const Decision &d = trace_[cursor_];
  if (d.site != site)
    throw std::logic_error("path replay reached a different test site");
  ++cursor_;
  return d;
}

const Decision &PathExplorer::record(int site, std::vector<Flow> options) {
  trace_.resize(cursor_);
  trace_.push_back({site, std::move(options), 0});
  ++cursor_;
  return trace_.back();
}

bool PathExplorer::next_path() {
  trace_.resize(cursor_);
  while (!trace_.empty() && trace_.back().choice + 1 >= trace_.back().options.size())
    trace_.pop_back();
  cursor_ = 0;
  if (trace_.empty())
    return false;
  ++trace_.back().choice;
  return true;
}

} // namespace fldx
