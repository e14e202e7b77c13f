#include "fldx/domain/affine_form.hpp"

#include <algorithm>
#include <sstream>

namespace fldx {

std::string to_string(SymbolOrigin o) {
  switch (o) {
  case SymbolOrigin::Input: return "input";
  case SymbolOrigin::Rounding: return "rounding";
  case SymbolOrigin::Nonlinear: return "nonlinear";
  case SymbolOrigin::Constraint: return "constraint";
  case SymbolOrigin::Merge: return "merge";
  case SymbolOrigin::Condense: return "condense";
  }
  return "?";
}

int SymbolTable::fresh(SymbolOrigin origin) {
  int id = static_cast<int>(symbols_.size());
  symbols_.push_back({id, origin, std::nullopt});
  return id;
}

int SymbolTable::fresh_substitute(int replaced, const Rational &mid, const Rational &rad) {
  int id = static_cast<int>(symbols_.size());
  symbols_.push_back({id, SymbolOrigin::Constraint, Substitution{replaced, mid, rad}});
  return id;
}

const RInterval &SymbolRanges::unit() {
  static const RInterval u(Rational(-1), Rational(1));
  return u;
}

const RInterval &SymbolRanges::range(int id) const {
  auto it = ranges_.find(id);
  return it == ranges_.end() ? unit() : it->second;
}

void SymbolRanges::set(int id, const RInterval &r) {
  if (r == unit())
    ranges_.erase(id);
  else
    ranges_[id] = r;
}

SymbolRanges SymbolRanges::join(const SymbolRanges &o) const {
  SymbolRanges out;
  for (const auto &[id, r] : ranges_) {
    auto it = o.ranges_.find(id);
    if (it != o.ranges_.end())
      out.set(id, r.join(it->second));
  }
  return out;
}

std::optional<SymbolRanges> SymbolRanges::meet(const SymbolRanges &o) const {
  SymbolRanges out = *this;
  for (const auto &[id, r] : o.ranges_) {
    auto m = out.range(id).meet(r);
    if (!m)
      return std::nullopt;
    out.set(id, *m);
  }
  return out;
}

AffineForm AffineForm::symbol(int sym, const Rational &coeff, const Rational &center) {
  AffineForm f(center);
  f.add_term(sym, coeff);
  return f;
}

AffineForm AffineForm::from_interval(const RInterval &iv, SymbolTable &table, SymbolOrigin origin) {
  if (iv.is_point())
    return AffineForm(iv.lo());
  return symbol(table.fresh(origin), iv.rad(), iv.mid());
}

Rational AffineForm::coeff(int sym) const {
  auto it = terms_.find(sym);
  return it == terms_.end() ? Rational(0) : it->second;
}

void AffineForm::add_term(int sym, const Rational &c) {
  if (c.is_zero())
    return;
  auto [it, inserted] = terms_.try_emplace(sym, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero())
      terms_.erase(it);
  }
}

RInterval AffineForm::deviation(const SymbolRanges &ranges) const {
  Rational lo(0), hi(0);
  for (const auto &[sym, c] : terms_) {
    const RInterval &r = ranges.range(sym);
    if (c.sign() > 0) {
      lo += c * r.lo();
      hi += c * r.hi();
    } else {
      lo += c * r.hi();
      hi += c * r.lo();
    }
  }
  return {lo, hi};
}

RInterval AffineForm::concretize(const SymbolRanges &ranges) const {
  RInterval d = deviation(ranges);
  return {center_ + d.lo(), center_ + d.hi()};
}

AffineForm AffineForm::operator-() const { return Rational(-1) * *this; }

AffineForm &AffineForm::operator+=(const AffineForm &b) {
  center_ += b.center_;
  for (const auto &[sym, c] : b.terms_)
    add_term(sym, c);
  return *this;
}

AffineForm operator+(const AffineForm &a, const AffineForm &b) {
  AffineForm r = a;
  r += b;
  return r;
}

AffineForm operator-(const AffineForm &a, const AffineForm &b) {
  AffineForm r = a;
  r += -b;
  return r;
}

AffineForm operator*(const Rational &k, const AffineForm &a) {
  AffineForm r;
  if (k.is_zero())
    return r;
  r.center_ = k * a.center_;
  for (const auto &[sym, c] : a.terms_)
    r.terms_.emplace(sym, k * c);
  return r;
}

AffineForm AffineForm::substitute(int sym, const Rational &mid, const Rational &rad, int new_sym) const {
  auto it = terms_.find(sym);
  if (it == terms_.end())
    return *this;
  AffineForm r = *this;
  Rational c = it->second;
  r.terms_.erase(sym);
  r.center_ += c * mid;
  r.add_term(new_sym, c * rad);
  return r;
}

std::string AffineForm::str() const {
  std::ostringstream os;
  os << center_.str();
  for (const auto &[sym, c] : terms_)
    os << (c.sign() < 0 ? " - " : " + ") << c.abs().str() << "*e" << sym;
  return os.str();
}

AffineForm af_linear(LinearOp op, const AffineForm &a, const AffineForm &b) {
  return op == LinearOp::Add ? a + b : a - b;
}

AffineForm af_scale(const Rational &k, const AffineForm &a) { return k * a; }

namespace {

RInterval square(const RInterval &r) {
  Rational l2 = r.lo() * r.lo();
  Rational h2 = r.hi() * r.hi();
  Rational top = max(l2, h2);
  if (r.contains_zero())
    return {Rational(0), top};
  return {min(l2, h2), top};
}

} // namespace

AffineForm af_mul(const AffineForm &a, const AffineForm &b, SymbolTable &table, const SymbolRanges &ranges) {
  if (a.is_constant())
    return a.center() * b;
  if (b.is_constant())
    return b.center() * a;

  AffineForm out = a.center() * b + b.center() * a;
  out += AffineForm(-(a.center() * b.center()));

  // Quadratic remainder sum_{i,j} a_i b_j eps_i eps_j, grouped per unordered
  // symbol pair so that shared symbols are bounded jointly.
  std::map<std::pair<int, int>, Rational> cross;
  Rational lo(0), hi(0);
  for (const auto &[i, ai] : a.terms()) {
    for (const auto &[j, bj] : b.terms()) {
      Rational c = ai * bj;
      if (i == j) {
        RInterval q = c * square(ranges.range(i));
        lo += q.lo();
        hi += q.hi();
      } else {
        cross[{std::min(i, j), std::max(i, j)}] += c;
      }
    }
  }
  for (const auto &[pair, c] : cross) {
    if (c.is_zero())
      continue;
    RInterval q = c * (ranges.range(pair.first) * ranges.range(pair.second));
    lo += q.lo();
    hi += q.hi();
  }
  out += AffineForm::from_interval(RInterval(lo, hi), table, SymbolOrigin::Nonlinear);
  return out;
}

AffineForm af_inverse(const AffineForm &a, const RInterval &hint, SymbolTable &table) {
  if (hint.contains_zero())
    throw NumericError("inverse over " + hint.str() + " which contains zero");
  if (a.is_constant())
    return AffineForm(Rational(1) / a.center());
  if (hint.hi().sign() < 0)
    return -af_inverse(-a, -hint, table);
  const Rational &l = hint.lo();
  const Rational &u = hint.hi();
  // 1/t = alpha*t + d(t) with alpha = -1/u^2; d decreases on [l, u].
  Rational alpha = -(Rational(1) / (u * u));
  Rational d_hi = Rational(1) / l + l / (u * u);
  Rational d_lo = Rational(2) / u;
  AffineForm out = alpha * a;
  out += AffineForm::from_interval(RInterval(d_lo, d_hi), table, SymbolOrigin::Nonlinear);
  return out;
}

AffineForm condense(const AffineForm &a, std::size_t max_syms, SymbolTable &table, const SymbolRanges &ranges) {
  if (max_syms == 0)
    throw NumericError("condense requires max_syms >= 1");
  if (a.terms().size() <= max_syms)
    return a;
  std::vector<std::pair<Rational, int>> weight;
  weight.reserve(a.terms().size());
  for (const auto &[sym, c] : a.terms())
    weight.emplace_back(c.abs() * ranges.range(sym).mag(), sym);
  std::sort(weight.begin(), weight.end(),
            [](const auto &x, const auto &y) { return x.first < y.first || (x.first == y.first && x.second < y.second); });
  const std::size_t fold = a.terms().size() - max_syms + 1;
  AffineForm out(a.center());
  Rational lo(0), hi(0);
  for (std::size_t k = 0; k < weight.size(); ++k) {
    int sym = weight[k].second;
    Rational c = a.coeff(sym);
    if (k < fold) {
      RInterval t = c * ranges.range(sym);
      lo += t.lo();
      hi += t.hi();
    } else {
      out += AffineForm::symbol(sym, c);
    }
  }
  out += AffineForm::from_interval(RInterval(lo, hi), table, SymbolOrigin::Condense);
  return out;
}

} // namespace fldx
