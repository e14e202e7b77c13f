#include "fldx/spec/kind.hpp"

namespace fldx {

namespace {

// Largest integer magnitude below which every integer is exact in the format.
Rational exact_int_limit(Scalar fl) { return Rational::power(2, fl == Scalar::Float ? 24 : 53); }

bool range_exact_in(const ZRange &r, Scalar fl) {
  if (!r.bounded())
    return false;
  const Rational lim = exact_int_limit(fl);
  return -lim <= *r.lo && *r.hi <= lim;
}

bool machine_exact_in(Scalar s, Scalar fl) { return range_exact_in(ZRange{int_min(s), int_max(s)}, fl); }

} // namespace

std::string SpecType::str() const {
  switch (tag) {
  case Tag::Machine: return to_string(scalar);
  case Tag::Integer: return "integer";
  case Tag::Float: return "float";
  case Tag::Double: return "double";
  case Tag::Rational: return "rational";
  }
  return "?";
}

bool subtype(const SpecType &a, const SpecType &b) {
  using T = SpecType::Tag;
  if (a == b || b.tag == T::Rational)
    return true;
  switch (a.tag) {
  case T::Machine:
    if (b.tag == T::Integer)
      return true;
    if (b.tag == T::Machine)
      return int_min(b.scalar) <= int_min(a.scalar) && int_max(a.scalar) <= int_max(b.scalar);
    if (b.tag == T::Float || b.tag == T::Double)
      return machine_exact_in(a.scalar, b.tag == T::Float ? Scalar::Float : Scalar::Double);
    return false;
  case T::Float: return b.tag == T::Double;
  default: return false;
  }
}

bool ZRange::contains(const ZRange &o) const {
  bool lo_ok = !lo || (o.lo && *lo <= *o.lo);
  bool hi_ok = !hi || (o.hi && *o.hi <= *hi);
  return lo_ok && hi_ok;
}

ZRange ZRange::hull(const ZRange &o) const {
  ZRange r;
  if (lo && o.lo)
    r.lo = min(*lo, *o.lo);
  if (hi && o.hi)
    r.hi = max(*hi, *o.hi);
  return r;
}

std::string ZRange::str() const {
  return "[" + (lo ? lo->str() : std::string("-inf")) + ", " + (hi ? hi->str() : std::string("+inf")) + "]";
}

std::string Kind::str() const {
  switch (tag) {
  case Tag::Z: return "Z" + range.str();
  case Tag::F: return "F " + to_string(fl);
  case Tag::Q: return "Q";
  }
  return "?";
}

bool operator==(const Kind &a, const Kind &b) {
  if (a.tag != b.tag)
    return false;
  if (a.tag == Kind::Tag::Z)
    return a.range == b.range;
  if (a.tag == Kind::Tag::F)
    return a.fl == b.fl;
  return true;
}

std::optional<Scalar> smallest_int_type(const ZRange &r) {
  if (!r.bounded())
    return std::nullopt;
  for (Scalar s : {Scalar::Int, Scalar::Long})
    if (int_min(s) <= *r.lo && *r.hi <= int_max(s))
      return s;
  return std::nullopt;
}

SpecType theta(const Kind &k) {
  switch (k.tag) {
  case Kind::Tag::Z:
    if (auto s = smallest_int_type(k.range))
      return SpecType::machine(*s);
    return SpecType::integer();
  case Kind::Tag::F: return k.fl == Scalar::Float ? SpecType::flt() : SpecType::dbl();
  case Kind::Tag::Q: return SpecType::rational();
  }
  return SpecType::rational();
}

bool kind_leq(const Kind &a, const Kind &b) {
  using T = Kind::Tag;
  if (b.tag == T::Q)
    return true;
  if (a.tag == T::Q)
    return false;
  if (a.tag == T::Z && b.tag == T::Z)
    return b.range.contains(a.range);
  if (a.tag == T::F && b.tag == T::F)
    return a.fl == b.fl || b.fl == Scalar::Double;
  if (a.tag == T::Z && b.tag == T::F) {
    auto t = smallest_int_type(a.range);
    return t && machine_exact_in(*t, b.fl);
  }
  return false;
}

Kind kind_join(const Kind &a, const Kind &b) {
  using T = Kind::Tag;
  if (a.tag == T::Q || b.tag == T::Q)
    return Kind::q();
  if (a.tag == T::Z && b.tag == T::Z)
    return Kind::z(a.range.hull(b.range));
  if (a.tag == T::F && b.tag == T::F)
    return Kind::f(a.fl == Scalar::Double || b.fl == Scalar::Double ? Scalar::Double : Scalar::Float);
  const Kind &z = a.tag == T::Z ? a : b;
  const Kind &f = a.tag == T::F ? a : b;
  if (kind_leq(z, f))
    return f;
  if (kind_leq(z, Kind::f(Scalar::Double)))
    return Kind::f(Scalar::Double);
  return Kind::q();
}

Kind kind_of_int_type(Scalar s) { return Kind::z(ZRange{int_min(s), int_max(s)}); }

} // namespace fldx
