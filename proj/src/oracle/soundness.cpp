#include "fldx/oracle/soundness.hpp"

#include <functional>
#include <set>

namespace fldx {

namespace {

Rational uniform(const RInterval &r, std::mt19937_64 &rng) {
  if (r.is_point())
    return r.lo();
  std::uniform_int_distribution<int> pick(0, 15);
  const int k = pick(rng);
  if (k == 0)
    return r.lo();
  if (k == 1)
    return r.hi();
  const std::uint64_t u = rng() >> 11;
  return r.lo() + r.width() * Rational(BigInt::from_string(std::to_string(u)), BigInt::from_string("9007199254740992"));
}

Rational clamp_representable(const Rational &x, const RInterval &r, const FloatFormat &fmt) {
  Rational m = round_nearest(x, fmt).value();
  if (m < r.lo())
    m = round_to(r.lo(), fmt, RoundingMode::Up);
  if (m > r.hi())
    m = round_to(r.hi(), fmt, RoundingMode::Down);
  return m;
}

std::set<std::pair<int, int>> asserts_in_sections(const Program &p) {
  std::set<std::pair<int, int>> out;
  std::function<void(const StmtPtr &, bool)> walk = [&](const StmtPtr &s, bool inside) {
    if (!s)
      return;
    inside = inside || s->kind == StmtKind::Section;
    if (s->kind == StmtKind::Assert && inside)
      out.insert({s->loc.line, s->loc.col});
    for (const auto &c : s->body)
      walk(c, inside);
    walk(s->then_s, inside);
    walk(s->else_s, inside);
  };
  for (const auto &f : p.functions)
    walk(f.body, false);
  return out;
}

std::string show(const ShadowValue &v) {
  return "machine " + v.machine.approx(17) + ", real " + v.real.approx(17) + ", err " + v.err().approx(6);
}

} // namespace

ConcreteInput sample_input(const InputSpec &spec, const FloatFormat &fmt, std::mt19937_64 &rng) {
  if (spec.err) {
    // Rounding the range outward can step past its ends; keep the machine
    // value inside when the range holds a representable value.
    Rational m = round_nearest(uniform(spec.value, rng), fmt).value();
    auto inner = round_inward(spec.value, fmt);
    if (inner)
      m = clamp_representable(m, spec.value, fmt);
    return {m, m - uniform(*spec.err, rng)};
  }
  Rational r = uniform(spec.value, rng);
  return {round_nearest(r, fmt).value(), r};
}

SoundnessReport check_soundness(const Program &p, const ProgramInfo &info,
                                const std::map<std::string, InputSpec> &inputs, const ExecResult &result,
                                const ExecConfig &cfg, int samples, std::uint64_t seed) {
  SoundnessReport rep;
  std::mt19937_64 rng(seed);
  const Function *entry = p.find(cfg.entry);
  if (!entry)
    return rep;
  const auto sectioned = asserts_in_sections(p);
  std::map<std::pair<int, int>, const AssertionRecord *> records;
  for (const auto &a : result.assertions)
    records[{a.loc.line, a.loc.col}] = &a;
  const bool float_result = fldx::is_float(entry->ret.scalar);

  for (int n = 0; n < samples; ++n) {
    ++rep.samples;
    std::map<std::string, ConcreteInput> concrete;
    for (const Param &pa : entry->params) {
      auto it = inputs.find(pa.name);
      if (it == inputs.end())
        continue;
      if (pa.type.is_float())
        concrete[pa.name] = sample_input(it->second, format_of(pa.type.scalar, cfg), rng);
      else
        concrete[pa.name] = {it->second.value.lo(), it->second.value.lo()};
    }
    DrawFn draw = [&](std::size_t, Scalar t, const RInterval &range, const RInterval &err) {
      return sample_input(InputSpec{range, err}, format_of(t, cfg), rng);
    };
    ShadowRun run = run_shadow(p, info, concrete, draw, cfg.format, cfg.entry);
    if (!run.error.empty()) {
      ++rep.failed_runs;
      continue;
    }
    for (const ShadowVisit &v : run.visits) {
      const std::pair<int, int> key{v.loc.line, v.loc.col};
      for (const auto &[name, val] : v.values) {
        Rational e = val.err().abs();
        auto [it, fresh] = rep.max_err.emplace(name, e);
        if (!fresh && e > it->second)
          it->second = e;
      }
      if (!v.agreed && sectioned.count(key))
        continue;
      auto rec = records.find(key);
      if (rec == records.end()) {
        rep.violations.push_back("sample " + std::to_string(n) + ": assertion " + v.loc.str() +
                                 " reached concretely but never analyzed");
        continue;
      }
      for (const auto &[name, b] : rec->second->values) {
        auto c = v.values.find(name);
        if (c == v.values.end())
          continue;
        ++rep.checks;
        const ShadowValue &x = c->second;
        if (!b.float_iv.contains(x.machine) || !b.real_iv.contains(x.real) || !b.err_iv.contains(x.err()))
          rep.violations.push_back("sample " + std::to_string(n) + ": " + name + " at " + v.loc.str() + " (" +
                                   show(x) + ") outside float " + b.float_iv.str() + ", real " + b.real_iv.str() +
                                   ", err " + b.err_iv.str());
      }
    }
    if (float_result && run.result) {
      ++rep.checks;
      const ShadowValue &x = *run.result;
      if (!result.result)
        rep.violations.push_back("sample " + std::to_string(n) + ": concrete result but no abstract result");
      else if (!result.result->float_iv.contains(x.machine) || !result.result->real_iv.contains(x.real) ||
               !result.result->err_iv.contains(x.err()))
        rep.violations.push_back("sample " + std::to_string(n) + ": result (" + show(x) + ") outside float " +
                                 result.result->float_iv.str() + ", real " + result.result->real_iv.str() +
                                 ", err " + result.result->err_iv.str());
    }
  }
  return rep;
}

} // namespace fldx
