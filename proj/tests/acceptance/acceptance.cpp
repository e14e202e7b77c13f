// One PASS/FAIL line per acceptance criterion. Exit status 1 if any fails.

#include "fldx/compiler/placement.hpp"
#include "fldx/compiler/validate.hpp"
#include "fldx/driver/bench.hpp"
#include "fldx/driver/pipeline.hpp"
#include "fldx/exec/decision.hpp"
#include "fldx/frontend/parser.hpp"
#include "fldx/spec/eval.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <thread>

using namespace fldx;

namespace {

using Clock = std::chrono::steady_clock;

Rational q(const char *s) { return Rational::parse(s); }

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string read_file(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw std::runtime_error("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string corpus_path(const std::string &name) { return std::string(FLDX_CORPUS_DIR) + "/" + name; }

// Collects failed checks of one criterion.
struct Checks {
  std::vector<std::string> failures;
  void operator()(bool ok, const std::string &what) {
    if (!ok)
      failures.push_back(what);
  }
};

struct Outcome {
  bool pass;
  std::string detail;
};

Outcome verdict(const Checks &c, const std::string &ok_detail) {
  if (c.failures.empty())
    return {true, ok_detail};
  std::string d;
  for (const auto &f : c.failures)
    d += (d.empty() ? "" : "; ") + f;
  return {false, d};
}

Outcome zonotope_vs_interval() {
  auto t0 = Clock::now();
  Checks c;
  SymbolTable table;
  SymbolRanges ranges;
  RInterval unit(q("0"), q("1"));
  AffineForm x = AffineForm::from_interval(unit, table, SymbolOrigin::Input);
  c(x.center() == q("0.5") && x.terms().size() == 1 && x.terms().begin()->second == q("0.5"), "x = 0.5 + 0.5 e1");
  AffineForm x2 = af_mul(x, x, table, ranges);
  c(unit * unit == unit, "interval x^2 = [0,1]");
  c(x2.concretize(ranges) == RInterval(q("-0.25"), q("1")), "zonotope x^2 = [-0.25,1]");
  c(unit - unit * unit == RInterval(q("-1"), q("1")), "interval x - x^2 = [-1,1]");
  c((x - x2).concretize(ranges) == RInterval(q("0"), q("0.25")), "zonotope x - x^2 = [0,0.25]");

  // Halving the input tightens the zonotope of x^2.
  RInterval lower_hull;
  for (const RInterval &half : {RInterval(q("0"), q("0.5")), RInterval(q("0.5"), q("1"))}) {
    SymbolTable t;
    SymbolRanges r;
    AffineForm h = AffineForm::from_interval(half, t, SymbolOrigin::Input);
    RInterval sq = af_mul(h, h, t, r).concretize(r);
    lower_hull = half.lo().sign() == 0 ? sq : lower_hull.join(sq);
  }
  c(lower_hull == RInterval(q("-0.0625"), q("1")), "subdivided zonotope x^2 = [-0.0625,1]");
  double s = since(t0);
  c(s < 1.0, "runtime under 1 s");
  return verdict(c, "x^2: [0,1] / [-0.25,1], x-x^2: [-1,1] / [0,0.25], halves: [-0.0625,1]");
}

// real = e0, err = 1e-7 e1, float = [-1, 1] in a decimal format where 1e-7
// is representable; compared against 0.
struct Guard {
  FloatFormat fmt = FloatFormat::custom(10, 16, -20, 20);
  SymbolTable table;
  SymbolRanges ranges;
  DomainContext ctx{table, ranges};
  AbstractFloat x, zero;
  int e0, e1;

  Guard() {
    e0 = table.fresh(SymbolOrigin::Input);
    e1 = table.fresh(SymbolOrigin::Input);
    x.format = fmt;
    x.real = AffineForm::symbol(e0, Rational(1));
    x.err = AffineForm::symbol(e1, q("1e-7"));
    x.float_iv = RInterval(q("-1"), q("1"));
    x.real_iv = RInterval(q("-1"), q("1"));
    x.err_iv = RInterval(q("-1e-7"), q("1e-7"));
    x.refine(ranges);
    zero = AbstractFloat::exact(Rational(0), fmt);
  }

  void apply(const Flow &f) { apply_compare(f, BinOp::Ge, x, zero, {&x, &zero}, Mode::Both, ctx); }

  // c + k * e_new, where e_new substitutes `replaced`.
  bool substituted(const AffineForm &f, const Rational &c, const Rational &k, int replaced) const {
    if (f.center() != c || f.terms().size() != 1)
      return false;
    const auto &[sym, coeff] = *f.terms().begin();
    const NoiseSymbol &info = table.info(sym);
    return coeff == k && info.substitution && info.substitution->replaced == replaced;
  }
};

Outcome constraint_propagation() {
  Checks c;
  Guard stable;
  stable.apply(Flow{true, true});
  c(stable.substituted(stable.x.real, q("0.5"), q("0.5"), stable.e0), "stable real = 0.5 + 0.5 e_d");
  c(stable.x.err == AffineForm::symbol(stable.e1, q("1e-7")), "stable err unchanged");
  c(stable.x.float_iv == RInterval(q("0"), q("1")), "stable float = [0,1]");

  Guard unstable;
  unstable.apply(Flow{true, false, Interp::AsFloat});
  c(unstable.substituted(unstable.x.real, q("-5e-8"), q("5e-8"), unstable.e0), "unstable real = -5e-8 + 5e-8 e_d0");
  c(unstable.substituted(unstable.x.err, q("5e-8"), q("5e-8"), unstable.e1), "unstable err = 5e-8 + 5e-8 e_d1");
  c(unstable.x.float_iv == RInterval(q("0"), q("1e-7")), "unstable float = [0,1e-7]");
  return verdict(c, "stable: 0.5+0.5e_d, [0,1]; unstable: -5e-8+5e-8e_d0, 5e-8+5e-8e_d1, [0,1e-7]");
}

struct Annotated {
  Program prog;
  ProgramInfo info;
  const Pred *pred = nullptr;
};

Annotated annotated(const std::string &src) {
  Annotated a;
  a.prog = parse_program(src);
  a.info = check_program(a.prog);
  walk_stmts(a.prog.functions[0].body, [&](const StmtPtr &s) {
    if (s->kind == StmtKind::Assert && !a.pred)
      a.pred = s->pred.get();
  });
  if (!a.pred)
    throw std::runtime_error("no assertion");
  return a;
}

Outcome annotation_typing() {
  Checks c;
  {
    Annotated a = annotated("int f(int x, int y) {\n"
                            "  /*@ assert x / (y + 79228162514264337593543950335) == 0; */\n"
                            "  return 0;\n}\n");
    TypedPred t = type_pred(*a.pred, a.info.scopes.at("f"));
    const Term &div = *a.pred->terms[0];
    const Term &sum = *div.args[1];
    c(t.at(sum).compute == SpecType::integer() && t.at(sum).carry == SpecType::integer(), "y + c computed in Z");
    c(t.at(div).compute == SpecType::integer(), "division computed in Z");
    c(t.at(div).carry == SpecType::machine(Scalar::Int), "division carried back as int");
    c(t.at(*div.args[0]).carry == SpecType::machine(Scalar::Int), "x stays int");
    c(t.comparisons.at(a.pred) == SpecType::machine(Scalar::Int), "== 0 decided at int");
  }
  {
    Annotated a = annotated("void h(double f, double g) { /*@ assert f - 0.1 <= g; */ }");
    TypedPred t = type_pred(*a.pred, a.info.scopes.at("h"));
    const Term &sub = *a.pred->terms[0];
    c(t.at(*sub.args[1]).kind == Kind::q(), "0.1 has kind Q");
    c(t.at(sub).compute == SpecType::rational(), "f - 0.1 computed in Q");
    c(t.comparisons.at(a.pred) == SpecType::rational(), "<= decided in Q");
  }
  {
    Annotated a = annotated("void h(double f) { /*@ assert f == 0.; */ }");
    TypedPred t = type_pred(*a.pred, a.info.scopes.at("h"));
    c(t.at(*a.pred->terms[1]).kind == Kind::f(Scalar::Double), "0. has kind double");
    c(t.comparisons.at(a.pred) == SpecType::dbl(), "== decided at double");
  }
  return verdict(c, "x/(y+c): int ~> Z, compared at int; f-0.1<=g at Q; f==0. at double");
}

int line_of(const std::string &src, const std::string &needle) {
  auto pos = src.find(needle);
  if (pos == std::string::npos)
    throw std::runtime_error("missing '" + needle + "'");
  return 1 + static_cast<int>(std::count(src.begin(), src.begin() + static_cast<long>(pos), '\n'));
}

const Function &function_named(const Program &p, const std::string &name) {
  for (const auto &f : p.functions)
    if (f.name == name)
      return f;
  throw std::runtime_error("no function " + name);
}

Outcome section_placement() {
  Checks c;
  using Strings = std::vector<std::string>;
  int checked = 0;
  auto place = [&](const std::string &file, const std::function<void(const Prepared &, const std::string &)> &f) {
    std::string src = read_file(corpus_path(file));
    Prepared p = prepare(src);
    c(validate_sections(p.program, p.info).empty(), file + ": independent checker accepts the sections");
    checked += static_cast<int>(p.compile.sections.size());
    f(p, src);
  };

  place("interpolate.c", [&](const Prepared &p, const std::string &src) {
    const auto &secs = p.compile.sections;
    c(secs.size() == 1, "interpolate.c: one section");
    if (secs.size() != 1)
      return;
    c(secs[0].function == "interpolate", "interpolate.c: section in interpolate");
    c(secs[0].split_loc.line == line_of(src, "int index = (int) in;"), "interpolate.c: split before the cast");
    c(secs[0].merge_loc.line == line_of(src, "return out;"), "interpolate.c: merge before the return");
    c(secs[0].merge_list == Strings{"out"}, "interpolate.c: merge list {out}");
  });
  place("bare_block.c", [&](const Prepared &p, const std::string &src) {
    const auto &secs = p.compile.sections;
    c(secs.size() == 1, "bare_block.c: one section");
    if (secs.size() != 1)
      return;
    c(secs[0].split_loc.line == line_of(src, "{ t = x * 2.0f;"), "bare_block.c: split before the block holding the if");
    c(secs[0].merge_loc.line == line_of(src, "return 0;"), "bare_block.c: merge before the return");
    const auto &body = function_named(p.program, "f").body->body;
    c(body.size() == 3 && body[1]->kind == StmtKind::Section && body[1]->body.size() == 1 &&
          body[1]->body[0]->kind == StmtKind::Block,
      "bare_block.c: the section wraps the whole block");
  });
  place("delayed_merge.c", [&](const Prepared &p, const std::string &src) {
    const auto &secs = p.compile.sections;
    c(secs.size() == 1, "delayed_merge.c: one section");
    if (secs.size() != 1)
      return;
    c(secs[0].split_loc.line == line_of(src, "if (2 * x + 3 < 0)"), "delayed_merge.c: split before the if");
    c(secs[0].merge_loc.line == line_of(src, "return x;"), "delayed_merge.c: merge after the while");
    c(secs[0].merge_list == Strings{"x"}, "delayed_merge.c: merge list {x}");
  });
  return verdict(c, std::to_string(checked) + " sections at the expected points, checker clean, merge list {out}");
}

Outcome soundness(const std::vector<BenchCase> &cases) {
  auto t0 = Clock::now();
  Checks c;
  BenchOptions opt;
  opt.samples = 1000;
  opt.timeout_seconds = 300;
  opt.jobs = std::max(1u, std::thread::hardware_concurrency());
  auto rows = run_bench(cases, opt);
  std::set<std::string> programs;
  long violations = 0, samples = 0;
  for (const auto &r : rows) {
    c(r.status == "ok", r.c.name + ": " + r.status);
    c(r.samples >= 1000, r.c.name + ": only " + std::to_string(r.samples) + " samples");
    if (r.violations)
      c(false, r.c.name + ": " + r.first_violation);
    violations += r.violations;
    samples += r.samples;
    programs.insert(r.c.path);
  }
  c(programs.size() >= 10, "fewer than 10 programs");
  double s = since(t0);
  c(s < 300, "runtime over 5 min");
  char buf[160];
  std::snprintf(buf, sizeof buf, "%zu programs, %zu scenarios, %ld samples, %ld violations, %.1f s", programs.size(),
                rows.size(), samples, violations, s);
  return verdict(c, buf);
}

Outcome desk_scale(const std::vector<BenchCase> &cases) {
  Checks c;
  BenchOptions opt;
  opt.samples = 0;
  std::map<std::string, BenchRow> rows;
  for (const auto &bc : cases) {
    auto t0 = Clock::now();
    BenchRow r = run_case(bc, opt);
    double s = since(t0);
    c(r.status == "ok", bc.name + ": " + r.status);
    c(s <= 30, bc.name + ": over 30 s");
    rows.emplace(bc.name, r);
    rows.emplace(bc.name + "/" + bc.scenario.label, r);
  }
  auto row = [&](const std::string &name) -> const BenchRow * {
    auto it = rows.find(name);
    if (it == rows.end()) {
      c(false, "missing case " + name);
      return nullptr;
    }
    return &it->second;
  };
  std::string detail;
  auto bound_in = [&](const std::string &name, const char *lo, const char *hi) {
    if (const BenchRow *r = row(name)) {
      bool ok = r->bound && q(lo) <= *r->bound && *r->bound <= q(hi);
      c(ok, name + " bound outside [" + lo + ", " + hi + "]");
      if (r->bound)
        detail += name + " " + r->bound->approx(3) + ", ";
    }
  };
  auto alarms = [&](const std::string &name, bool expect) {
    if (const BenchRow *r = row(name)) {
      c((r->alarms > 0) == expect, name + (expect ? ": no alarm" : ": unexpected alarm"));
      detail += name + (r->alarms ? " alarm, " : " no alarm, ");
    }
  };
  bound_in("absorption", "1e-9", "1e-7");
  bound_in("patriot", "1.9e-5", "1.9e-3");
  alarms("comp_disc", true);
  alarms("comp_disc_nested", true);
  alarms("interpolate/near -1", true);
  alarms("interpolate/mid-table", false);
  detail.resize(detail.size() - 2);
  return verdict(c, detail);
}

std::string independent_tests(int n) {
  std::string params, save, body;
  for (int i = 0; i < n; ++i) {
    std::string a = "a" + std::to_string(i);
    params += (i ? ", double " : "double ") + a;
    save += a + ", ";
    body += "  if (" + a + " >= 0.0) { s = s + 1.0; } else { s = s - 1.0; }\n";
  }
  return "double main(" + params + ") {\n  double s = 0.0;\n  /*@ split 1 save(" + save + "s) */\n" + body +
         "  /*@ merge 1 merge(s) */\n  return s;\n}\n";
}

ExecResult run_explicit(const std::string &src, const std::map<std::string, InputSpec> &in, bool trace) {
  Program p = parse_program(src);
  ProgramInfo info = check_program(p);
  ExecConfig cfg;
  cfg.trace = trace;
  return execute(p, info, in, cfg);
}

Outcome protocol() {
  Checks c;
  InputSpec thin{RInterval(q("-1"), q("1")), RInterval(q("0"))};
  std::string counts;
  for (int n = 1; n <= 6; ++n) {
    std::map<std::string, InputSpec> in;
    for (int i = 0; i < n; ++i)
      in["a" + std::to_string(i)] = thin;
    ExecResult r = run_explicit(independent_tests(n), in, false);
    const SectionStats &st = r.sections.at(1);
    c(r.completed && st.paths == (1 << n) && st.abandoned == 0,
      "n=" + std::to_string(n) + ": " + std::to_string(st.paths) + " paths");
    counts += (counts.empty() ? "" : ",") + std::to_string(st.paths);
  }

  ExecResult r = run_explicit(R"(double main(double a) {
  double r = 0.0;
  /*@ split 1 save(a, r) */
  if (a >= 0.0) {
    r = 1.0;
    /*@ split 2 save(a, r) */
    __assume(a < 0.0);
    r = 2.0;
    /*@ merge 2 merge(r) */
  } else {
    r = -1.0;
  }
  /*@ merge 1 merge(r) */
  return r;
}
)",
                              {{"a", thin}}, true);
  auto at = [&](const std::string &needle) {
    for (std::size_t i = 0; i < r.trace.size(); ++i)
      if (r.trace[i].find(needle) != std::string::npos)
        return static_cast<long>(i);
    return -1L;
  };
  long empty = at("section 2: no feasible path, leaving to the enclosing section");
  long outer = at("section 1: path 1 abandoned");
  c(empty >= 0 && outer == empty + 1, "empty inner section does not abandon the enclosing path in the trace");
  c(r.completed && r.result && r.result->float_iv == RInterval(Rational(-1)), "surviving path gives -1");
  return verdict(c, "paths " + counts + "; empty inner section abandons outer path 1");
}

// Brute force over the toy format: every value m * 10^k with m in 0..99.
Outcome toy_rounding() {
  Checks c;
  const FloatFormat toy = FloatFormat::toy();
  struct Rep {
    Rational v;
    long sig;
  };
  std::vector<Rep> reps;
  for (long k = toy.e_min - toy.p + 1; k <= toy.e_max - toy.p + 1; ++k)
    for (long m = 0; m < 100; ++m) {
      if (k > toy.e_min - toy.p + 1 && m < 10)
        continue;
      Rational v = Rational(BigInt(m)) * Rational::power(10, k);
      reps.push_back({v, m});
      if (m)
        reps.push_back({-v, m});
    }
  std::sort(reps.begin(), reps.end(), [](const Rep &a, const Rep &b) { return a.v < b.v; });
  auto brute = [&](const Rational &x) {
    const Rep *best = nullptr;
    Rational bd;
    for (const auto &r : reps) {
      Rational d = (x - r.v).abs();
      if (!best || d < bd || (d == bd && r.sig % 2 == 0 && best->sig % 2 != 0)) {
        best = &r;
        bd = d;
      }
    }
    return best->v;
  };
  std::vector<Rational> queries;
  const Rational nudge = q("1e-9");
  for (std::size_t i = 0; i < reps.size(); ++i) {
    queries.push_back(reps[i].v);
    if (i + 1 < reps.size()) {
      Rational mid = (reps[i].v + reps[i + 1].v) / Rational(2);
      queries.push_back(mid);
      queries.push_back(mid - nudge);
      queries.push_back(mid + nudge);
    }
  }
  long mismatches = 0;
  for (const auto &x : queries) {
    Rational got = round_nearest(x, toy).value();
    if (got != brute(x)) {
      if (!mismatches)
        c(false, "round(" + x.approx(12) + ") = " + got.approx(12));
      ++mismatches;
    }
  }
  c(round_nearest(q("31.41592653589793"), toy).value() == q("31"), "round(10 pi) = 31");
  c(round_nearest(Rational(BigInt(1), BigInt(3)), toy).value() == q("0.3"), "round(1/3) = 0.3");
  bool overflow = false;
  try {
    round_nearest(q("995"), toy);
  } catch (const OverflowError &) {
    overflow = true;
  }
  c(overflow, "round(995) overflows");
  return verdict(c, std::to_string(queries.size()) + " values and midpoints, 0 mismatches; round(10pi)=31, "
                                                      "round(1/3)=0.3");
}

} // namespace

int main() {
  std::vector<BenchCase> cases;
  try {
    cases = load_corpus(FLDX_CORPUS_DIR);
  } catch (const std::exception &e) {
    std::cerr << "cannot load corpus: " << e.what() << "\n";
    return 2;
  }
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"zonotope vs interval on x^2", zonotope_vs_interval},
      {"constraint propagation on x >= 0", constraint_propagation},
      {"annotation typing", annotation_typing},
      {"section placement", section_placement},
      {"soundness against the shadow oracle", [&] { return soundness(cases); }},
      {"desk-scale benchmarks", [&] { return desk_scale(cases); }},
      {"path exploration protocol", protocol},
      {"exhaustive toy rounding", toy_rounding},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception &e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::cout << "criterion " << i + 1 << " " << (o.pass ? "PASS" : "FAIL") << "  " << criteria[i].first << ": "
              << o.detail << std::endl;
  }
  return failed ? 1 : 0;
}
