#include "doctest.h"

#include "fldx/compiler/placement.hpp"
#include "fldx/exec/executor.hpp"
#include "fldx/frontend/parser.hpp"

#include <fstream>
#include <sstream>

using namespace fldx;

namespace {

Rational q(const char *s) { return Rational::parse(s); }

// real = eps0, err = 1e-7 * eps1, float = [-1, 1] in a decimal format where
// 1e-7 is representable.
struct GuardExample {
  FloatFormat fmt = FloatFormat::custom(10, 16, -20, 20);
  SymbolTable table;
  SymbolRanges ranges;
  DomainContext ctx{table, ranges};
  AbstractFloat x, zero;
  int e0 = -1, e1 = -1;

  GuardExample() {
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
};

// A form equal to c + k * eps_new where eps_new substitutes `replaced`.
bool substituted(const AffineForm &f, const Rational &c, const Rational &k, int replaced, const SymbolTable &t) {
  if (f.center() != c || f.terms().size() != 1)
    return false;
  const auto &[sym, coeff] = *f.terms().begin();
  const NoiseSymbol &info = t.info(sym);
  return coeff == k && info.substitution && info.substitution->replaced == replaced;
}

struct Run {
  Program prog;
  ProgramInfo info;
  CompileResult compiled;
  ExecResult result;
};

Run run(const std::string &src, const std::map<std::string, InputSpec> &inputs = {}, ExecConfig cfg = {},
        bool instrument = true) {
  Run r;
  r.prog = parse_program(src);
  r.info = check_program(r.prog);
  if (instrument) {
    r.compiled = compile_sections(r.prog, r.info);
    r.info = check_program(r.prog);
  }
  r.result = execute(r.prog, r.info, inputs, cfg);
  return r;
}

bool has_alarm(const ExecResult &r, AlarmKind k) {
  for (const auto &a : r.alarms)
    if (a.kind == k)
      return true;
  return false;
}

InputSpec thin(const char *lo, const char *hi, const char *elo, const char *ehi) {
  return {RInterval(q(lo), q(hi)), RInterval(q(elo), q(ehi))};
}

} // namespace

TEST_CASE("guard x >= 0: the stable true flow narrows eps0 to its upper half") {
  GuardExample g;
  g.apply(Flow{true, true});
  CHECK(substituted(g.x.real, q("0.5"), q("0.5"), g.e0, g.table));
  CHECK(g.x.err == AffineForm::symbol(g.e1, q("1e-7")));
  CHECK(g.x.float_iv == RInterval(q("0"), q("1")));
}

TEST_CASE("guard x >= 0: the unstable flow narrows both symbols") {
  GuardExample g;
  g.apply(Flow{true, false, Interp::AsFloat});
  CHECK(substituted(g.x.real, q("-5e-8"), q("5e-8"), g.e0, g.table));
  CHECK(substituted(g.x.err, q("5e-8"), q("5e-8"), g.e1, g.table));
  CHECK(g.x.float_iv == RInterval(q("0"), q("1e-7")));
}

TEST_CASE("guard x >= 0: all six flows are feasible, a singleton has one") {
  for (const Flow &f : compare_flows(Mode::Both)) {
    GuardExample g;
    CHECK_NOTHROW(g.apply(f));
  }
  int feasible = 0;
  for (const Flow &f : compare_flows(Mode::Both)) {
    GuardExample g;
    g.x = AbstractFloat::exact(q("0.25"), g.fmt);
    try {
      g.apply(f);
      ++feasible;
    } catch (const InfeasiblePath &) {
    }
  }
  CHECK(feasible == 1);
}

TEST_CASE("cast candidates") {
  SymbolTable t;
  SymbolRanges r;
  auto flows_of = [&](const char *lo, const char *hi) {
    AbstractFloat x = AbstractFloat::with_error(RInterval(q(lo), q(hi)), RInterval(Rational(0)),
                                                FloatFormat::binary64(), t);
    return cast_flows(x, Scalar::Int, Mode::Both, r);
  };
  auto single = flows_of("2.3", "2.7");
  REQUIRE(single.size() == 1);
  CHECK(single[0].kf == 2);
  auto two = flows_of("0.9", "1.1");
  REQUIRE(two.size() == 2);
  CHECK(two[0].kf == 0);
  CHECK(two[1].kf == 1);
  AbstractFloat big = AbstractFloat::exact(q("3e9"), FloatFormat::binary64());
  CHECK_THROWS_AS(cast_flows(big, Scalar::Int, Mode::Both, r), DomainAlarm);
}

TEST_CASE("constant program: one path, exact result") {
  Run r = run("double main(void) { double a = 0.5; double b = a * 4.0; return b - 1.0; }");
  REQUIRE(r.result.completed);
  REQUIRE(r.result.result);
  CHECK(r.result.result->float_iv == RInterval(Rational(1)));
  CHECK(r.result.result->err_iv == RInterval(Rational(0)));
  CHECK(r.result.alarms.empty());
}

namespace {

std::string corpus(const std::string &name) {
  std::ifstream in(std::string(FLDX_CORPUS_DIR) + "/" + name);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

} // namespace

TEST_CASE("interpolation at in = 0.5: the accuracy assertion holds") {
  Run r = run(corpus("interpolate.c"), {{"in", thin("0.5", "0.5", "-1e-9", "1e-9")}});
  CHECK(r.result.completed);
  CHECK(r.result.alarms.empty());
  REQUIRE(r.result.assertions.size() == 1);
  CHECK(r.result.assertions[0].verdict == Verdict::Valid);
}

TEST_CASE("interpolation at in = -1: the unstable cast is explored and the assertion fails") {
  Run r = run(corpus("interpolate.c"), {{"in", {RInterval(q("-1.0000001"), q("-0.9999999")), std::nullopt}}});
  CHECK(r.result.completed);
  CHECK(!r.result.alarms.empty());
  REQUIRE(r.result.assertions.size() == 1);
  CHECK(r.result.assertions[0].verdict != Verdict::Valid);
  const Bounds &out = r.result.assertions[0].values.at("out");
  // Both branch results: y[0] = 1 and 2*y[0] - y[1] = 0.
  CHECK(out.float_iv.contains(Rational(1)));
  CHECK(out.real_iv.contains(Rational(1)));
  CHECK(out.float_iv.lo() <= q("0.0000001"));
}

namespace {

// n independent tests on exact inputs inside one explicit section.
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

} // namespace

TEST_CASE("n independent stable tests explore exactly 2^n paths") {
  for (int n = 1; n <= 6; ++n) {
    std::map<std::string, InputSpec> in;
    for (int i = 0; i < n; ++i)
      in["a" + std::to_string(i)] = thin("-1", "1", "0", "0");
    Run r = run(independent_tests(n), in, {}, false);
    REQUIRE(r.result.completed);
    const SectionStats &st = r.result.sections.at(1);
    CHECK(st.paths == (1 << n));
    CHECK(st.abandoned == 0);
    CHECK(st.divergent == 0);
    CHECK(r.result.result->float_iv == RInterval(Rational(-n), Rational(n)));
  }
}

TEST_CASE("an inner section with no feasible path abandons the enclosing path") {
  const char *src = R"(double main(double a) {
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
)";
  ExecConfig cfg;
  cfg.trace = true;
  Run r = run(src, {{"a", thin("-1", "1", "0", "0")}}, cfg, false);
  REQUIRE(r.result.completed);
  CHECK(r.result.sections.at(1).paths == 2);
  CHECK(r.result.sections.at(1).abandoned == 1);
  CHECK(r.result.sections.at(2).abandoned == 1);
  CHECK(r.result.result->float_iv == RInterval(Rational(-1)));
  auto at = [&](const std::string &needle) {
    for (std::size_t i = 0; i < r.result.trace.size(); ++i)
      if (r.result.trace[i].find(needle) != std::string::npos)
        return static_cast<long>(i);
    return -1L;
  };
  long empty = at("section 2: no feasible path, leaving to the enclosing section");
  long outer = at("section 1: path 1 abandoned");
  REQUIRE(empty >= 0);
  CHECK(outer == empty + 1);
}

TEST_CASE("a top-level section with no feasible path raises no-feasible-execution") {
  const char *src = R"(double main(double a) {
  double r = 0.0;
  /*@ split 1 save(a, r) */
  __assume(a > 2.0);
  r = a;
  /*@ merge 1 merge(r) */
  return r;
}
)";
  Run r = run(src, {{"a", thin("-1", "1", "0", "0")}}, {}, false);
  CHECK(!r.result.completed);
  CHECK(has_alarm(r.result, AlarmKind::NoFeasibleExecution));
}

TEST_CASE("every path starts from the split state of the saved variables") {
  // Each path increments the saved counter once; a leak between paths
  // would show up as a larger value.
  const char *src = R"(double main(double a, double b) {
  double k = 10.0;
  double r = 0.0;
  /*@ split 1 save(a, b, k, r) */
  k = k + 1.0;
  if (a >= 0.0) { r = k; } else { r = k + 100.0; }
  if (b >= 0.0) { r = r + k; } else { r = r - k; }
  /*@ merge 1 merge(r, k) */
  return r;
}
)";
  Run r = run(src, {{"a", thin("-1", "1", "0", "0")}, {"b", thin("-1", "1", "0", "0")}}, {}, false);
  REQUIRE(r.result.completed);
  CHECK(r.result.sections.at(1).paths == 4);
  CHECK(r.result.finals.at("k").float_iv == RInterval(Rational(11)));
  // Paths give 22, 0, 122, 100.
  CHECK(r.result.result->float_iv == RInterval(Rational(0), Rational(122)));
}

TEST_CASE("two paths writing [0,1] and [2,3] merge to the hull [0,3]") {
  const char *src = R"(double main(double a, double u) {
  double out = 0.0;
  /*@ split 1 save(a, u, out) */
  if (a >= 0.0) { out = u; } else { out = u + 2.0; }
  /*@ merge 1 merge(out) */
  return out;
}
)";
  Run r = run(src, {{"a", thin("-1", "1", "0", "0")}, {"u", thin("0", "1", "0", "0")}}, {}, false);
  REQUIRE(r.result.completed);
  CHECK(r.result.result->float_iv == RInterval(Rational(0), Rational(3)));
}

TEST_CASE("a cast over [0.9, 1.1] covers the concrete results at 0.95 and 1.05") {
  const char *src = R"(double main(double x) {
  int k = (int)x;
  double r = k * 10.0 + x;
  return r;
}
)";
  Run r = run(src, {{"x", thin("0.9", "1.1", "0", "0")}});
  REQUIRE(r.result.completed);
  CHECK(r.result.alarms.empty());
  const Bounds &b = *r.result.result;
  // Concrete runs: (int)0.95 = 0 gives 0.95, (int)1.05 = 1 gives 11.05.
  for (const char *v : {"0.95", "11.05"}) {
    CHECK(b.float_iv.contains(q(v)));
    CHECK(b.real_iv.contains(q(v)));
  }
}

TEST_CASE("nested sections: inner exploration restarts for every outer path") {
  const char *src = R"(double main(double a, double b, double c) {
  double r = 0.0;
  /*@ split 1 save(a, b, c, r) */
  if (a >= 0.0) { r = 1.0; } else { r = 2.0; }
  /*@ split 2 save(b, c, r) */
  if (b >= 0.0) { r = r * 3.0; } else { r = r * 5.0; }
  if (c >= 0.0) { r = r + 1.0; } else { r = r - 1.0; }
  /*@ merge 2 merge(r) */
  /*@ merge 1 merge(r) */
  return r;
}
)";
  std::map<std::string, InputSpec> in;
  for (const char *v : {"a", "b", "c"})
    in[v] = thin("-1", "1", "0", "0");
  Run r = run(src, in, {}, false);
  REQUIRE(r.result.completed);
  CHECK(r.result.sections.at(1).paths == 2);
  CHECK(r.result.sections.at(2).executions == 2);
  CHECK(r.result.sections.at(2).paths == 8);
  CHECK(r.result.result->float_iv == RInterval(Rational(2), Rational(11)));
}

TEST_CASE("the path budget stops exploration with a warning") {
  std::map<std::string, InputSpec> in;
  for (int i = 0; i < 4; ++i)
    in["a" + std::to_string(i)] = thin("-1", "1", "0", "0");
  ExecConfig cfg;
  cfg.path_budget = 5;
  Run r = run(independent_tests(4), in, cfg, false);
  REQUIRE(r.result.completed);
  CHECK(r.result.sections.at(1).paths == 5);
  CHECK(r.result.sections.at(1).budget_hit);
  CHECK(r.result.warnings.size() == 1);
}
