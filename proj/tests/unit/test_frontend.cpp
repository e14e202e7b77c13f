#include "doctest.h"

#include "fldx/frontend/cfg.hpp"
#include "fldx/frontend/check.hpp"
#include "fldx/frontend/parser.hpp"
#include "fldx/frontend/printer.hpp"

#include <random>

using namespace fldx;

namespace {

const char *kInterpolate = R"(
double interpolate(double in, double y[], int n) {
  double out;
  int index = (int) in;
  if (index < 0 || index >= n-1)
    out = (index < 0) ? y[0] : y[n-1];
  else
    out = y[index] + (in - index) * (y[index+1] - y[index]);
  return out;
}
)";

Program parsed(const char *src) {
  Program p = parse_program(src);
  check_program(p);
  return p;
}

template <class F> const Stmt *find_stmt(const Program &p, F pred) {
  const Stmt *hit = nullptr;
  for (const auto &f : p.functions)
    walk_stmts(f.body, [&](const StmtPtr &s) {
      if (!hit && pred(*s))
        hit = s.get();
    });
  return hit;
}

Loc error_loc(const char *src) {
  try {
    Program p = parse_program(src);
    check_program(p);
  } catch (const FrontendError &e) {
    return e.loc();
  }
  FAIL("expected a frontend error");
  return {};
}

// Brute force: d dominates n iff n is unreachable from entry once d is removed.
bool brute_dominates(const Cfg &g, int root, int d, int n, bool reverse) {
  if (d == n)
    return true;
  std::vector<bool> seen(g.nodes.size(), false);
  std::vector<int> work{root};
  if (root == d)
    return true;
  seen[static_cast<std::size_t>(root)] = true;
  while (!work.empty()) {
    int v = work.back();
    work.pop_back();
    const auto &next = reverse ? g.nodes[static_cast<std::size_t>(v)].pred : g.nodes[static_cast<std::size_t>(v)].succ;
    for (int w : next) {
      if (w == d || seen[static_cast<std::size_t>(w)])
        continue;
      seen[static_cast<std::size_t>(w)] = true;
      work.push_back(w);
    }
  }
  return !seen[static_cast<std::size_t>(n)];
}

bool reaches(const Cfg &g, int from, int to, bool reverse) {
  std::vector<bool> seen(g.nodes.size(), false);
  std::vector<int> work{from};
  seen[static_cast<std::size_t>(from)] = true;
  while (!work.empty()) {
    int v = work.back();
    work.pop_back();
    if (v == to)
      return true;
    const auto &next = reverse ? g.nodes[static_cast<std::size_t>(v)].pred : g.nodes[static_cast<std::size_t>(v)].succ;
    for (int w : next)
      if (!seen[static_cast<std::size_t>(w)]) {
        seen[static_cast<std::size_t>(w)] = true;
        work.push_back(w);
      }
  }
  return false;
}

} // namespace

TEST_CASE("interpolation table parses with the cast on line 4") {
  Program p = parsed(kInterpolate);
  REQUIRE(p.functions.size() == 1);
  const Function &f = p.functions[0];
  CHECK(f.params[1].type.array == 0);
  const Stmt *decl = find_stmt(p, [](const Stmt &s) { return s.kind == StmtKind::Decl && s.name == "index"; });
  REQUIRE(decl);
  CHECK(decl->expr->kind == ExprKind::Cast);
  CHECK(decl->expr->loc.line == 4);
  CHECK(decl->expr->type.scalar == Scalar::Int);
  CHECK(decl->expr->args[0]->type.scalar == Scalar::Double);
}

TEST_CASE("annotation with binder and rational constant") {
  Program p = parsed("void f(void) { /*@ assert \\let x = 1/3; x < 1; */ }");
  const Stmt *a = find_stmt(p, [](const Stmt &s) { return s.kind == StmtKind::Assert; });
  REQUIRE(a);
  REQUIRE(a->pred->kind == PredKind::Let);
  CHECK(a->pred->names == std::vector<std::string>{"x"});
  const Term &bound = *a->pred->terms[0];
  CHECK(bound.kind == TermKind::Binary);
  CHECK(bound.op == BinOp::Div);
  const Pred &body = *a->pred->preds[0];
  CHECK(body.kind == PredKind::Rel);
  CHECK(body.terms[0]->kind == TermKind::Binder);
}

TEST_CASE("syntax errors carry their location") {
  Loc l = error_loc("int f(int a) {\n  if (\n}\n");
  CHECK(l.line == 3);
  CHECK(l.col == 1);
  CHECK(error_loc("int f(void) { return x; }").col == 22);
  CHECK(error_loc("void f(double x) { /*@ assert accuracy_assert_derr(x, 1); */ }").line == 1);
  CHECK(error_loc("void f(double x) { /*@ assert accuracy_nonsense(x) < 1; */ }").line == 1);
  CHECK(error_loc("void f(void) {\n  int a;\n  {\n    int a;\n  }\n}").line == 4);
  CHECK(error_loc("int f(int a) { return f(a); }").line == 1);
  CHECK(error_loc("int f(int a) { while (a > 0) { return 1; } return 0; }").line == 1);
  Program loop = parsed("void f(void) {\n  while (1) { }\n}");
  CHECK_THROWS_AS(build_cfg(loop.functions[0]), FrontendError);
}

TEST_CASE("multiple returns collapse to one exit") {
  Program p = parsed("int sgn(double x) { if (x < 0.0) { return -1; } else { return 1; } }");
  const auto &body = p.functions[0].body->body;
  REQUIRE(body.size() == 3);
  CHECK(body.front()->kind == StmtKind::Decl);
  CHECK(body.back()->kind == StmtKind::Return);
  int returns = 0;
  walk_stmts(p.functions[0].body, [&](const StmtPtr &s) { returns += s->kind == StmtKind::Return; });
  CHECK(returns == 1);
  CHECK(error_loc("int f(double x) { if (x < 0.0) { return 1; } }").line == 1);
}

TEST_CASE("print then parse is a fixpoint") {
  const char *src = R"(
double g = 1.5;
float h(float a, float b[3]) {
  float s = 0.0f;
  for (int i = 0; i < 3; i++) { s += b[i] * a; }
  do { s = s / 2.0f; } while (s > 1.0f);
  /*@ assert \let (lo, hi) = accuracy_get_ferr(s); lo <= 0 && (hi >= 0 || !(s < 1)) ==> accuracy_assert_ferr(s, -1, 1); */
  return -(-s) + (float)(int)g;
}
int main(void) {
  float arr[3] = {1.0f, 2.0f, 3.0f};
  float r = h(read_float(0, 1, 0, 0), arr);
  /*@ split 7 save(r) */
  if (r < 2.0f) r = r * 2.0f; else r = r - 1.0f;
  /*@ merge 7 merge(r) */
  /*@ assert 0 <= min(r, 3) <= \max(1, 2) && \true; */
  return 0;
}
)";
  Program p1 = parsed(src);
  std::string t1 = print_program(p1);
  Program p2 = parsed(t1.c_str());
  std::string t2 = print_program(p2);
  CHECK(t1 == t2);
  const Stmt *sec = find_stmt(p2, [](const Stmt &s) { return s.kind == StmtKind::Section; });
  REQUIRE(sec);
  CHECK(sec->section.id == 7);
  CHECK(sec->section.merge_list == std::vector<std::string>{"r"});
  CHECK(sec->body.size() == 1);
}

TEST_CASE("usual arithmetic conversions") {
  CHECK(arith_result(Scalar::Int, Scalar::Float) == Scalar::Float);
  CHECK(arith_result(Scalar::Float, Scalar::Double) == Scalar::Double);
  CHECK(arith_result(Scalar::Char, Scalar::Short) == Scalar::Int);
  CHECK(arith_result(Scalar::UInt, Scalar::Int) == Scalar::UInt);
  CHECK(arith_result(Scalar::UInt, Scalar::Long) == Scalar::Long);
}

TEST_CASE("dominance on the loop-after-branch program") {
  Program p = parsed(R"(
float f(float x) {
  int n = 0;
  if (2 * x + 3 < 0) { n = 10; }
  while (n > 0) { x = x * 0.5f; n = n - 1; }
  return x;
}
)");
  const Function &f = p.functions[0];
  Cfg g = build_cfg(f);
  DomTree dom = dominators(g);
  DomTree pdom = post_dominators(g);
  const Stmt *if_s = find_stmt(p, [](const Stmt &s) { return s.kind == StmtKind::If; });
  const Stmt *wh = find_stmt(p, [](const Stmt &s) { return s.kind == StmtKind::While; });
  int ni = g.own.at(if_s->id), nw = g.own.at(wh->id);
  CHECK(dom.strictly_dominates(ni, nw));
  CHECK(pdom.strictly_dominates(nw, ni));
  CHECK(!dom.dominates(nw, ni));
}

TEST_CASE("diamond: the join post-dominates the condition, branches do not dominate it") {
  Program p = parsed("int f(double x) { int r = 0; if (x < 1.0) { r = 1; } else { r = 2; } return r; }");
  Cfg g = build_cfg(p.functions[0]);
  DomTree dom = dominators(g);
  DomTree pdom = post_dominators(g);
  const Stmt *if_s = find_stmt(p, [](const Stmt &s) { return s.kind == StmtKind::If; });
  const Stmt *ret = find_stmt(p, [](const Stmt &s) { return s.kind == StmtKind::Return; });
  int c = g.own.at(if_s->id), join = g.own.at(ret->id);
  int t = g.first.at(if_s->then_s->id), e = g.first.at(if_s->else_s->id);
  CHECK(pdom.strictly_dominates(join, c));
  CHECK(!dom.dominates(t, join));
  CHECK(!dom.dominates(e, join));
  CHECK(dom.dominates(c, join));
}

TEST_CASE("straight-line code: each statement dominates its successors") {
  Program p = parsed("int f(int a) { int b = a; int c = b; int d = c; return d; }");
  Cfg g = build_cfg(p.functions[0]);
  DomTree dom = dominators(g);
  const auto &body = p.functions[0].body->body;
  for (std::size_t i = 0; i < body.size(); ++i)
    for (std::size_t j = i; j < body.size(); ++j)
      CHECK(dom.dominates(g.own.at(body[i]->id), g.own.at(body[j]->id)));
}

TEST_CASE("iterative dominance equals brute-force path enumeration on random graphs") {
  std::mt19937 rng(4242);
  for (int trial = 0; trial < 400; ++trial) {
    Cfg g;
    std::uniform_int_distribution<int> size(2, 8);
    const int n = size(rng);
    for (int i = 0; i < n; ++i)
      g.add(NodeKind::Simple, nullptr);
    g.entry = 0;
    g.exit = n - 1;
    std::uniform_int_distribution<int> pick(0, n - 1);
    std::uniform_int_distribution<int> count(0, 2 * n);
    for (int i = 0, m = count(rng); i < m; ++i) {
      int a = pick(rng), b = pick(rng);
      if (a != g.exit && b != g.entry)
        g.edge(a, b);
    }
    DomTree dom = dominators(g);
    DomTree pdom = post_dominators(g);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        if (reaches(g, g.entry, b, false) && reaches(g, g.entry, a, false))
          REQUIRE(dom.dominates(a, b) == brute_dominates(g, g.entry, a, b, false));
        if (reaches(g, g.exit, b, true) && reaches(g, g.exit, a, true))
          REQUIRE(pdom.dominates(a, b) == brute_dominates(g, g.exit, a, b, true));
      }
  }
}
