#include "doctest.h"

#include "fldx/compiler/placement.hpp"
#include "fldx/compiler/validate.hpp"
#include "fldx/frontend/parser.hpp"
#include "fldx/frontend/printer.hpp"

#include <random>

using namespace fldx;

namespace {

struct Compiled {
  Program prog;
  ProgramInfo info;
  CompileResult result;
  std::vector<Violation> violations;
};

Compiled compile(const std::string &src) {
  Compiled c;
  c.prog = parse_program(src);
  c.info = check_program(c.prog);
  c.result = compile_sections(c.prog, c.info);
  c.info = check_program(c.prog);
  c.violations = validate_sections(c.prog, c.info);
  return c;
}

std::vector<const Stmt *> sections_of(const Function &f) {
  std::vector<const Stmt *> out;
  walk_stmts(f.body, [&](const StmtPtr &s) {
    if (s->kind == StmtKind::Section)
      out.push_back(s.get());
  });
  return out;
}

bool contains(const Stmt &s, const Stmt *t) {
  if (&s == t)
    return true;
  for (const auto &c : s.body)
    if (contains(*c, t))
      return true;
  for (const auto &c : {s.then_s, s.else_s})
    if (c && contains(*c, t))
      return true;
  return false;
}

using Strings = std::vector<std::string>;

const Stmt *stmt_at_line(const Function &f, int line, StmtKind kind) {
  const Stmt *hit = nullptr;
  walk_stmts(f.body, [&](const StmtPtr &s) {
    if (!hit && s->loc.line == line && s->kind == kind)
      hit = s.get();
  });
  return hit;
}

} // namespace

TEST_CASE("interpolation: one section from the cast to the return, merging out") {
  Compiled c = compile(R"(double interpolate(double in, double y[4], int n) {
  double out;
  int index = (int) in;
  if (index < 0 || index >= n-1)
    out = (index < 0) ? y[0] : y[n-1];
  else
    out = y[index] + (in - index) * (y[index+1] - y[index]);
  return out;
}
)");
  CHECK(c.violations.empty());
  CHECK(c.result.candidates == 1);
  REQUIRE(c.result.sections.size() == 1);
  const SectionRecord &r = c.result.sections[0];
  CHECK(r.split_loc.line == 3);
  CHECK(r.merge_loc.line == 8);
  CHECK(r.save_list.empty());
  CHECK(r.merge_list == Strings{"out"});
  const auto &body = c.prog.functions[0].body->body;
  REQUIRE(body.size() == 3);
  CHECK(body[1]->kind == StmtKind::Section);
  CHECK(body[1]->body.size() == 2);
  CHECK(body[2]->kind == StmtKind::Return);
}

TEST_CASE("a test inside a bare block hoists the section around the block") {
  Compiled c = compile(R"(int f(float x) {
  float t = 0.0f;
  { t = x * 2.0f;
    if (x < 0)
      { t = t + 1.0f; }
  }
  return 0;
}
)");
  CHECK(c.violations.empty());
  REQUIRE(c.result.sections.size() == 1);
  const auto &body = c.prog.functions[0].body->body;
  REQUIRE(body.size() == 3);
  REQUIRE(body[1]->kind == StmtKind::Section);
  REQUIRE(body[1]->body.size() == 1);
  CHECK(body[1]->body[0]->kind == StmtKind::Block);
  CHECK(c.result.sections[0].merge_loc.line == 7);
  // t is dead after the section.
  CHECK(c.result.sections[0].merge_list.empty());
}

TEST_CASE("an integer set under the test delays the merge past the loop that reads it") {
  const char *src = R"(float f(float x) {
  int n;
  if (2 * x + 3 < 0) { n = 10; } else { n = 0; }
  while (n > 0) { x = x * 0.5f; n = n - 1; }
  return x;
}
)";
  Program plain = parse_program(src);
  ProgramInfo info = check_program(plain);
  Summaries sums = summarize(plain, info.bottom_up);
  DepSets d = compute_dep_sets(plain.functions[0], plain, sums);
  const Function &f = plain.functions[0];
  const Stmt *if_s = stmt_at_line(f, 3, StmtKind::If);
  const Stmt *loop = stmt_at_line(f, 4, StmtKind::While);
  const Stmt *shrink = stmt_at_line(f, 4, StmtKind::Assign);
  REQUIRE(if_s);
  REQUIRE(loop);
  CHECK(d.mustdef.at(if_s->id).count("n"));
  CHECK(d.maydef.at(loop->id).count({"x", shrink->id}));
  CHECK(!d.mustdef.at(loop->id).count("x"));
  bool reads_x = false;
  for (const auto &[v, s] : d.mayref.at(if_s->id))
    reads_x |= v == "x" && s == if_s->id;
  CHECK(reads_x);

  Compiled c = compile(src);
  CHECK(c.violations.empty());
  REQUIRE(c.result.sections.size() == 1);
  const SectionRecord &r = c.result.sections[0];
  CHECK(r.split_loc.line == 3);
  CHECK(r.merge_loc.line == 5);
  CHECK(r.merge_list == Strings{"x"});
  CHECK(r.save_list == Strings{"x"});
}

TEST_CASE("sequence: data links a write to its read and the read is not a may-reference") {
  Program p = parse_program("void f(void) { int x; int y; { x = 2; y = x + 3; } }");
  ProgramInfo info = check_program(p);
  Summaries sums = summarize(p, info.bottom_up);
  const Function &f = p.functions[0];
  DepSets d = compute_dep_sets(f, p, sums);
  const Stmt &seq = *f.body->body[2];
  const Stmt &w = *seq.body[0], &r = *seq.body[1];
  CHECK(d.data.count({w.id, r.id, "x"}));
  for (const auto &[v, s] : d.mayref.at(seq.id))
    CHECK(v != "x");
  CHECK(d.mustdef.at(seq.id) == std::set<std::string>{"x", "y"});
}

TEST_CASE("candidates") {
  Program p = parse_program(R"(
int g(int k) { return k; }
int f(float x, int n, double d) {
  int a = (int) x;
  int b = 0;
  if (n > 0) { b = 1; }
  if (d) { b = 2; }
  b = g(d);
  a = d;
  return b;
}
)");
  check_program(p);
  auto cands = find_candidates(*p.find("f"), p);
  std::vector<int> lines;
  for (const auto &c : cands)
    lines.push_back(c.loc.line);
  CHECK(lines == std::vector<int>{4, 7, 8, 9});
}

TEST_CASE("no candidates: the program is unchanged") {
  const char *src = "int f(int a, int b) {\n  int c = a;\n  if (a < b) { c = b; }\n  return c;\n}\n";
  Program p = parse_program(src);
  std::string before = print_program(p);
  Compiled c = compile(src);
  CHECK(c.result.sections.empty());
  CHECK(print_program(c.prog) == before);
}

TEST_CASE("lists skip unmodified variables and dead writes") {
  Compiled c = compile(R"(double f(double x, double k) {
  double r = 0.0;
  double scratch = 0.0;
  if (x < k) { scratch = x; r = x * 2.0; } else { r = k; }
  return r;
}
)");
  REQUIRE(c.result.sections.size() == 1);
  const SectionRecord &s = c.result.sections[0];
  CHECK(s.save_list.empty());
  CHECK(s.merge_list == Strings{"r"});
}

TEST_CASE("nested tests give nested sections; a loop counter is not merged") {
  Compiled c = compile(R"(float f(float x, float y) {
  float s = 0.0f;
  int i = 0;
  while (i < 4) {
    if (x < y) {
      s = s + x;
      if (s > 10.0f) { s = 0.0f; }
    }
    x = x + 1.0f;
    i = i + 1;
  }
  return s;
}
)");
  CHECK(c.violations.empty());
  auto secs = sections_of(c.prog.functions[0]);
  REQUIRE(secs.size() == 2);
  // Pre-order: the outer section comes first and contains the inner one.
  CHECK(contains(*secs[0], secs[1]));
  CHECK(secs[0]->section.merge_list == Strings{"s"});
  CHECK(secs[0]->section.save_list == Strings{"s"});
}

TEST_CASE("random programs: every emitted section passes the independent checker") {
  std::mt19937 rng(2024);
  std::uniform_int_distribution<int> pick(0, 99);
  const char *floats[] = {"a", "b", "c"};
  const char *ints[] = {"i", "j", "k"};
  auto fv = [&] { return std::string(floats[pick(rng) % 3]); };
  auto iv = [&] { return std::string(ints[pick(rng) % 3]); };
  int counter = 0;
  std::function<std::string(int, int)> block = [&](int depth, int indent) -> std::string {
    std::string pad(static_cast<std::size_t>(indent), ' ');
    std::string out;
    int n = 1 + pick(rng) % 3;
    for (int s = 0; s < n; ++s) {
      int kind = depth <= 0 ? pick(rng) % 4 : pick(rng) % 9;
      switch (kind) {
      case 0: out += pad + fv() + " = " + fv() + " * 0.5f + " + fv() + ";\n"; break;
      case 1: out += pad + iv() + " = " + iv() + " + 1;\n"; break;
      case 2: out += pad + iv() + " = (int) " + fv() + ";\n"; break;
      case 3: out += pad + fv() + " = " + fv() + " - 1.0f;\n"; break;
      case 4:
      case 5: {
        std::string cond = pick(rng) % 2 ? fv() + " < " + fv() : iv() + " < " + iv();
        out += pad + "if (" + cond + ") {\n" + block(depth - 1, indent + 2) + pad + "}";
        if (pick(rng) % 2)
          out += " else {\n" + block(depth - 1, indent + 2) + pad + "}";
        out += "\n";
        break;
      }
      case 6: {
        std::string v = "w" + std::to_string(counter++);
        out += pad + "int " + v + " = 0;\n";
        out += pad + "while (" + v + " < 3) {\n" + block(depth - 1, indent + 2) + pad + "  " + v + " = " + v +
               " + 1;\n" + pad + "}\n";
        break;
      }
      case 7: out += pad + "{\n" + block(depth - 1, indent + 2) + pad + "}\n"; break;
      default:
        out += pad + "while (" + fv() + " < " + fv() + ") {\n" + block(depth - 1, indent + 2) + pad + "  " + fv() +
               " = " + fv() + " + 1.0f;\n" + pad + "}\n";
        break;
      }
    }
    return out;
  };
  int sections = 0, stuck = 0;
  for (int trial = 0; trial < 300; ++trial) {
    counter = 0;
    const bool int_result = pick(rng) % 3 == 0;
    std::string src = std::string(int_result ? "int" : "float") +
                      " f(float a, float b, float c, int i, int j, int k) {\n" + block(3, 2) + "  return " +
                      (int_result ? "i" : "a") + ";\n}\n";
    Compiled c;
    REQUIRE_NOTHROW(c = compile(src));
    sections += static_cast<int>(c.result.sections.size());
    bool warned = !c.result.warnings.empty();
    for (const auto &v : c.violations) {
      INFO(src);
      INFO(v.message);
      REQUIRE(v.criterion == 3);
      REQUIRE(warned);
    }
    stuck += warned;
    for (const auto &s : c.result.sections)
      for (const auto &m : s.merge_list)
        CHECK(m.size() == 1);
  }
  CHECK(sections > 300);
  MESSAGE("sections: " << sections << ", programs with placement warnings: " << stuck);
}
