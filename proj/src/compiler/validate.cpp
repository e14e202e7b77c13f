#include "fldx/compiler/validate.hpp"

#include "fldx/frontend/parser.hpp"
#include "fldx/frontend/printer.hpp"

#include <algorithm>

namespace fldx {

namespace {

// Nodes reachable from `from` when `removed` is deleted from the graph.
std::vector<bool> reach_without(const Cfg &g, int from, int removed, bool reverse) {
  std::vector<bool> seen(g.nodes.size(), false);
  if (from == removed)
    return seen;
  std::vector<int> work{from};
  seen[static_cast<std::size_t>(from)] = true;
  while (!work.empty()) {
    int v = work.back();
    work.pop_back();
    const auto &next = reverse ? g.nodes[static_cast<std::size_t>(v)].pred : g.nodes[static_cast<std::size_t>(v)].succ;
    for (int w : next)
      if (w != removed && !seen[static_cast<std::size_t>(w)]) {
        seen[static_cast<std::size_t>(w)] = true;
        work.push_back(w);
      }
  }
  return seen;
}

std::map<int, int> section_ids(const Function &f) {
  std::map<int, int> ids;
  walk_stmts(f.body, [&](const StmtPtr &s) {
    if (s->kind == StmtKind::Section)
      ids[s->id] = s->section.id;
  });
  return ids;
}

class FunctionValidator {
public:
  FunctionValidator(const Program &p, const Function &f, const FunctionScope &scope, const Summaries &sums,
                    std::vector<Violation> &out)
      : p_(p), f_(f), scope_(scope), sums_(sums), out_(out), g_(build_cfg(f)) {}

  void run() {
    const std::size_t n = g_.nodes.size();
    acc_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const CfgNode &node = g_.nodes[i];
      if (node.kind == NodeKind::Simple || node.kind == NodeKind::Cond)
        acc_[i] = atom_access(*node.stmt, p_, sums_);
    }
    for (const auto &gl : p_.globals)
      acc_[static_cast<std::size_t>(g_.exit)].read.insert(gl->name);
    for (const auto &prm : f_.params)
      if (prm.type.is_array())
        acc_[static_cast<std::size_t>(g_.exit)].read.insert(prm.name);

    std::map<int, std::vector<bool>> members;
    for (const auto &node : g_.nodes) {
      if (node.kind != NodeKind::Split)
        continue;
      const Stmt &sec = *node.stmt;
      const int split = node.id, merge = g_.merge.at(sec.id);
      const int id = sec.section.id;
      auto from_entry = reach_without(g_, g_.entry, split, false);
      if (split == merge || from_entry[static_cast<std::size_t>(merge)])
        out_.push_back({id, 1, "split does not strictly dominate merge"});
      auto to_exit = reach_without(g_, split, merge, false);
      if (to_exit[static_cast<std::size_t>(g_.exit)])
        out_.push_back({id, 1, "merge does not strictly post-dominate split"});
      std::vector<bool> inside = reach_without(g_, split, merge, false);
      inside[static_cast<std::size_t>(split)] = false;
      members[id] = inside;
      for (const auto &v : sec.section.merge_list) {
        auto it = scope_.vars.find(v);
        if (it == scope_.vars.end() || !is_float(it->second.scalar))
          out_.push_back({id, 3, "merge list holds non floating-point '" + v + "'"});
      }
      integer_escapes(id, inside);
    }
    for (auto a = members.begin(); a != members.end(); ++a)
      for (auto b = std::next(a); b != members.end(); ++b) {
        bool meet = false, a_in_b = true, b_in_a = true;
        for (std::size_t i = 0; i < n; ++i) {
          bool x = a->second[i], y = b->second[i];
          meet |= x && y;
          a_in_b &= !x || y;
          b_in_a &= !y || x;
        }
        if (meet && !a_in_b && !b_in_a)
          out_.push_back({a->first, 0, "sections " + std::to_string(a->first) + " and " + std::to_string(b->first) +
                                           " overlap without nesting"});
      }
  }

private:
  void integer_escapes(int id, const std::vector<bool> &inside) {
    const std::size_t n = g_.nodes.size();
    std::set<std::string> reported;
    for (std::size_t w = 0; w < n; ++w) {
      if (!inside[w])
        continue;
      for (const auto &x : acc_[w].writes()) {
        auto it = scope_.vars.find(x);
        if (it == scope_.vars.end() || !is_integral(it->second.scalar) || reported.count(x))
          continue;
        std::vector<bool> seen(n, false);
        std::vector<int> work(g_.nodes[w].succ.begin(), g_.nodes[w].succ.end());
        bool escaped = false;
        while (!work.empty() && !escaped) {
          int v = work.back();
          work.pop_back();
          const auto vi = static_cast<std::size_t>(v);
          if (seen[vi])
            continue;
          seen[vi] = true;
          if (!inside[vi] && acc_[vi].read.count(x))
            escaped = true;
          if (acc_[vi].must_write.count(x))
            continue;
          for (int s : g_.nodes[vi].succ)
            work.push_back(s);
        }
        if (escaped) {
          reported.insert(x);
          out_.push_back({id, 3, "integer '" + x + "' written inside is read after the merge"});
        }
      }
    }
  }

  const Program &p_;
  const Function &f_;
  const FunctionScope &scope_;
  const Summaries &sums_;
  std::vector<Violation> &out_;
  Cfg g_;
  std::vector<Access> acc_;
};

} // namespace

std::vector<Violation> validate_sections(const Program &p, const ProgramInfo &info) {
  std::vector<Violation> out;
  Summaries sums = summarize(p, info.bottom_up);
  for (const auto &f : p.functions)
    FunctionValidator(p, f, info.scopes.at(f.name), sums, out).run();

  // Split and merge markers must land in one block of the printed program:
  // the parser rejects anything else.
  try {
    Program again = parse_program(print_program(p));
    std::vector<int> before, after;
    for (const auto &f : p.functions)
      for (const auto &[sid, id] : section_ids(f))
        before.push_back(id);
    for (const auto &f : again.functions)
      for (const auto &[sid, id] : section_ids(f))
        after.push_back(id);
    std::sort(before.begin(), before.end());
    std::sort(after.begin(), after.end());
    if (before != after)
      out.push_back({-1, 2, "printed program does not reproduce the sections"});
  } catch (const FrontendError &e) {
    out.push_back({-1, 2, std::string("printed program does not parse: ") + e.what()});
  }
  return out;
}

} // namespace fldx
