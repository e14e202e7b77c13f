#include "fldx/compiler/deps.hpp"

#include <algorithm>

namespace fldx {

std::set<std::string> Access::writes() const {
  std::set<std::string> w = must_write;
  w.insert(may_write.begin(), may_write.end());
  return w;
}

namespace {

bool is_atom(const Stmt &s) { return s.kind != StmtKind::Block && s.kind != StmtKind::Section; }

void call_effects(const Expr &call, Access &a, const Program &p, const Summaries &sums) {
  auto it = sums.find(call.name);
  if (it == sums.end())
    return;
  auto resolve = [&](const std::string &v) -> std::optional<std::string> {
    if (v.empty() || v[0] != '#')
      return v;
    std::size_t k = std::stoul(v.substr(1));
    if (k < call.args.size() && call.args[k]->kind == ExprKind::Var)
      return call.args[k]->name;
    return std::nullopt;
  };
  (void)p;
  for (const auto &r : it->second.reads)
    if (auto v = resolve(r))
      a.read.insert(*v);
  for (const auto &w : it->second.writes)
    if (auto v = resolve(w)) {
      a.may_write.insert(*v);
      if (w[0] == '#')
        a.dynamic_cells.insert(*v);
    }
}

void expr_reads(const ExprPtr &e, Access &a, const Program &p, const Summaries &sums) {
  walk_exprs(e, [&](const ExprPtr &x) {
    if (x->kind == ExprKind::Var || x->kind == ExprKind::Index)
      a.read.insert(x->name);
    else if (x->kind == ExprKind::Call)
      call_effects(*x, a, p, sums);
  });
}

void term_reads(const TermPtr &t, Access &a) {
  if (!t)
    return;
  if (t->kind == TermKind::LVal)
    a.read.insert(t->name);
  for (const auto &c : t->args)
    term_reads(c, a);
}

void pred_access(const Pred &q, Access &a) {
  for (const auto &t : q.terms)
    term_reads(t, a);
  if (q.kind == PredKind::Builtin && q.name.starts_with("accuracy_enlarge_") && !q.terms.empty())
    a.may_write.insert(q.terms[0]->name);
  for (const auto &c : q.preds)
    pred_access(*c, a);
}

} // namespace

Access atom_access(const Stmt &s, const Program &p, const Summaries &sums) {
  Access a;
  switch (s.kind) {
  case StmtKind::Decl:
    a.must_write.insert(s.name);
    if (s.expr)
      expr_reads(s.expr, a, p, sums);
    for (const auto &e : s.init_list)
      expr_reads(e, a, p, sums);
    break;
  case StmtKind::Assign: {
    const Expr &t = *s.target;
    if (t.kind == ExprKind::Var) {
      a.must_write.insert(t.name);
    } else {
      a.may_write.insert(t.name);
      expr_reads(t.args[0], a, p, sums);
      if (t.args[0]->kind != ExprKind::IntLit)
        a.dynamic_cells.insert(t.name);
    }
    if (s.compound)
      a.read.insert(t.name);
    expr_reads(s.expr, a, p, sums);
    break;
  }
  case StmtKind::Call:
  case StmtKind::Return:
  case StmtKind::If:
  case StmtKind::While:
  case StmtKind::DoWhile:
    if (s.expr)
      expr_reads(s.expr, a, p, sums);
    break;
  case StmtKind::Assert: pred_access(*s.pred, a); break;
  case StmtKind::Block:
  case StmtKind::Section: break;
  }
  return a;
}

Summaries summarize(const Program &p, const std::vector<std::string> &bottom_up) {
  Summaries sums;
  std::set<std::string> globals;
  for (const auto &g : p.globals)
    globals.insert(g->name);
  for (const auto &name : bottom_up) {
    const Function *f = p.find(name);
    if (!f)
      continue;
    std::map<std::string, std::string> visible;
    for (const auto &g : globals)
      visible[g] = g;
    for (std::size_t k = 0; k < f->params.size(); ++k)
      if (f->params[k].type.is_array())
        visible[f->params[k].name] = "#" + std::to_string(k);
    Summary s;
    walk_stmts(f->body, [&](const StmtPtr &st) {
      if (!is_atom(*st))
        return;
      Access a = atom_access(*st, p, sums);
      for (const auto &r : a.read)
        if (auto it = visible.find(r); it != visible.end())
          s.reads.insert(it->second);
      for (const auto &w : a.writes())
        if (auto it = visible.find(w); it != visible.end())
          s.writes.insert(it->second);
    });
    sums[name] = s;
  }
  return sums;
}

namespace {

class DepBuilder {
public:
  DepBuilder(const Program &p, const Summaries &sums, DepSets &d) : p_(p), sums_(sums), d_(d) {}

  void stmt(const Stmt &s) {
    std::set<std::string> must;
    std::set<std::pair<std::string, int>> maydef, mayref;
    std::set<int> atoms;
    std::set<std::string> dyn;
    auto absorb = [&](const Stmt &c) {
      stmt(c);
      const auto &md = d_.maydef[c.id];
      maydef.insert(md.begin(), md.end());
      const auto &at = d_.atoms[c.id];
      atoms.insert(at.begin(), at.end());
      const auto &dc = d_.dynamic_cells[c.id];
      dyn.insert(dc.begin(), dc.end());
    };
    if (is_atom(s)) {
      Access a = atom_access(s, p_, sums_);
      atoms.insert(s.id);
      for (const auto &w : a.writes())
        maydef.insert({w, s.id});
      for (const auto &r : a.read)
        mayref.insert({r, s.id});
      dyn = a.dynamic_cells;
      if (s.kind != StmtKind::If && s.kind != StmtKind::While && s.kind != StmtKind::DoWhile)
        must = a.must_write;
    }
    switch (s.kind) {
    case StmtKind::Block:
    case StmtKind::Section: {
      std::vector<const Stmt *> seq;
      for (const auto &c : s.body) {
        absorb(*c);
        seq.push_back(c.get());
      }
      must = seq_mustdef(seq, d_);
      mayref = seq_mayref(seq, d_);
      break;
    }
    case StmtKind::If: {
      absorb(*s.then_s);
      const auto &rt = d_.mayref[s.then_s->id];
      mayref.insert(rt.begin(), rt.end());
      if (s.else_s) {
        absorb(*s.else_s);
        const auto &re = d_.mayref[s.else_s->id];
        mayref.insert(re.begin(), re.end());
        const auto &mt = d_.mustdef[s.then_s->id];
        const auto &me = d_.mustdef[s.else_s->id];
        std::set_intersection(mt.begin(), mt.end(), me.begin(), me.end(), std::inserter(must, must.end()));
      }
      break;
    }
    case StmtKind::While: {
      absorb(*s.then_s);
      const auto &rb = d_.mayref[s.then_s->id];
      mayref.insert(rb.begin(), rb.end());
      break;
    }
    case StmtKind::DoWhile: {
      // The body runs before the condition is read.
      std::set<std::pair<std::string, int>> cond_reads = mayref;
      mayref.clear();
      absorb(*s.then_s);
      const auto &rb = d_.mayref[s.then_s->id];
      mayref.insert(rb.begin(), rb.end());
      must = d_.mustdef[s.then_s->id];
      for (const auto &r : cond_reads)
        if (!must.count(r.first))
          mayref.insert(r);
      break;
    }
    default: break;
    }
    d_.mustdef[s.id] = std::move(must);
    d_.maydef[s.id] = std::move(maydef);
    d_.mayref[s.id] = std::move(mayref);
    d_.atoms[s.id] = std::move(atoms);
    d_.dynamic_cells[s.id] = std::move(dyn);
  }

private:
  const Program &p_;
  const Summaries &sums_;
  DepSets &d_;
};

using Def = std::pair<int, std::string>;

} // namespace

std::set<std::string> seq_mustdef(const std::vector<const Stmt *> &seq, const DepSets &d) {
  std::set<std::string> must;
  for (const Stmt *s : seq) {
    const auto &m = d.mustdef.at(s->id);
    must.insert(m.begin(), m.end());
  }
  return must;
}

std::set<std::pair<std::string, int>> seq_mayref(const std::vector<const Stmt *> &seq, const DepSets &d) {
  std::set<std::pair<std::string, int>> out;
  std::set<std::string> written;
  for (const Stmt *s : seq) {
    for (const auto &r : d.mayref.at(s->id))
      if (!written.count(r.first))
        out.insert(r);
    const auto &m = d.mustdef.at(s->id);
    written.insert(m.begin(), m.end());
  }
  return out;
}

DepSets compute_dep_sets(const Function &f, const Program &p, const Summaries &sums) {
  DepSets d;
  DepBuilder(p, sums, d).stmt(*f.body);

  // Reaching definitions over the statement-level CFG.
  Cfg g = build_cfg(f);
  const std::size_t n = g.nodes.size();
  std::vector<Access> acc(n);
  std::vector<int> site(n, 0);
  std::set<std::string> boundary;
  for (const auto &gl : p.globals)
    boundary.insert(gl->name);
  for (std::size_t i = 0; i < n; ++i) {
    const CfgNode &node = g.nodes[i];
    switch (node.kind) {
    case NodeKind::Simple:
    case NodeKind::Cond:
      acc[i] = atom_access(*node.stmt, p, sums);
      site[i] = node.stmt->id;
      break;
    case NodeKind::Entry:
      acc[i].must_write = boundary;
      for (const auto &prm : f.params)
        acc[i].must_write.insert(prm.name);
      site[i] = kEntryId;
      break;
    case NodeKind::Exit:
      acc[i].read = boundary;
      for (const auto &prm : f.params)
        if (prm.type.is_array())
          acc[i].read.insert(prm.name);
      site[i] = kExitId;
      break;
    default: site[i] = 0; break;
    }
  }
  std::vector<std::set<Def>> in(n), out(n);
  auto transfer = [&](std::size_t i) {
    std::set<Def> o;
    for (const auto &df : in[i])
      if (!acc[i].must_write.count(df.second))
        o.insert(df);
    for (const auto &w : acc[i].writes())
      o.insert({site[i], w});
    return o;
  };
  std::vector<int> work;
  for (std::size_t i = 0; i < n; ++i)
    work.push_back(static_cast<int>(i));
  while (!work.empty()) {
    int v = work.back();
    work.pop_back();
    const auto vi = static_cast<std::size_t>(v);
    std::set<Def> i2;
    for (int pr : g.nodes[vi].pred)
      i2.insert(out[static_cast<std::size_t>(pr)].begin(), out[static_cast<std::size_t>(pr)].end());
    in[vi] = std::move(i2);
    std::set<Def> o = transfer(vi);
    if (o != out[vi]) {
      out[vi] = std::move(o);
      for (int s : g.nodes[vi].succ)
        work.push_back(s);
    }
  }
  auto live = g.reachable();
  for (std::size_t i = 0; i < n; ++i) {
    if (!live[i])
      continue;
    for (const auto &df : in[i])
      if (acc[i].read.count(df.second))
        d.data.insert({df.first, site[i], df.second});
  }
  return d;
}

} // namespace fldx
