#include "fldx/compiler/placement.hpp"

#include <algorithm>

namespace fldx {

namespace {

bool float_typed(const Expr &e) { return e.type.is_float(); }

// First reason `e` (or a subexpression) is an unstable test, or empty.
std::string unstable_in(const ExprPtr &e, const Program &p) {
  std::string why;
  walk_exprs(e, [&](const ExprPtr &x) {
    if (!why.empty())
      return;
    switch (x->kind) {
    case ExprKind::Cast:
      if (x->type.is_integral() && float_typed(*x->args[0]))
        why = "conversion of " + to_string(x->args[0]->type.scalar) + " to " + to_string(x->type.scalar);
      break;
    case ExprKind::Binary:
      if ((is_comparison(x->binop) || x->binop == BinOp::And || x->binop == BinOp::Or) &&
          (float_typed(*x->args[0]) || float_typed(*x->args[1])))
        why = "floating-point test '" + to_string(x->binop) + "'";
      break;
    case ExprKind::Unary:
      if (x->unop == UnOp::Not && float_typed(*x->args[0]))
        why = "floating-point test '!'";
      break;
    case ExprKind::Cond:
      if (float_typed(*x->args[0]))
        why = "floating-point conditional expression";
      break;
    case ExprKind::Call:
      if (const Function *g = p.find(x->name))
        for (std::size_t k = 0; k < g->params.size() && k < x->args.size(); ++k)
          if (g->params[k].type.is_integral() && float_typed(*x->args[k]))
            why = "implicit conversion of an argument of '" + x->name + "' to an integer";
      break;
    default: break;
    }
  });
  return why;
}

std::string unstable_stmt(const Stmt &s, const Program &p) {
  for (const auto &e : own_exprs(s))
    if (auto w = unstable_in(e, p); !w.empty())
      return w;
  switch (s.kind) {
  case StmtKind::If:
  case StmtKind::While:
  case StmtKind::DoWhile:
    if (float_typed(*s.expr))
      return "floating-point condition";
    break;
  case StmtKind::Decl:
    if (s.type.is_integral() && s.expr && float_typed(*s.expr))
      return "implicit conversion to " + to_string(s.type.scalar);
    break;
  case StmtKind::Assign:
    if (s.target->type.is_integral() && float_typed(*s.expr))
      return "implicit conversion to " + to_string(s.target->type.scalar);
    break;
  default: break;
  }
  return {};
}

bool is_integer_var(const FunctionScope &scope, const std::string &v) {
  auto it = scope.vars.find(v);
  return it != scope.vars.end() && fldx::is_integral(it->second.scalar);
}

bool is_float_var(const FunctionScope &scope, const std::string &v) {
  auto it = scope.vars.find(v);
  return it != scope.vars.end() && fldx::is_float(it->second.scalar);
}

struct Region {
  Stmt *owner = nullptr;
  std::size_t begin = 0;
  std::size_t end = 0;
  /// Expansion stopped before Criterion 3 held.
  bool stuck = false;
  std::vector<Loc> candidates;

  bool overlaps_or_touches(const Region &o) const { return owner == o.owner && o.begin <= end && begin <= o.end; }
};

class Placer {
public:
  Placer(Program &p, Function &f, const FunctionScope &scope, const Summaries &sums, CompileResult &out)
      : p_(p), f_(f), scope_(scope), sums_(sums), out_(out) {}

  void run() {
    std::vector<Candidate> cands = find_candidates(f_, p_);
    out_.candidates += static_cast<int>(cands.size());
    if (cands.empty())
      return;
    hoist_return_value(cands);
    deps_ = compute_dep_sets(f_, p_, sums_);
    index_positions();
    for (const auto &[writer, reader, var] : deps_.data)
      readers_[writer].push_back({reader, var});

    std::vector<Region> regions;
    for (const auto &c : cands) {
      auto [owner, i] = pos_.at(c.stmt);
      regions.push_back({owner, i, i + 1, false, {c.loc}});
    }
    bool changed = true;
    while (changed) {
      changed = false;
      for (auto &r : regions)
        changed |= expand(r);
      changed |= fuse(regions);
    }
    emit(regions);
  }

private:
  // A return whose value contains a candidate is split into a declaration of
  // the value and a return of that declaration, so that the section can end
  // before the return.
  void hoist_return_value(std::vector<Candidate> &cands) {
    auto &body = f_.body->body;
    if (body.empty() || body.back()->kind != StmtKind::Return)
      return;
    StmtPtr ret = body.back();
    auto it = std::find_if(cands.begin(), cands.end(), [&](const Candidate &c) { return c.stmt == ret.get(); });
    if (it == cands.end())
      return;
    auto decl = std::make_shared<Stmt>();
    decl->kind = StmtKind::Decl;
    decl->loc = ret->loc;
    decl->id = p_.next_id++;
    decl->name = "__result";
    decl->type = f_.ret;
    decl->expr = ret->expr;
    auto var = std::make_shared<Expr>();
    var->kind = ExprKind::Var;
    var->loc = ret->loc;
    var->id = p_.next_id++;
    var->name = decl->name;
    var->type = f_.ret;
    ret->expr = var;
    body.insert(body.end() - 1, decl);
    it->stmt = decl.get();
  }

  void index_positions() {
    walk_stmts(f_.body, [&](const StmtPtr &s) {
      if (s->kind == StmtKind::Block || s->kind == StmtKind::Section)
        for (std::size_t i = 0; i < s->body.size(); ++i)
          pos_[s->body[i].get()] = {s.get(), i};
      for (const StmtPtr &child : {s->then_s, s->else_s})
        if (child)
          enclosing_[child.get()] = s.get();
    });
  }

  // Position of the list owner in its parent list: the owner itself when it
  // is a bare block, else the branch or loop statement it belongs to.
  std::optional<std::pair<Stmt *, std::size_t>> parent_position(Stmt *owner) const {
    if (auto it = pos_.find(owner); it != pos_.end())
      return it->second;
    if (auto it = enclosing_.find(owner); it != enclosing_.end())
      return pos_.at(it->second);
    return std::nullopt;
  }

  std::set<int> region_atoms(const Region &r) const {
    std::set<int> a;
    for (std::size_t i = r.begin; i < r.end; ++i) {
      const auto &s = deps_.atoms.at(r.owner->body[i]->id);
      a.insert(s.begin(), s.end());
    }
    return a;
  }

  std::set<std::pair<std::string, int>> region_maydef(const Region &r) const {
    std::set<std::pair<std::string, int>> m;
    for (std::size_t i = r.begin; i < r.end; ++i) {
      const auto &s = deps_.maydef.at(r.owner->body[i]->id);
      m.insert(s.begin(), s.end());
    }
    return m;
  }

  // (variable, reader) pairs for values written inside r and read outside.
  std::vector<std::pair<std::string, int>> escapes(const Region &r) const {
    std::vector<std::pair<std::string, int>> out;
    std::set<int> atoms = region_atoms(r);
    for (const auto &[var, writer] : region_maydef(r)) {
      auto it = readers_.find(writer);
      if (it == readers_.end())
        continue;
      for (const auto &[reader, v] : it->second)
        if (v == var && !atoms.count(reader))
          out.push_back({var, reader});
    }
    return out;
  }

  std::optional<std::size_t> child_containing(const Stmt *owner, int atom) const {
    for (std::size_t i = 0; i < owner->body.size(); ++i)
      if (deps_.atoms.at(owner->body[i]->id).count(atom))
        return i;
    return std::nullopt;
  }

  bool hoist(Region &r) {
    auto up = parent_position(r.owner);
    if (!up) {
      // Already at the function body: take all of it but the final return.
      auto &body = f_.body->body;
      std::size_t end = body.size();
      if (end > 0 && body.back()->kind == StmtKind::Return)
        --end;
      bool grew = r.begin != 0 || r.end != end;
      r.begin = 0;
      r.end = end;
      if (!r.stuck)
        out_.warnings.push_back(f_.name + ": section spans whole function");
      r.stuck = true;
      return grew;
    }
    r.owner = up->first;
    r.begin = up->second;
    r.end = up->second + 1;
    return true;
  }

  // One greedy step. The merge point must be the start of a statement in the
  // same list: a region ending a bare block is hoisted around that block.
  // Integer values escaping the region push the merge past their readers, or
  // hoist the region when a reader is not later in the same list.
  bool expand(Region &r) {
    if (r.stuck)
      return false;
    std::size_t want_end = r.end;
    bool up = false;
    for (const auto &[var, reader] : escapes(r)) {
      if (!is_integer_var(scope_, var))
        continue;
      auto k = reader == kExitId ? std::nullopt : child_containing(r.owner, reader);
      if (!k || *k < r.begin) {
        up = true;
        continue;
      }
      if (r.owner->body[*k]->kind == StmtKind::Return) {
        up = true;
        continue;
      }
      want_end = std::max(want_end, *k + 1);
    }
    if (up)
      return hoist(r);
    if (want_end > r.end) {
      r.end = want_end;
      return true;
    }
    const bool bare_block = r.owner->kind == StmtKind::Block && pos_.count(r.owner);
    if (bare_block && r.end == r.owner->body.size())
      return hoist(r);
    return false;
  }

  bool fuse(std::vector<Region> &regions) {
    bool changed = false;
    for (std::size_t i = 0; i < regions.size(); ++i)
      for (std::size_t j = i + 1; j < regions.size();) {
        if (regions[i].overlaps_or_touches(regions[j])) {
          Region &a = regions[i];
          const Region &b = regions[j];
          a.begin = std::min(a.begin, b.begin);
          a.end = std::max(a.end, b.end);
          a.stuck = a.stuck && b.stuck;
          a.candidates.insert(a.candidates.end(), b.candidates.begin(), b.candidates.end());
          regions.erase(regions.begin() + static_cast<long>(j));
          changed = true;
          j = i + 1;
        } else {
          ++j;
        }
      }
    return changed;
  }

  void emit(std::vector<Region> &regions) {
    // Replace ranges from the back of each list so earlier indices stay valid.
    std::sort(regions.begin(), regions.end(), [](const Region &a, const Region &b) {
      return a.owner != b.owner ? a.owner < b.owner : a.begin > b.begin;
    });
    std::vector<SectionRecord> recs;
    for (Region &r : regions) {
      SectionRecord rec;
      rec.function = f_.name;
      rec.candidates = r.candidates;
      lists(r, rec);
      auto sec = std::make_shared<Stmt>();
      sec->kind = StmtKind::Section;
      sec->id = p_.next_id++;
      auto &body = r.owner->body;
      sec->loc = body[r.begin]->loc;
      rec.split_loc = sec->loc;
      rec.merge_loc = r.end < body.size() ? body[r.end]->loc : f_.loc;
      sec->body.assign(body.begin() + static_cast<long>(r.begin), body.begin() + static_cast<long>(r.end));
      sec->section.save_list = rec.save_list;
      sec->section.merge_list = rec.merge_list;
      body.erase(body.begin() + static_cast<long>(r.begin), body.begin() + static_cast<long>(r.end));
      body.insert(body.begin() + static_cast<long>(r.begin), sec);
      rec.id = sec->id;
      recs.push_back(rec);
      sections_.push_back(sec.get());
    }
    for (auto &rec : recs)
      out_.sections.push_back(std::move(rec));
  }

  void lists(const Region &r, SectionRecord &rec) {
    std::vector<const Stmt *> seq;
    for (std::size_t i = r.begin; i < r.end; ++i)
      seq.push_back(r.owner->body[i].get());
    std::set<std::string> defined;
    for (const auto &[v, s] : region_maydef(r))
      defined.insert(v);
    std::set<std::string> read;
    for (const auto &[v, s] : seq_mayref(seq, deps_))
      read.insert(v);
    std::set<std::string> save, merge;
    for (const auto &v : defined)
      if (read.count(v))
        save.insert(v);
    std::set<std::string> stuck_ints;
    for (const auto &[v, reader] : escapes(r)) {
      if (is_float_var(scope_, v))
        merge.insert(v);
      else
        stuck_ints.insert(v);
    }
    for (const auto &v : stuck_ints)
      out_.warnings.push_back(f_.name + ": integer '" + v + "' modified in a section at line " +
                              std::to_string(seq.front()->loc.line) + " is read after its merge");
    std::set<std::string> dyn;
    for (const Stmt *s : seq) {
      const auto &d = deps_.dynamic_cells.at(s->id);
      dyn.insert(d.begin(), d.end());
    }
    for (const auto &v : dyn)
      if (save.count(v) || merge.count(v))
        out_.warnings.push_back(f_.name + ": array '" + v + "' is written at a computed index; saved and merged whole");
    rec.save_list.assign(save.begin(), save.end());
    rec.merge_list.assign(merge.begin(), merge.end());
  }

  Program &p_;
  Function &f_;
  const FunctionScope &scope_;
  const Summaries &sums_;
  CompileResult &out_;
  DepSets deps_;
  std::map<const Stmt *, std::pair<Stmt *, std::size_t>> pos_;
  std::map<const Stmt *, Stmt *> enclosing_;
  std::map<int, std::vector<std::pair<int, std::string>>> readers_;
  std::vector<Stmt *> sections_;
};

bool has_sections(const Function &f) {
  bool found = false;
  walk_stmts(f.body, [&](const StmtPtr &s) { found |= s->kind == StmtKind::Section; });
  return found;
}

} // namespace

std::vector<Candidate> find_candidates(const Function &f, const Program &p) {
  std::vector<Candidate> out;
  walk_stmts(f.body, [&](const StmtPtr &s) {
    if (s->kind == StmtKind::Block || s->kind == StmtKind::Section)
      return;
    std::string why = unstable_stmt(*s, p);
    if (s->kind == StmtKind::Return && why.empty() && s->expr && f.ret.is_integral() && float_typed(*s->expr))
      why = "implicit conversion of the returned value to " + to_string(f.ret.scalar);
    if (!why.empty())
      out.push_back({s.get(), s->loc, why});
  });
  return out;
}

CompileResult compile_sections(Program &p, const ProgramInfo &info) {
  CompileResult out;
  Summaries sums = summarize(p, info.bottom_up);
  int next_section = 1;
  for (auto &f : p.functions)
    walk_stmts(f.body, [&](const StmtPtr &s) {
      if (s->kind == StmtKind::Section)
        next_section = std::max(next_section, s->section.id + 1);
    });
  for (auto &f : p.functions) {
    if (has_sections(f)) {
      out.warnings.push_back(f.name + ": already instrumented; left unchanged");
      continue;
    }
    std::size_t first = out.sections.size();
    Placer(p, f, info.scopes.at(f.name), sums, out).run();
    // Number the new sections in source order.
    std::map<int, int> renumber;
    walk_stmts(f.body, [&](const StmtPtr &s) {
      if (s->kind == StmtKind::Section && !renumber.count(s->id)) {
        renumber[s->id] = next_section;
        s->section.id = next_section++;
      }
    });
    for (std::size_t i = first; i < out.sections.size(); ++i)
      out.sections[i].id = renumber.at(out.sections[i].id);
  }
  std::sort(out.sections.begin(), out.sections.end(),
            [](const SectionRecord &a, const SectionRecord &b) { return a.id < b.id; });
  return out;
}

} // namespace fldx
