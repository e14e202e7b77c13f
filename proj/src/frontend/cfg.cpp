#include "fldx/frontend/cfg.hpp"

#include <algorithm>
#include <functional>
#include <optional>

namespace fldx {

int Cfg::add(NodeKind k, const Stmt *s) {
  CfgNode n;
  n.id = static_cast<int>(nodes.size());
  n.kind = k;
  n.stmt = s;
  nodes.push_back(n);
  return n.id;
}

void Cfg::edge(int from, int to) {
  auto &s = nodes[static_cast<std::size_t>(from)].succ;
  if (std::find(s.begin(), s.end(), to) != s.end())
    return;
  s.push_back(to);
  nodes[static_cast<std::size_t>(to)].pred.push_back(from);
}

std::vector<bool> Cfg::reachable() const {
  std::vector<bool> seen(nodes.size(), false);
  std::vector<int> work{entry};
  seen[static_cast<std::size_t>(entry)] = true;
  while (!work.empty()) {
    int n = work.back();
    work.pop_back();
    for (int s : nodes[static_cast<std::size_t>(n)].succ)
      if (!seen[static_cast<std::size_t>(s)]) {
        seen[static_cast<std::size_t>(s)] = true;
        work.push_back(s);
      }
  }
  return seen;
}

namespace {

bool constant_truth(const Expr &e, bool &value) {
  if (e.kind == ExprKind::IntLit || e.kind == ExprKind::FloatLit) {
    value = !e.value.is_zero();
    return true;
  }
  return false;
}

std::optional<int> first_of(const Cfg &g, const Stmt &s) {
  switch (s.kind) {
  case StmtKind::Block:
    for (const auto &c : s.body)
      if (auto f = first_of(g, *c))
        return f;
    return std::nullopt;
  case StmtKind::DoWhile:
    if (auto f = first_of(g, *s.then_s))
      return f;
    break;
  default: break;
  }
  auto it = g.own.find(s.id);
  if (it == g.own.end())
    return std::nullopt;
  return it->second;
}

class Builder {
public:
  explicit Builder(Cfg &g) : g_(g) {}

  /// Wires `s` after the dangling nodes `preds`; returns the new dangling set.
  std::vector<int> stmt(const Stmt &s, std::vector<int> preds) {
    switch (s.kind) {
    case StmtKind::Block: return list(s.body, preds);
    case StmtKind::Section: {
      int split = g_.add(NodeKind::Split, &s);
      connect(preds, split);
      g_.own[s.id] = split;
      auto outs = list(s.body, {split});
      int merge = g_.add(NodeKind::Merge, &s);
      connect(outs, merge);
      g_.merge[s.id] = merge;
      return {merge};
    }
    case StmtKind::If: {
      int c = cond(s, preds);
      bool val = false;
      bool known = constant_truth(*s.expr, val);
      std::vector<int> out;
      auto t = stmt(*s.then_s, known && !val ? std::vector<int>{} : std::vector<int>{c});
      out.insert(out.end(), t.begin(), t.end());
      std::vector<int> else_in = known && val ? std::vector<int>{} : std::vector<int>{c};
      if (s.else_s) {
        auto e = stmt(*s.else_s, else_in);
        out.insert(out.end(), e.begin(), e.end());
      } else {
        out.insert(out.end(), else_in.begin(), else_in.end());
      }
      return out;
    }
    case StmtKind::While: {
      int c = cond(s, preds);
      bool val = false;
      bool known = constant_truth(*s.expr, val);
      auto body = stmt(*s.then_s, known && !val ? std::vector<int>{} : std::vector<int>{c});
      connect(body, c);
      if (known && val)
        return {};
      return {c};
    }
    case StmtKind::DoWhile: {
      const std::size_t before = g_.nodes.size();
      auto body = stmt(*s.then_s, preds);
      int c = g_.add(NodeKind::Cond, &s);
      g_.own[s.id] = c;
      int head = c;
      if (g_.nodes.size() - 1 > before)
        head = *first_of(g_, *s.then_s);
      else
        connect(preds, c);
      connect(body, c);
      bool val = false;
      bool known = constant_truth(*s.expr, val);
      if (!known || val)
        g_.edge(c, head);
      if (known && val)
        return {};
      return {c};
    }
    case StmtKind::Return: {
      int n = simple(s, preds);
      g_.edge(n, g_.exit);
      return {};
    }
    default: return {simple(s, preds)};
    }
  }

  std::vector<int> list(const std::vector<StmtPtr> &body, std::vector<int> preds) {
    for (const auto &c : body)
      preds = stmt(*c, preds);
    return preds;
  }

private:
  int cond(const Stmt &s, const std::vector<int> &preds) {
    int c = g_.add(NodeKind::Cond, &s);
    connect(preds, c);
    g_.own[s.id] = c;
    return c;
  }

  int simple(const Stmt &s, const std::vector<int> &preds) {
    int n = g_.add(NodeKind::Simple, &s);
    connect(preds, n);
    g_.own[s.id] = n;
    return n;
  }

  void connect(const std::vector<int> &from, int to) {
    for (int f : from)
      g_.edge(f, to);
  }

  Cfg &g_;
};

std::vector<int> reverse_postorder(int root, const std::function<const std::vector<int> &(int)> &next,
                                   std::size_t n) {
  std::vector<int> order;
  std::vector<char> seen(n, 0);
  // Iterative DFS with explicit child index.
  std::vector<std::pair<int, std::size_t>> stack{{root, 0}};
  seen[static_cast<std::size_t>(root)] = 1;
  while (!stack.empty()) {
    auto &[v, i] = stack.back();
    const auto &succ = next(v);
    if (i < succ.size()) {
      int w = succ[i++];
      if (!seen[static_cast<std::size_t>(w)]) {
        seen[static_cast<std::size_t>(w)] = 1;
        stack.push_back({w, 0});
      }
    } else {
      order.push_back(v);
      stack.pop_back();
    }
  }
  std::reverse(order.begin(), order.end());
  return order;
}

// Cooper, Harvey and Kennedy's iterative algorithm.
DomTree compute(int root, std::size_t n, const std::function<const std::vector<int> &(int)> &succ,
                const std::function<const std::vector<int> &(int)> &pred) {
  auto rpo = reverse_postorder(root, succ, n);
  std::vector<int> index(n, -1);
  for (std::size_t i = 0; i < rpo.size(); ++i)
    index[static_cast<std::size_t>(rpo[i])] = static_cast<int>(i);
  DomTree t;
  t.root = root;
  t.idom.assign(n, -1);
  t.idom[static_cast<std::size_t>(root)] = root;
  auto intersect = [&](int a, int b) {
    while (a != b) {
      while (index[static_cast<std::size_t>(a)] > index[static_cast<std::size_t>(b)])
        a = t.idom[static_cast<std::size_t>(a)];
      while (index[static_cast<std::size_t>(b)] > index[static_cast<std::size_t>(a)])
        b = t.idom[static_cast<std::size_t>(b)];
    }
    return a;
  };
  bool changed = true;
  while (changed) {
    changed = false;
    for (int v : rpo) {
      if (v == root)
        continue;
      int nd = -1;
      for (int p : pred(v)) {
        if (t.idom[static_cast<std::size_t>(p)] < 0)
          continue;
        nd = nd < 0 ? p : intersect(p, nd);
      }
      if (nd >= 0 && t.idom[static_cast<std::size_t>(v)] != nd) {
        t.idom[static_cast<std::size_t>(v)] = nd;
        changed = true;
      }
    }
  }
  return t;
}

} // namespace

bool DomTree::dominates(int a, int b) const {
  if (idom[static_cast<std::size_t>(b)] < 0 || idom[static_cast<std::size_t>(a)] < 0)
    return false;
  for (int v = b;; v = idom[static_cast<std::size_t>(v)]) {
    if (v == a)
      return true;
    if (v == root)
      return false;
  }
}

Cfg build_cfg(const Function &f) {
  Cfg g;
  g.entry = g.add(NodeKind::Entry, nullptr);
  g.exit = g.add(NodeKind::Exit, nullptr);
  Builder b(g);
  auto outs = b.list(f.body->body, {g.entry});
  for (int o : outs)
    g.edge(o, g.exit);
  walk_stmts(f.body, [&](const StmtPtr &s) {
    if (auto n = first_of(g, *s))
      g.first[s->id] = *n;
  });
  // Every reachable node must reach the exit.
  std::vector<bool> back(g.nodes.size(), false);
  std::vector<int> work{g.exit};
  back[static_cast<std::size_t>(g.exit)] = true;
  while (!work.empty()) {
    int n = work.back();
    work.pop_back();
    for (int p : g.nodes[static_cast<std::size_t>(n)].pred)
      if (!back[static_cast<std::size_t>(p)]) {
        back[static_cast<std::size_t>(p)] = true;
        work.push_back(p);
      }
  }
  auto fwd = g.reachable();
  for (const auto &n : g.nodes)
    if (fwd[static_cast<std::size_t>(n.id)] && !back[static_cast<std::size_t>(n.id)])
      throw FrontendError(n.stmt ? n.stmt->loc : f.loc, "function '" + f.name + "' may not terminate");
  return g;
}

DomTree dominators(const Cfg &cfg) {
  return compute(
      cfg.entry, cfg.nodes.size(), [&](int v) -> const std::vector<int> & { return cfg.nodes[static_cast<std::size_t>(v)].succ; },
      [&](int v) -> const std::vector<int> & { return cfg.nodes[static_cast<std::size_t>(v)].pred; });
}

DomTree post_dominators(const Cfg &cfg) {
  return compute(
      cfg.exit, cfg.nodes.size(), [&](int v) -> const std::vector<int> & { return cfg.nodes[static_cast<std::size_t>(v)].pred; },
      [&](int v) -> const std::vector<int> & { return cfg.nodes[static_cast<std::size_t>(v)].succ; });
}

} // namespace fldx
