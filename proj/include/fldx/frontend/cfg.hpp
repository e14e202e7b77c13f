#pragma once

#include "fldx/frontend/ast.hpp"

#include <map>

namespace fldx {

enum class NodeKind { Entry, Exit, Simple, Cond, Split, Merge };

struct CfgNode {
  int id = -1;
  NodeKind kind = NodeKind::Simple;
  /// Source statement; for Cond nodes the if/while/do statement, for Split
  /// and Merge nodes the section.
  const Stmt *stmt = nullptr;
  std::vector<int> succ;
  std::vector<int> pred;
};

/// Statement-level control-flow graph of one function. Simple statements
/// and branch conditions are nodes; sections contribute a Split node before
/// and a Merge node after their statements.
struct Cfg {
  std::vector<CfgNode> nodes;
  int entry = 0;
  int exit = 1;
  /// First node executed by each statement, keyed by statement id. Statements
  /// without nodes (empty blocks) have no entry.
  std::map<int, int> first;
  /// The node owned by a simple statement, a condition, or a section's split.
  std::map<int, int> own;
  /// Merge node of each section.
  std::map<int, int> merge;

  int add(NodeKind k, const Stmt *s);
  void edge(int from, int to);
  /// Nodes reachable from entry.
  std::vector<bool> reachable() const;
};

/// Builds the CFG. Throws FrontendError if the exit is unreachable from some
/// reachable node (a loop whose condition is a nonzero constant).
Cfg build_cfg(const Function &f);

/// Immediate-dominator tree. idom[root] == root; unreachable nodes have -1.
struct DomTree {
  std::vector<int> idom;
  int root = 0;

  bool dominates(int a, int b) const;
  bool strictly_dominates(int a, int b) const { return a != b && dominates(a, b); }
};

DomTree dominators(const Cfg &cfg);
/// Dominators of the reversed graph rooted at the exit.
DomTree post_dominators(const Cfg &cfg);

} // namespace fldx
