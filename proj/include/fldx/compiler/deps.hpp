#pragma once

#include "fldx/frontend/cfg.hpp"

#include <map>
#include <set>
#include <tuple>

namespace fldx {

/// Variables read and written by one atomic statement: a simple statement or
/// the condition of a branch or loop. Calls contribute the callee's effects
/// on globals and on the arrays passed to it.
struct Access {
  std::set<std::string> must_write;
  std::set<std::string> may_write;
  std::set<std::string> read;
  /// Arrays written at an index that is not a literal.
  std::set<std::string> dynamic_cells;

  std::set<std::string> writes() const;
};

/// Effects of a function visible to its callers. Array parameters appear as
/// "#k" for the k-th parameter.
struct Summary {
  std::set<std::string> reads;
  std::set<std::string> writes;
};

using Summaries = std::map<std::string, Summary>;

/// Summaries of every function, callees first.
Summaries summarize(const Program &p, const std::vector<std::string> &bottom_up);

/// Access of an atomic statement. For if/while/do statements only the
/// condition is considered.
Access atom_access(const Stmt &s, const Program &p, const Summaries &sums);

/// Pseudo statement ids for the function boundary in data triples.
constexpr int kEntryId = -1;
constexpr int kExitId = -2;

/// Dependency sets of every statement of a function, keyed by statement id.
struct DepSets {
  std::map<int, std::set<std::string>> mustdef;
  /// (variable, atomic statement that may write it)
  std::map<int, std::set<std::pair<std::string, int>>> maydef;
  /// (variable, atomic statement that may read it before any write in p)
  std::map<int, std::set<std::pair<std::string, int>>> mayref;
  /// (writer, reader, variable) over the whole function body: the value
  /// written by the writer may be read by the reader without an intermediate
  /// write. The entry defines globals and parameters; the exit reads globals
  /// and array parameters.
  std::set<std::tuple<int, int, std::string>> data;
  /// Atomic statements of each statement, including itself.
  std::map<int, std::set<int>> atoms;
  /// Arrays written through a non-literal index somewhere in the statement.
  std::map<int, std::set<std::string>> dynamic_cells;
};

DepSets compute_dep_sets(const Function &f, const Program &p, const Summaries &sums);

/// Sequence rule applied to a run of statements: mustdef is the union,
/// mayref drops reads of variables necessarily written earlier in the run.
std::set<std::string> seq_mustdef(const std::vector<const Stmt *> &seq, const DepSets &d);
std::set<std::pair<std::string, int>> seq_mayref(const std::vector<const Stmt *> &seq, const DepSets &d);

} // namespace fldx
