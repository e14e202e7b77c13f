#pragma once

#include "fldx/compiler/deps.hpp"
#include "fldx/frontend/check.hpp"

namespace fldx {

struct Violation {
  int section = -1;
  /// 1, 2 or 3 for the placement criteria, 0 for improper nesting.
  int criterion = 0;
  std::string message;
};

/// Re-derives the placement criteria of every section from the CFG of the
/// instrumented program, without the compiler's dependency sets: dominance by
/// path search with the split or merge node removed, block structure by
/// printing and re-parsing, and integer escapes by a def-use search.
std::vector<Violation> validate_sections(const Program &p, const ProgramInfo &info);

} // namespace fldx
