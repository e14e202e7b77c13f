#pragma once

#include "fldx/compiler/deps.hpp"
#include "fldx/frontend/check.hpp"

namespace fldx {

/// A statement containing an unstable test: a comparison or truth test on a
/// floating-point value, or a conversion from floating-point to an integer.
struct Candidate {
  const Stmt *stmt = nullptr;
  Loc loc;
  std::string why;
};

std::vector<Candidate> find_candidates(const Function &f, const Program &p);

struct SectionRecord {
  int id = -1;
  std::string function;
  /// First statement inside the section.
  Loc split_loc;
  /// Statement following the section, or the function's location when the
  /// section ends its body.
  Loc merge_loc;
  std::vector<std::string> save_list;
  std::vector<std::string> merge_list;
  std::vector<Loc> candidates;
};

struct CompileResult {
  std::vector<SectionRecord> sections;
  std::vector<std::string> warnings;
  int candidates = 0;
};

/// Inserts split/merge sections around every candidate of every function,
/// in place. Functions that already contain sections are left unchanged.
/// The program must have been checked; `info` is invalidated for the
/// instrumented functions (sections do not open scopes, so re-checking
/// yields the same variables).
CompileResult compile_sections(Program &p, const ProgramInfo &info);

} // namespace fldx
