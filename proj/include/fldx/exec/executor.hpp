#pragma once

#include "fldx/exec/decision.hpp"
#include "fldx/exec/memory.hpp"
#include "fldx/frontend/check.hpp"
#include "fldx/spec/eval.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace fldx {

struct ExecConfig {
  /// Overrides the format of both float and double when set.
  std::optional<FloatFormat> format;
  std::size_t max_syms = 64;
  Rational threshold = Rational(BigInt(1), BigInt(20));
  /// Paths explored per execution of a section before giving up on the rest.
  int path_budget = 256;
  long max_loop_iterations = 1000000;
  bool trace = false;
  std::string entry = "main";
};

/// Machine value range of an input and its error (machine - real). Without
/// an error the real value ranges over `value` and the machine value is its
/// rounding.
struct InputSpec {
  RInterval value;
  std::optional<RInterval> err;
};

/// Hull of the abstract values a variable took.
struct Bounds {
  RInterval float_iv;
  RInterval real_iv;
  RInterval err_iv;
  /// nullopt when the relative error is undefined on some occurrence.
  std::optional<RInterval> rel;

  static Bounds of(const AbstractFloat &v, const SymbolRanges &ranges);
  void join(const Bounds &o);
};

struct AssertionRecord {
  Loc loc;
  std::string function;
  Verdict verdict = Verdict::Valid;
  int evaluations = 0;
  /// Floating-point left-values mentioned by the assertion, read just before
  /// each evaluation on paths where float and real control agree.
  std::map<std::string, Bounds> values;
};

struct Alarm {
  AlarmKind kind;
  Loc loc;
  std::string message;
};

struct SectionStats {
  int id = -1;
  std::string function;
  /// Times control reached the section.
  int executions = 0;
  /// Iterations of its path loop, over all executions.
  int paths = 0;
  int abandoned = 0;
  /// Iterations that followed a divergent float/real flow.
  int divergent = 0;
  bool budget_hit = false;
};

struct ExecResult {
  std::vector<AssertionRecord> assertions;
  std::vector<Alarm> alarms;
  std::vector<std::string> warnings;
  std::vector<PrintRecord> prints;
  std::map<int, SectionStats> sections;
  /// Return value of the entry function.
  std::optional<Bounds> result;
  std::optional<Rational> int_result;
  /// Floating-point scalars of the entry function when it returns.
  std::map<std::string, Bounds> finals;
  /// False when the run stopped early on an alarm outside any section.
  bool completed = false;
  std::vector<std::string> trace;
};

/// Abstract execution of an instrumented program from its entry function.
/// Scalar parameters of the entry function are bound from `inputs`; floats
/// may be ranges, integers must be single values. Throws FrontendError when
/// an input binding is missing or malformed.
ExecResult execute(const Program &p, const ProgramInfo &info, const std::map<std::string, InputSpec> &inputs,
                   const ExecConfig &cfg = {});

/// Format used for a floating-point scalar under `cfg`.
FloatFormat format_of(Scalar s, const ExecConfig &cfg);

} // namespace fldx
