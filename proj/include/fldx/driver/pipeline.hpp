#pragma once

#include "fldx/compiler/placement.hpp"
#include "fldx/compiler/validate.hpp"
#include "fldx/driver/config.hpp"

namespace fldx {

enum class Stage { Parse, Typecheck, Instrument, Validate, Execute };

std::string to_string(Stage s);

/// Failure of one pipeline stage.
class StageError : public std::runtime_error {
public:
  StageError(Stage stage, const std::string &msg) : std::runtime_error(msg), stage_(stage) {}
  Stage stage() const { return stage_; }

private:
  Stage stage_;
};

/// Source after parsing, checking, section placement and validation.
struct Prepared {
  Program program;
  ProgramInfo info;
  CompileResult compile;
  std::string instrumented;
};

/// Parses and type-checks the program and its annotations.
Prepared typecheck_source(const std::string &source);

/// typecheck_source followed by section placement and the independent
/// placement check.
Prepared prepare(const std::string &source);

/// Input bindings after cutting each ranged float input into k pieces.
std::vector<std::map<std::string, InputSpec>> subdivide(const std::map<std::string, InputSpec> &inputs,
                                                         const Function &entry, int k);

/// Folds `r` into `acc`: bounds are hulled, alarms and warnings collected
/// once, verdicts joined, path statistics summed.
void join_results(ExecResult &acc, const ExecResult &r);

struct Analysis {
  Prepared prepared;
  ExecResult result;
  /// Executions performed, one per subdivision cell.
  int runs = 0;
};

/// The full pipeline. Throws StageError, or UsageError for bad inputs.
Analysis analyze(const std::string &source, const AnalysisConfig &cfg);

} // namespace fldx
