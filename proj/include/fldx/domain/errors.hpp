#pragma once

#include <stdexcept>
#include <string>

namespace fldx {

enum class AlarmKind {
  DivisionByZero,
  Overflow,
  OutOfBounds,
  AssertionFailed,
  AssertionIndeterminate,
  RelativeErrorUndefined,
  InstrumentationGap,
  NoFeasibleExecution,
  CastRange,
  Unsupported,
  Uninitialized,
};

std::string to_string(AlarmKind k);

/// A runtime alarm raised by the abstract semantics. The current path cannot
/// continue past it.
class DomainAlarm : public std::runtime_error {
public:
  DomainAlarm(AlarmKind kind, const std::string &what) : std::runtime_error(what), kind_(kind) {}
  AlarmKind kind() const { return kind_; }

private:
  AlarmKind kind_;
};

/// Thrown when constraints on the current path have no solution. Caught by the
/// innermost split-merge section, which moves on to its next path.
class InfeasiblePath : public std::exception {
public:
  explicit InfeasiblePath(std::string why = "infeasible path") : why_(std::move(why)) {}
  const char *what() const noexcept override { return why_.c_str(); }

private:
  std::string why_;
};

} // namespace fldx
