#pragma once

#include "fldx/frontend/check.hpp"
#include "fldx/numeric/float_format.hpp"

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace fldx {

/// Concrete execution of a program in one of two semantics: every floating
/// operation rounded to its format, or every floating operation exact.
enum class Semantics { Machine, Real };

/// A concrete input: the machine value and the real value it approximates.
struct ConcreteInput {
  Rational machine;
  Rational real;
};

/// Supplies the n-th value returned by read_double/read_float; `range` and
/// `err` are the literal bounds given at the call.
using DrawFn =
    std::function<ConcreteInput(std::size_t n, Scalar type, const RInterval &range, const RInterval &err)>;

/// State of the floating-point scalars at one assertion.
struct ConcreteVisit {
  Loc loc;
  /// Outcomes of the tests and casts executed before the visit.
  std::vector<long> decisions;
  std::map<std::string, Rational> floats;
};

struct ConcreteRun {
  std::vector<ConcreteVisit> visits;
  std::vector<long> decisions;
  std::optional<Rational> result;
  /// Empty when the run completed; otherwise why it stopped.
  std::string error;
};

ConcreteRun run_concrete(const Program &p, const ProgramInfo &info, Semantics sem,
                         const std::map<std::string, ConcreteInput> &inputs, const DrawFn &draw,
                         std::optional<FloatFormat> format = std::nullopt, const std::string &entry = "main");

/// Values of one scalar in the machine and the real run.
struct ShadowValue {
  Rational machine;
  Rational real;
  Rational err() const { return machine - real; }
};

struct ShadowVisit {
  Loc loc;
  /// Both runs took the same decisions before the visit.
  bool agreed = true;
  std::map<std::string, ShadowValue> values;
};

/// Both runs on the same inputs. The n-th assertion visits of the two runs
/// are paired as long as they are at the same assertion.
struct ShadowRun {
  std::vector<ShadowVisit> visits;
  std::optional<ShadowValue> result;
  std::string error;
};

ShadowRun run_shadow(const Program &p, const ProgramInfo &info, const std::map<std::string, ConcreteInput> &inputs,
                     const DrawFn &draw, std::optional<FloatFormat> format = std::nullopt,
                     const std::string &entry = "main");

} // namespace fldx
