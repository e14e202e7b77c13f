#pragma once

#include "fldx/exec/executor.hpp"
#include "fldx/oracle/shadow.hpp"

#include <random>

namespace fldx {

/// Draws a concrete input from a specification: with an error range the
/// machine value is a representable value of the range and the real value
/// is machine - err; otherwise the real value is drawn and rounded. Range
/// endpoints are drawn with a fixed probability.
ConcreteInput sample_input(const InputSpec &spec, const FloatFormat &fmt, std::mt19937_64 &rng);

struct SoundnessReport {
  int samples = 0;
  /// Samples whose concrete runs stopped on an error.
  int failed_runs = 0;
  /// Assertion points and results checked.
  long checks = 0;
  std::vector<std::string> violations;
  /// Largest |machine - real| observed per assertion variable, over all
  /// visits including those after a divergence.
  std::map<std::string, Rational> max_err;
};

/// Runs the shadow oracle on `samples` random inputs and checks that every
/// concrete value at an assertion lies in the reported hulls: float, real and
/// err. Visits inside a section are only checked while machine and real
/// control agree, since divergent paths are not recorded there. The returned
/// value of the entry function is checked too.
SoundnessReport check_soundness(const Program &p, const ProgramInfo &info,
                                const std::map<std::string, InputSpec> &inputs, const ExecResult &result,
                                const ExecConfig &cfg, int samples, std::uint64_t seed);

} // namespace fldx
