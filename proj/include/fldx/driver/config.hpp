#pragma once

#include "fldx/exec/executor.hpp"

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace fldx {

/// Invalid command-line or configuration value.
class UsageError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct AnalysisConfig {
  ExecConfig exec;
  std::map<std::string, InputSpec> inputs;
  /// Pieces each ranged float input is cut into; results are hulled.
  int subdiv = 1;

  /// Throws UsageError unless subdiv >= 1, the path budget is >= 1 and the
  /// threshold lies in [0, 1].
  void validate() const;
};

/// "binary32", "binary64", "toy", or "custom:BETA,P,EMIN,EMAX".
FloatFormat parse_format(const std::string &text);

/// `name=[lo,hi]~[err_lo,err_hi]`, `name=v`, or `name=[lo,hi]~e` for an error
/// in [-e, e]. Without an error part the value is real and the machine value
/// is its rounding.
std::pair<std::string, InputSpec> parse_input(const std::string &text);

/// Inputs declared in a source file by comment lines of the form
/// `Scenario [label]: spec; spec; ...`.
struct Scenario {
  std::string label;
  std::map<std::string, InputSpec> inputs;
};

std::vector<Scenario> scenarios_of(const std::string &source);

/// The scenario of `source` with label `key`, or at 1-based index `key`.
/// Throws UsageError if there is none.
Scenario pick_scenario(const std::string &source, const std::string &key);

} // namespace fldx
