#pragma once

#include "fldx/frontend/ast.hpp"

#include <string_view>

namespace fldx {

enum class BuiltinRole { Predicate, Term };

struct BuiltinSig {
  std::string name;
  int arity;
  BuiltinRole role;
  /// Format of the machine argument, 'f' (float) or 'd' (double).
  char format;
};

/// The accuracy built-ins usable in annotations, or nullptr.
const BuiltinSig *find_builtin(std::string_view name);

/// Parses a translation unit. Throws FrontendError with the location of the
/// first syntax error. Annotations `/*@ assert P; */` become Assert statements
/// and `/*@ split N save(..) */ ... /*@ merge N merge(..) */` pairs become
/// Section statements. Multiple returns are normalized to a single exit.
Program parse_program(std::string_view source);

/// Parses a single annotation predicate (the text between `assert` and `;`).
PredPtr parse_predicate(std::string_view text, Program &ids);

} // namespace fldx
