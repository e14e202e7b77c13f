#pragma once

#include "fldx/frontend/ast.hpp"

#include <map>

namespace fldx {

/// Names and types visible in one function: globals, parameters and every
/// local. Locals are unique per function, so a name identifies one variable.
struct FunctionScope {
  std::map<std::string, Type> vars;
  std::vector<std::string> globals;
};

struct ProgramInfo {
  std::map<std::string, FunctionScope> scopes;
  /// Callees in an order where every function precedes its callers.
  std::vector<std::string> bottom_up;
};

/// Resolves names, assigns a static type to every expression and checks the
/// subset rules: declaration before use, no redeclaration of a visible or
/// previously declared name within a function, no recursion, constant array
/// sizes, matching call arities. Annotation left-values must name visible
/// variables. Throws FrontendError.
ProgramInfo check_program(Program &p);

/// C usual arithmetic conversions for two scalar operand types.
Scalar arith_result(Scalar a, Scalar b);

/// Intrinsic functions understood by the analyzer.
bool is_intrinsic(const std::string &name);

} // namespace fldx
