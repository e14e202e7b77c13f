#pragma once

#include "fldx/frontend/ast.hpp"

namespace fldx {

/// C source for the program. Sections are printed as `/*@ split .. */` and
/// `/*@ merge .. */` comments around their statements, so the output parses
/// back to the same tree.
std::string print_program(const Program &p);
std::string print_expr(const Expr &e);
std::string print_pred(const Pred &p);
std::string print_term(const Term &t);
/// One-line rendering of a statement header, for diagnostics and reports.
std::string describe_stmt(const Stmt &s);

} // namespace fldx
