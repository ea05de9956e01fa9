#pragma once

#include <string>

#include "leanevo/ast.hpp"

namespace leanevo {

// Prints with minimal parenthesization under the operator precedence table.
// Output always ends with the `:= by sorry` trailer; the header, when
// present, is re-attached verbatim in front of the declaration.
std::string print_statement(const Statement& stmt);

std::string print_expr(const Expr& expr);
std::string print_expr(const ExprPtr& expr);

}  // namespace leanevo
