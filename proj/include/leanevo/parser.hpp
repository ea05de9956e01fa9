#pragma once

#include <optional>
#include <set>
#include <string>
#include <string_view>

#include "leanevo/ast.hpp"

namespace leanevo {

struct ParseOptions {
  // Reject (rather than skip) a `def`/`abbrev` prelude before the theorem.
  // The pipeline treats the resulting ParseError as "pass through unchanged".
  bool allow_unknown_prelude{false};
  // When set, any free identifier that is neither bound nor in `constants`
  // makes the parse fail. Off by default: unlisted mathlib names are common
  // and are treated as opaque constants.
  bool strict_idents{false};
  std::set<std::string> constants{default_constants()};
  std::set<std::string> type_heads{default_type_heads()};
};

struct ParseResult {
  std::optional<Statement> statement;
  std::optional<ParseError> error;

  bool ok() const { return statement.has_value(); }
};

// Parses one `theorem <name> <binders/hypotheses> : <goal> := <proof>`
// declaration. Leading comments and import/open lines are captured into
// Statement::header; the proof after `:=` is replaced by the canonical
// `:= by sorry` trailer.
ParseResult parse_statement(std::string_view source, const ParseOptions& opts = {});

// Parses a bare expression (test and tooling helper).
struct ExprParseResult {
  ExprPtr expr;
  std::optional<ParseError> error;
  bool ok() const { return expr != nullptr; }
};
ExprParseResult parse_expression(std::string_view source);

}  // namespace leanevo
