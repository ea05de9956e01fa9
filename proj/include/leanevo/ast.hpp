#pragma once

#include <cstdint>
#include <memory>
#include <set>
#include <string>
#include <vector>

namespace leanevo {

// Binary operators. Dvd (∣) is proposition-valued but syntactically an
// infix operator, so it lives here rather than with the relations.
enum class BinOp { Add, Sub, Mul, Div, Pow, SMul, And, Or, Imp, Iff, Dvd };
enum class UnOp { Neg, Not };
enum class RelOp { Eq, Ne, Lt, Le, Gt, Ge, Mem };
enum class QuantKind { Forall, Exists };

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

// Binder of a quantified formula: `x y : T`, `x ∈ s`, or bare `x`.
struct QuantBinder {
  std::vector<std::string> names;
  ExprPtr type;    // may be null
  ExprPtr domain;  // may be null; the bounded `∈ s` form
};

// Immutable expression tree. Nodes are shared; a rewrite builds new nodes
// along the changed path and reuses the rest.
struct Expr {
  enum class Kind { Binary, Unary, Relation, Quantifier, App, Ident, Num };

  Kind kind;
  BinOp bop{};
  UnOp uop{};
  RelOp rel{};
  QuantKind quant{};
  QuantBinder binder;          // Quantifier only
  std::string name;            // Ident name, App head, or Num literal text
  std::vector<ExprPtr> args;   // Binary: [lhs, rhs]; Unary: [operand];
                               // Relation: [lhs, rhs]; Quantifier: [body];
                               // App: the argument list

  static ExprPtr binary(BinOp op, ExprPtr lhs, ExprPtr rhs);
  static ExprPtr unary(UnOp op, ExprPtr operand);
  static ExprPtr relation(RelOp op, ExprPtr lhs, ExprPtr rhs);
  static ExprPtr quantifier(QuantKind kind, QuantBinder binder, ExprPtr body);
  static ExprPtr app(std::string head, std::vector<ExprPtr> args);
  static ExprPtr ident(std::string name);
  static ExprPtr num(std::string literal);
  // Bound integral `∫ v in lo..hi, body`, encoded as an opaque App with
  // head "∫" and args [ident(v), lo, hi, body].
  static ExprPtr integral(std::string var, ExprPtr lo, ExprPtr hi, ExprPtr body);

  const ExprPtr& lhs() const { return args[0]; }
  const ExprPtr& rhs() const { return args[1]; }
  const ExprPtr& operand() const { return args[0]; }
  const ExprPtr& body() const { return args.back(); }

  bool is_integral() const { return kind == Kind::App && name == kIntegralHead; }

  static constexpr const char* kIntegralHead = "∫";  // ∫
};

bool expr_equal(const Expr& a, const Expr& b);
bool expr_equal(const ExprPtr& a, const ExprPtr& b);

// Replaces the node addressed by `path` (child indices from `root`).
// A quantifier body is child 0; integral children follow App order.
ExprPtr replace_at(const ExprPtr& root, const std::vector<int>& path, const ExprPtr& replacement);
const ExprPtr& node_at(const ExprPtr& root, const std::vector<int>& path);

// Variable introduction, e.g. `(x y : ℝ)` or `{n : ℕ}`.
struct Binder {
  std::vector<std::string> names;
  ExprPtr type;
  bool implicit{false};
};

// Labeled assumption, e.g. `(h₀ : x * y = 4)`.
struct Hypothesis {
  std::string label;
  ExprPtr prop;
};

struct Statement {
  std::string header;  // leading comments / import / open lines, kept verbatim
  std::string name;
  std::vector<Binder> binders;
  std::vector<Hypothesis> hypotheses;
  ExprPtr goal;
  std::string trailer{":= by sorry"};

  std::vector<std::string> binder_names() const;
};

struct SourcePos {
  std::size_t offset{0};
  int line{1};
  int column{1};
};

struct ParseError {
  SourcePos position;
  std::string expected;
  std::string found;

  std::string message() const;
};

// Identifiers treated as library constants rather than free variables.
// Any dotted name (`Real.sqrt`, `Set.Icc`) is a constant regardless of
// table membership.
const std::set<std::string>& default_constants();
// App heads that denote types; used to keep dependent binders such as
// `(v : Fin (n + 1))` out of the hypothesis list.
const std::set<std::string>& default_type_heads();

bool is_constant_name(const std::string& name, const std::set<std::string>& constants);

std::set<std::string> free_vars(const ExprPtr& expr);
std::set<std::string> free_vars(const ExprPtr& expr, const std::set<std::string>& constants);

// True for shapes that can stand as a hypothesis or goal: relations,
// logical connectives, divisibility, quantified formulas, or opaque
// applications/identifiers.
bool proposition_shaped(const Expr& e);

}  // namespace leanevo
