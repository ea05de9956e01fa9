#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "leanevo/ast.hpp"
#include "leanevo/rng.hpp"

namespace leanevo {

enum class RuleId {
  HypothesisReordering,   // r1 (statement level)
  Commutativity,          // r2
  Associativity,          // r3
  Distributivity,         // r4
  DeMorgan,               // r5
  SymmetricOperandSwap,   // r6
  DualRelationConversion, // r7
};

enum class RuleScope { StatementLevel, NodeLevel };

struct RuleInfo {
  RuleId id;
  RuleScope scope;
  std::string name;
  std::string description;
  std::string side_conditions;
};

// All registered rules, in r1..r7 order. New node-level rules can be added
// here without touching the traversal engine.
const std::vector<RuleInfo>& rule_catalog();
const RuleInfo& rule_info(RuleId id);
std::set<RuleId> all_rules();
std::optional<RuleId> rule_from_name(const std::string& name);

// Syntactic types of variables in scope, read off binder annotations.
// Values are type names (`ℝ`, `ℕ`, ...); anything unannotated is unknown
// and disables the arithmetic rules at nodes that contain it.
class TypeEnv {
 public:
  static TypeEnv from_statement(const Statement& stmt);

  void bind(const std::string& name, const std::string& type_name);
  std::optional<std::string> lookup(const std::string& name) const;

  // Extends with a quantifier binder (annotated types only).
  TypeEnv extended(const QuantBinder& binder) const;

 private:
  std::map<std::string, std::string> types_;
};

// Commutative carrier types for arithmetic rules.
bool commutative_carrier(const std::string& type_name);

// Syntactic numeric type of an arithmetic expression; nullopt when unknown.
// Numeric literals are polymorphic and report "#lit".
std::optional<std::string> infer_numeric_type(const ExprPtr& e, const TypeEnv& env);

bool applicable(RuleId rule, const Expr& node, const TypeEnv& env);
bool applicable_statement(RuleId rule, const Statement& stmt);

// Node transform for the r2..r7 rules; throws std::logic_error when called
// on a node where the rule is not applicable.
ExprPtr apply_rule(RuleId rule, const ExprPtr& node, const TypeEnv& env);

// One recorded application for provenance. `node_path` addresses the node
// from the statement root: the first index selects hypothesis i's
// proposition (or the goal at index = hypothesis count), the rest are
// child indices. Empty for statement-level rules.
struct RuleApplication {
  RuleId rule;
  std::vector<int> node_path;
  std::string before;
  std::string after;
};

// Hypothesis dependency order: h_j must stay after any binder/hypothesis
// whose name occurs free in its proposition (binders always print first,
// so only hypothesis-on-hypothesis references constrain the permutation).
bool hypothesis_order_legal(const Statement& stmt, const std::vector<std::size_t>& perm);
std::vector<std::vector<std::size_t>> legal_hypothesis_orders(const Statement& stmt,
                                                              std::size_t max_orders = 5040);

// r1: uniformly sampled dependency-respecting permutation (rejection
// sampling over shuffles). The identity draw is re-sampled once; if only
// the identity is legal the statement is returned unchanged.
Statement reorder_hypotheses(const Statement& stmt, Rng& rng);
Statement apply_hypothesis_order(const Statement& stmt, const std::vector<std::size_t>& perm);

}  // namespace leanevo
