#include "leanevo/rules.hpp"

#include <algorithm>
#include <stdexcept>

#include "leanevo/printer.hpp"

namespace leanevo {

const std::vector<RuleInfo>& rule_catalog() {
  static const std::vector<RuleInfo> catalog = {
      {RuleId::HypothesisReordering, RuleScope::StatementLevel, "hypothesis-reordering",
       "Permutes the hypothesis list of a statement.",
       "At least two hypotheses; a hypothesis never moves before one it references."},
      {RuleId::Commutativity, RuleScope::NodeLevel, "commutativity",
       "a + b -> b + a, a * b -> b * a, P ∧ Q -> Q ∧ P, P ∨ Q -> Q ∨ P.",
       "Arithmetic operands must have a commutative carrier type (ℝ, ℤ, ℕ, "
       "ℚ) read off binder annotations; unknown types are skipped. Subtraction, "
       "division and • are excluded."},
      {RuleId::Associativity, RuleScope::NodeLevel, "associativity",
       "(a ∘ b) ∘ c <-> a ∘ (b ∘ c) for ∘ in {+, *, ∧, ∨}.",
       "A same-operator child must exist; arithmetic operands need a commutative "
       "carrier type."},
      {RuleId::Distributivity, RuleScope::NodeLevel, "distributivity",
       "a * (b + c) <-> a * b + a * c and the ∧/∨ lattice analogues, in both "
       "the expanding and factoring directions.",
       "Factoring requires a structurally equal shared factor on the same side. "
       "Arithmetic form only for * over + on commutative carriers."},
      {RuleId::DeMorgan, RuleScope::NodeLevel, "de-morgan",
       "¬(P ∧ Q) <-> ¬P ∨ ¬Q and ¬(P ∨ Q) <-> ¬P ∧ ¬Q.",
       "Forward form needs an explicit ¬ over ∧/∨; reverse form needs ¬ on "
       "both children. No double negation is introduced."},
      {RuleId::SymmetricOperandSwap, RuleScope::NodeLevel, "symmetric-operand-swap",
       "(a = b) -> (b = a), (a ≠ b) -> (b ≠ a).",
       "Relation must be = or ≠."},
      {RuleId::DualRelationConversion, RuleScope::NodeLevel, "dual-relation-conversion",
       "(a < b) -> (b > a), (a ≤ b) -> (b ≥ a), and the converses.",
       "Relation must be one of <, >, ≤, ≥."},
  };
  return catalog;
}

const RuleInfo& rule_info(RuleId id) {
  for (const auto& info : rule_catalog()) {
    if (info.id == id) return info;
  }
  throw std::logic_error("unknown rule id");
}

std::set<RuleId> all_rules() {
  std::set<RuleId> out;
  for (const auto& info : rule_catalog()) out.insert(info.id);
  return out;
}

std::optional<RuleId> rule_from_name(const std::string& name) {
  for (const auto& info : rule_catalog()) {
    if (info.name == name) return info.id;
  }
  return std::nullopt;
}

TypeEnv TypeEnv::from_statement(const Statement& stmt) {
  TypeEnv env;
  for (const auto& b : stmt.binders) {
    if (b.type && b.type->kind == Expr::Kind::Ident) {
      for (const auto& n : b.names) env.bind(n, b.type->name);
    }
  }
  return env;
}

void TypeEnv::bind(const std::string& name, const std::string& type_name) {
  types_[name] = type_name;
}

std::optional<std::string> TypeEnv::lookup(const std::string& name) const {
  auto it = types_.find(name);
  if (it == types_.end()) return std::nullopt;
  return it->second;
}

TypeEnv TypeEnv::extended(const QuantBinder& binder) const {
  TypeEnv env = *this;
  if (binder.type && binder.type->kind == Expr::Kind::Ident) {
    for (const auto& n : binder.names) env.bind(n, binder.type->name);
  } else {
    // unannotated or bounded binders shadow any outer annotation
    for (const auto& n : binder.names) env.types_.erase(n);
  }
  return env;
}

bool commutative_carrier(const std::string& type_name) {
  return type_name == "ℝ" || type_name == "ℤ" || type_name == "ℕ" ||
         type_name == "ℚ" || type_name == "#lit";
}

std::optional<std::string> infer_numeric_type(const ExprPtr& e, const TypeEnv& env) {
  if (!e) return std::nullopt;
  switch (e->kind) {
    case Expr::Kind::Num:
      return std::string("#lit");
    case Expr::Kind::Ident:
      return env.lookup(e->name);
    case Expr::Kind::Unary: {
      if (e->uop != UnOp::Neg) return std::nullopt;
      auto t = infer_numeric_type(e->operand(), env);
      if (t && (*t == "ℕ")) return std::nullopt;  // negation leaves ℕ
      return t;
    }
    case Expr::Kind::Binary: {
      switch (e->bop) {
        case BinOp::Add:
        case BinOp::Sub:
        case BinOp::Mul:
        case BinOp::Div:
        case BinOp::Pow: {
          auto lt = infer_numeric_type(e->lhs(), env);
          auto rt = infer_numeric_type(e->rhs(), env);
          if (!lt || !rt) return std::nullopt;
          if (*lt == "#lit") return rt;
          if (*rt == "#lit" || *lt == *rt) return lt;
          return std::nullopt;
        }
        default:
          return std::nullopt;
      }
    }
    default:
      return std::nullopt;
  }
}

namespace {

bool arithmetic_commutative_node(const Expr& node, const TypeEnv& env) {
  auto t = infer_numeric_type(node.lhs(), env);
  if (!t || !commutative_carrier(*t)) return false;
  auto u = infer_numeric_type(node.rhs(), env);
  if (!u || !commutative_carrier(*u)) return false;
  return *t == *u || *t == "#lit" || *u == "#lit";
}

bool is_logical_pair(BinOp op) { return op == BinOp::And || op == BinOp::Or; }

bool commutativity_applicable(const Expr& node, const TypeEnv& env) {
  if (node.kind != Expr::Kind::Binary) return false;
  if (is_logical_pair(node.bop)) return true;
  if (node.bop == BinOp::Add || node.bop == BinOp::Mul) {
    return arithmetic_commutative_node(node, env);
  }
  return false;
}

bool associativity_applicable(const Expr& node, const TypeEnv& env) {
  if (node.kind != Expr::Kind::Binary) return false;
  BinOp op = node.bop;
  if (!is_logical_pair(op) && op != BinOp::Add && op != BinOp::Mul) return false;
  bool shape = (node.lhs()->kind == Expr::Kind::Binary && node.lhs()->bop == op) ||
               (node.rhs()->kind == Expr::Kind::Binary && node.rhs()->bop == op);
  if (!shape) return false;
  if (is_logical_pair(op)) return true;
  return arithmetic_commutative_node(node, env);
}

BinOp lattice_dual(BinOp op) { return op == BinOp::And ? BinOp::Or : BinOp::And; }

// (a op2 b) op1 (a op2 c)  ->  shared factor a on the left, or
// (b op2 a) op1 (c op2 a)  ->  shared factor a on the right.
struct Factoring {
  ExprPtr common;
  ExprPtr left_rest;
  ExprPtr right_rest;
  bool common_on_left;
};

std::optional<Factoring> find_factoring(const Expr& node, BinOp outer, BinOp inner) {
  if (node.kind != Expr::Kind::Binary || node.bop != outer) return std::nullopt;
  const ExprPtr& l = node.lhs();
  const ExprPtr& r = node.rhs();
  if (l->kind != Expr::Kind::Binary || l->bop != inner) return std::nullopt;
  if (r->kind != Expr::Kind::Binary || r->bop != inner) return std::nullopt;
  if (expr_equal(l->lhs(), r->lhs())) {
    return Factoring{l->lhs(), l->rhs(), r->rhs(), true};
  }
  if (expr_equal(l->rhs(), r->rhs())) {
    return Factoring{l->rhs(), l->lhs(), r->lhs(), false};
  }
  return std::nullopt;
}

bool distributivity_applicable(const Expr& node, const TypeEnv& env) {
  if (node.kind != Expr::Kind::Binary) return false;
  switch (node.bop) {
    case BinOp::Mul: {  // expand * over +
      bool shape = (node.lhs()->kind == Expr::Kind::Binary && node.lhs()->bop == BinOp::Add) ||
                   (node.rhs()->kind == Expr::Kind::Binary && node.rhs()->bop == BinOp::Add);
      return shape && arithmetic_commutative_node(node, env);
    }
    case BinOp::Add: {  // factor a*b + a*c
      auto f = find_factoring(node, BinOp::Add, BinOp::Mul);
      return f.has_value() && arithmetic_commutative_node(node, env);
    }
    case BinOp::And:
    case BinOp::Or: {
      BinOp dual = lattice_dual(node.bop);
      if (find_factoring(node, node.bop, dual)) return true;
      return (node.lhs()->kind == Expr::Kind::Binary && node.lhs()->bop == dual) ||
             (node.rhs()->kind == Expr::Kind::Binary && node.rhs()->bop == dual);
    }
    default:
      return false;
  }
}

bool is_not(const ExprPtr& e) {
  return e->kind == Expr::Kind::Unary && e->uop == UnOp::Not;
}

bool demorgan_applicable(const Expr& node) {
  if (node.kind == Expr::Kind::Unary && node.uop == UnOp::Not) {
    const ExprPtr& inner = node.operand();
    return inner->kind == Expr::Kind::Binary && is_logical_pair(inner->bop);
  }
  if (node.kind == Expr::Kind::Binary && is_logical_pair(node.bop)) {
    return is_not(node.lhs()) && is_not(node.rhs());
  }
  return false;
}

ExprPtr apply_commutativity(const ExprPtr& node) {
  return Expr::binary(node->bop, node->rhs(), node->lhs());
}

ExprPtr apply_associativity(const ExprPtr& node) {
  BinOp op = node->bop;
  if (node->lhs()->kind == Expr::Kind::Binary && node->lhs()->bop == op) {
    // (a op b) op c -> a op (b op c)
    const ExprPtr& l = node->lhs();
    return Expr::binary(op, l->lhs(), Expr::binary(op, l->rhs(), node->rhs()));
  }
  // a op (b op c) -> (a op b) op c
  const ExprPtr& r = node->rhs();
  return Expr::binary(op, Expr::binary(op, node->lhs(), r->lhs()), r->rhs());
}

ExprPtr apply_distributivity(const ExprPtr& node) {
  switch (node->bop) {
    case BinOp::Mul: {
      if (node->rhs()->kind == Expr::Kind::Binary && node->rhs()->bop == BinOp::Add) {
        // a * (b + c) -> a * b + a * c
        const ExprPtr& a = node->lhs();
        const ExprPtr& sum = node->rhs();
        return Expr::binary(BinOp::Add, Expr::binary(BinOp::Mul, a, sum->lhs()),
                            Expr::binary(BinOp::Mul, a, sum->rhs()));
      }
      // (a + b) * c -> a * c + b * c
      const ExprPtr& sum = node->lhs();
      const ExprPtr& c = node->rhs();
      return Expr::binary(BinOp::Add, Expr::binary(BinOp::Mul, sum->lhs(), c),
                          Expr::binary(BinOp::Mul, sum->rhs(), c));
    }
    case BinOp::Add: {
      auto f = find_factoring(*node, BinOp::Add, BinOp::Mul);
      if (!f) throw std::logic_error("distributivity: no factoring on + node");
      ExprPtr sum = Expr::binary(BinOp::Add, f->left_rest, f->right_rest);
      return f->common_on_left ? Expr::binary(BinOp::Mul, f->common, sum)
                               : Expr::binary(BinOp::Mul, sum, f->common);
    }
    case BinOp::And:
    case BinOp::Or: {
      BinOp outer = node->bop;
      BinOp dual = lattice_dual(outer);
      if (auto f = find_factoring(*node, outer, dual)) {
        // (P ∘ Q) • (P ∘ R) -> P ∘ (Q • R), preferring the factoring direction
        ExprPtr rest = Expr::binary(outer, f->left_rest, f->right_rest);
        return f->common_on_left ? Expr::binary(dual, f->common, rest)
                                 : Expr::binary(dual, rest, f->common);
      }
      if (node->rhs()->kind == Expr::Kind::Binary && node->rhs()->bop == dual) {
        // P • (Q ∘ R) -> (P • Q) ∘ (P • R)
        const ExprPtr& p = node->lhs();
        const ExprPtr& qr = node->rhs();
        return Expr::binary(dual, Expr::binary(outer, p, qr->lhs()),
                            Expr::binary(outer, p, qr->rhs()));
      }
      // (Q ∘ R) • P -> (Q • P) ∘ (R • P)
      const ExprPtr& qr = node->lhs();
      const ExprPtr& p = node->rhs();
      return Expr::binary(dual, Expr::binary(outer, qr->lhs(), p),
                          Expr::binary(outer, qr->rhs(), p));
    }
    default:
      throw std::logic_error("distributivity: unsupported node");
  }
}

ExprPtr apply_demorgan(const ExprPtr& node) {
  if (node->kind == Expr::Kind::Unary) {
    const ExprPtr& inner = node->operand();
    BinOp dual = lattice_dual(inner->bop);
    return Expr::binary(dual, Expr::unary(UnOp::Not, inner->lhs()),
                        Expr::unary(UnOp::Not, inner->rhs()));
  }
  BinOp dual = lattice_dual(node->bop);
  return Expr::unary(UnOp::Not,
                     Expr::binary(dual, node->lhs()->operand(), node->rhs()->operand()));
}

RelOp dual_rel(RelOp rel) {
  switch (rel) {
    case RelOp::Lt: return RelOp::Gt;
    case RelOp::Gt: return RelOp::Lt;
    case RelOp::Le: return RelOp::Ge;
    case RelOp::Ge: return RelOp::Le;
    default: throw std::logic_error("dual_rel: not an order relation");
  }
}

}  // namespace

bool applicable(RuleId rule, const Expr& node, const TypeEnv& env) {
  switch (rule) {
    case RuleId::HypothesisReordering:
      return false;  // statement level only
    case RuleId::Commutativity:
      return commutativity_applicable(node, env);
    case RuleId::Associativity:
      return associativity_applicable(node, env);
    case RuleId::Distributivity:
      return distributivity_applicable(node, env);
    case RuleId::DeMorgan:
      return demorgan_applicable(node);
    case RuleId::SymmetricOperandSwap:
      return node.kind == Expr::Kind::Relation &&
             (node.rel == RelOp::Eq || node.rel == RelOp::Ne);
    case RuleId::DualRelationConversion:
      return node.kind == Expr::Kind::Relation &&
             (node.rel == RelOp::Lt || node.rel == RelOp::Gt || node.rel == RelOp::Le ||
              node.rel == RelOp::Ge);
  }
  return false;
}

namespace {

// deps[i] = indices of hypotheses whose label occurs free in hypothesis i.
std::vector<std::set<std::size_t>> hypothesis_deps(const Statement& stmt) {
  std::vector<std::set<std::size_t>> deps(stmt.hypotheses.size());
  for (std::size_t i = 0; i < stmt.hypotheses.size(); ++i) {
    auto fv = free_vars(stmt.hypotheses[i].prop);
    for (std::size_t j = 0; j < stmt.hypotheses.size(); ++j) {
      if (j != i && fv.count(stmt.hypotheses[j].label)) deps[i].insert(j);
    }
  }
  return deps;
}

bool order_legal(const std::vector<std::set<std::size_t>>& deps,
                 const std::vector<std::size_t>& perm) {
  std::set<std::size_t> placed;
  for (std::size_t idx : perm) {
    for (std::size_t d : deps[idx]) {
      if (!placed.count(d)) return false;
    }
    placed.insert(idx);
  }
  return true;
}

}  // namespace

bool applicable_statement(RuleId rule, const Statement& stmt) {
  if (rule != RuleId::HypothesisReordering) return false;
  const std::size_t n = stmt.hypotheses.size();
  if (n < 2) return false;
  // More than one legal order exists iff some adjacent transposition of the
  // current order is legal (linear-extension graphs are connected).
  auto deps = hypothesis_deps(stmt);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (!deps[i + 1].count(i)) return true;
  }
  return false;
}

ExprPtr apply_rule(RuleId rule, const ExprPtr& node, const TypeEnv& env) {
  if (!applicable(rule, *node, env)) {
    throw std::logic_error("apply_rule: rule '" + rule_info(rule).name +
                           "' not applicable at node '" + print_expr(node) + "'");
  }
  switch (rule) {
    case RuleId::Commutativity:
      return apply_commutativity(node);
    case RuleId::Associativity:
      return apply_associativity(node);
    case RuleId::Distributivity:
      return apply_distributivity(node);
    case RuleId::DeMorgan:
      return apply_demorgan(node);
    case RuleId::SymmetricOperandSwap:
      return Expr::relation(node->rel, node->rhs(), node->lhs());
    case RuleId::DualRelationConversion:
      return Expr::relation(dual_rel(node->rel), node->rhs(), node->lhs());
    default:
      throw std::logic_error("apply_rule: not a node-level rule");
  }
}

bool hypothesis_order_legal(const Statement& stmt, const std::vector<std::size_t>& perm) {
  if (perm.size() != stmt.hypotheses.size()) return false;
  return order_legal(hypothesis_deps(stmt), perm);
}

std::vector<std::vector<std::size_t>> legal_hypothesis_orders(const Statement& stmt,
                                                              std::size_t max_orders) {
  std::vector<std::size_t> perm(stmt.hypotheses.size());
  for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
  auto deps = hypothesis_deps(stmt);
  std::vector<std::vector<std::size_t>> out;
  do {
    if (order_legal(deps, perm)) {
      out.push_back(perm);
      if (out.size() >= max_orders) break;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

Statement apply_hypothesis_order(const Statement& stmt, const std::vector<std::size_t>& perm) {
  Statement out = stmt;
  out.hypotheses.clear();
  out.hypotheses.reserve(perm.size());
  for (std::size_t idx : perm) out.hypotheses.push_back(stmt.hypotheses[idx]);
  return out;
}

Statement reorder_hypotheses(const Statement& stmt, Rng& rng) {
  const std::size_t n = stmt.hypotheses.size();
  if (n < 2) return stmt;
  auto deps = hypothesis_deps(stmt);

  auto identity = [&](const std::vector<std::size_t>& p) {
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (p[i] != i) return false;
    }
    return true;
  };

  // Rejection-sample a legal permutation; uniform over the legal set.
  auto draw_legal = [&]() {
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;
    for (int attempt = 0; attempt < 256; ++attempt) {
      rng.shuffle(perm);
      if (order_legal(deps, perm)) return perm;
    }
    // dependency-dense statements: fall back to the identity, always legal
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;
    return perm;
  };

  std::vector<std::size_t> perm = draw_legal();
  if (identity(perm)) {
    perm = draw_legal();  // favor visible change: identity re-sampled once
    if (identity(perm)) return stmt;
  }
  return apply_hypothesis_order(stmt, perm);
}

}  // namespace leanevo
