#include "leanevo/engine.hpp"

#include <deque>
#include <functional>
#include <stdexcept>
#include <unordered_set>

#include "leanevo/hash.hpp"
#include "leanevo/printer.hpp"

namespace leanevo {

void EngineConfig::validate() const {
  if (probability < 0.0 || probability > 1.0) {
    throw std::invalid_argument("engine: probability must lie in [0, 1]");
  }
  if (enabled_rules.empty()) {
    throw std::invalid_argument("engine: enabled_rules must be non-empty");
  }
  if (variants_per_statement < 1) {
    throw std::invalid_argument("engine: variants_per_statement must be >= 1");
  }
  if (max_rule_applications < 1) {
    throw std::invalid_argument("engine: max_rule_applications must be >= 1");
  }
}

const char* method_name(Method m) {
  switch (m) {
    case Method::AST: return "AST";
    case Method::Domain: return "Domain";
    case Method::Difficulty: return "Difficulty";
  }
  return "?";
}

const char* status_name(RecordStatus s) {
  switch (s) {
    case RecordStatus::Pending: return "Pending";
    case RecordStatus::Verified: return "Verified";
    case RecordStatus::Rejected: return "Rejected";
    case RecordStatus::Skipped: return "Skipped";
  }
  return "?";
}

namespace {

std::vector<RuleId> node_rules(const std::set<RuleId>& enabled) {
  std::vector<RuleId> out;
  for (const auto& info : rule_catalog()) {
    if (info.scope == RuleScope::NodeLevel && enabled.count(info.id)) out.push_back(info.id);
  }
  return out;
}

// Child type environments: quantifier bodies gain the binder, integral
// bodies shadow the integration variable, everything else inherits.
TypeEnv child_env(const Expr& node, std::size_t child_idx, const TypeEnv& env) {
  if (node.kind == Expr::Kind::Quantifier) return env.extended(node.binder);
  if (node.is_integral() && child_idx == 3) {
    QuantBinder shadow;
    shadow.names.push_back(node.args[0]->name);
    return env.extended(shadow);
  }
  return env;
}

struct Traversal {
  const EngineConfig& cfg;
  const std::vector<RuleId>& rules;
  Rng& rng;
  int remaining;
  std::vector<RuleApplication>& log;

  ExprPtr visit(const ExprPtr& node, const TypeEnv& env, std::vector<int>& path) {
    ExprPtr current = node;
    if (remaining > 0) {
      std::vector<RuleId> here;
      for (RuleId r : rules) {
        if (applicable(r, *current, env)) here.push_back(r);
      }
      if (!here.empty() && rng.chance(cfg.probability)) {
        RuleId chosen = here[rng.pick(here.size())];
        ExprPtr after = apply_rule(chosen, current, env);
        log.push_back(RuleApplication{chosen, path, print_expr(current), print_expr(after)});
        --remaining;
        current = after;
      }
    }
    if (current->args.empty()) return current;
    Expr copy = *current;
    bool changed = false;
    for (std::size_t i = 0; i < copy.args.size(); ++i) {
      path.push_back(static_cast<int>(i));
      ExprPtr next = visit(copy.args[i], child_env(*current, i, env), path);
      path.pop_back();
      if (next != copy.args[i]) {
        copy.args[i] = next;
        changed = true;
      }
    }
    return changed ? std::make_shared<const Expr>(std::move(copy)) : current;
  }
};

std::string hypothesis_order_string(const Statement& stmt) {
  std::string out;
  for (const auto& h : stmt.hypotheses) {
    if (!out.empty()) out += ' ';
    out += h.label;
  }
  return out;
}

}  // namespace

std::vector<EvolutionRecord> evolve_ast(const Statement& stmt, const EngineConfig& cfg,
                                        const std::string& seed_id) {
  cfg.validate();
  Rng rng(cfg.rng_seed);
  TypeEnv env = TypeEnv::from_statement(stmt);
  std::vector<RuleId> rules = node_rules(cfg.enabled_rules);
  bool reorder_enabled = cfg.enabled_rules.count(RuleId::HypothesisReordering) > 0;

  std::unordered_set<std::uint64_t> seen{structural_hash(stmt)};
  std::vector<EvolutionRecord> out;

  for (int v = 0; v < cfg.variants_per_statement; ++v) {
    Statement variant = stmt;
    std::vector<RuleApplication> log;
    int remaining = cfg.max_rule_applications;

    if (reorder_enabled && applicable_statement(RuleId::HypothesisReordering, variant) &&
        rng.chance(cfg.probability)) {
      std::string before = hypothesis_order_string(variant);
      variant = reorder_hypotheses(variant, rng);
      std::string after = hypothesis_order_string(variant);
      if (after != before) {
        log.push_back(RuleApplication{RuleId::HypothesisReordering, {}, before, after});
        --remaining;
      }
    }

    Traversal traversal{cfg, rules, rng, remaining, log};
    std::vector<int> path;
    for (std::size_t i = 0; i < variant.hypotheses.size(); ++i) {
      path.push_back(static_cast<int>(i));
      variant.hypotheses[i].prop = traversal.visit(variant.hypotheses[i].prop, env, path);
      path.pop_back();
    }
    path.push_back(static_cast<int>(variant.hypotheses.size()));
    variant.goal = traversal.visit(variant.goal, env, path);
    path.pop_back();

    if (!seen.insert(structural_hash(variant)).second) continue;

    variant.name = stmt.name + cfg.name_suffix;
    EvolutionRecord rec;
    rec.seed_statement_id = seed_id;
    rec.method = Method::AST;
    rec.applications = std::move(log);
    rec.rng_seed = cfg.rng_seed;
    rec.output = print_statement(variant);
    rec.status = RecordStatus::Verified;
    out.push_back(std::move(rec));
  }
  return out;
}

namespace {

void enumerate_node_rewrites(const ExprPtr& node, const TypeEnv& env,
                             const std::vector<RuleId>& rules,
                             const std::function<void(const std::vector<int>&, ExprPtr)>& emit,
                             std::vector<int>& path) {
  for (RuleId r : rules) {
    if (applicable(r, *node, env)) {
      emit(path, apply_rule(r, node, env));
    }
  }
  for (std::size_t i = 0; i < node->args.size(); ++i) {
    path.push_back(static_cast<int>(i));
    enumerate_node_rewrites(node->args[i], child_env(*node, i, env), rules, emit, path);
    path.pop_back();
  }
}

}  // namespace

bool Closure::contains_text(const std::string& lean_text) const {
  for (const auto& s : statements) {
    if (same_modulo_whitespace(print_statement(s), lean_text)) return true;
  }
  return false;
}

Closure enumerate_closure(const Statement& stmt, const std::set<RuleId>& rules, int depth,
                          std::size_t max_size) {
  Closure closure;
  TypeEnv env = TypeEnv::from_statement(stmt);
  std::vector<RuleId> nrules = node_rules(rules);
  bool reorder = rules.count(RuleId::HypothesisReordering) > 0;

  std::unordered_set<std::uint64_t> seen;
  std::vector<Statement> frontier;

  // Adds a statement and, when reordering is enabled, its whole
  // hypothesis-permutation orbit at the same depth.
  auto discover = [&](const Statement& s, std::vector<Statement>& level) {
    std::deque<Statement> pending{s};
    while (!pending.empty()) {
      Statement cur = std::move(pending.front());
      pending.pop_front();
      if (!seen.insert(structural_hash(cur)).second) continue;
      if (closure.statements.size() >= max_size) {
        closure.truncated = true;
        return;
      }
      closure.statements.push_back(cur);
      level.push_back(cur);
      if (reorder && cur.hypotheses.size() >= 2 && cur.hypotheses.size() <= 6) {
        for (const auto& perm : legal_hypothesis_orders(cur)) {
          pending.push_back(apply_hypothesis_order(cur, perm));
        }
      }
    }
  };

  discover(stmt, frontier);

  for (int d = 0; d < depth && !closure.truncated; ++d) {
    std::vector<Statement> next;
    for (const Statement& s : frontier) {
      auto emit_for = [&](std::size_t region, const ExprPtr& rewritten) {
        Statement t = s;
        if (region < s.hypotheses.size()) {
          t.hypotheses[region].prop = rewritten;
        } else {
          t.goal = rewritten;
        }
        discover(t, next);
      };
      for (std::size_t i = 0; i <= s.hypotheses.size(); ++i) {
        const ExprPtr& root = i < s.hypotheses.size() ? s.hypotheses[i].prop : s.goal;
        std::vector<int> path;
        enumerate_node_rewrites(
            root, env, nrules,
            [&](const std::vector<int>& p, ExprPtr after) {
              emit_for(i, replace_at(root, p, after));
            },
            path);
        if (closure.truncated) break;
      }
      if (closure.truncated) break;
    }
    frontier = std::move(next);
  }
  return closure;
}

bool same_modulo_whitespace(const std::string& a, const std::string& b) {
  auto strip = [](const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
      if (c != ' ' && c != '\t' && c != '\r' && c != '\n') out.push_back(c);
    }
    return out;
  };
  return strip(a) == strip(b);
}

}  // namespace leanevo
