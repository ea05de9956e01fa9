#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "leanevo/ast.hpp"
#include "leanevo/rules.hpp"

namespace leanevo {

struct EngineConfig {
  double probability{0.5};
  std::uint64_t rng_seed{0};
  std::set<RuleId> enabled_rules{all_rules()};
  int variants_per_statement{3};
  int max_rule_applications{8};
  std::string name_suffix{"_auged"};

  // Throws std::invalid_argument on out-of-range fields.
  void validate() const;
};

enum class Method { AST, Domain, Difficulty };
enum class RecordStatus { Pending, Verified, Rejected, Skipped };

const char* method_name(Method m);
const char* status_name(RecordStatus s);

// Provenance of one evolved statement. For method = AST the output is a
// pure function of (seed statement, rng_seed, config).
struct EvolutionRecord {
  std::string seed_statement_id;
  Method method{Method::AST};
  std::vector<RuleApplication> applications;           // AST
  std::map<std::string, std::string> metadata;         // LLM methods
  std::uint64_t rng_seed{0};
  std::string output;
  RecordStatus status{RecordStatus::Pending};
};

// One pass per variant: an optional statement-level hypothesis reorder
// (Bernoulli(p)), then a pre-order traversal of every hypothesis
// proposition and the goal drawing Bernoulli(p) at each node with at least
// one applicable enabled rule, applying one applicable rule chosen
// uniformly. Variants identical to the seed or to an earlier variant (by
// structural hash) are dropped.
std::vector<EvolutionRecord> evolve_ast(const Statement& stmt, const EngineConfig& cfg,
                                        const std::string& seed_id = "seed");

struct Closure {
  std::vector<Statement> statements;  // seed first, then by discovery order
  bool truncated{false};

  bool contains_text(const std::string& lean_text) const;
};

// BFS over single rule applications. Depth counts node-level rewrites;
// hypothesis reordering is an orbit closure applied to every discovered
// statement at no depth cost (the legal orders form a group, not a rewrite
// distance). Dedup is by structural hash; the seed sits at depth 0.
Closure enumerate_closure(const Statement& stmt, const std::set<RuleId>& rules, int depth,
                          std::size_t max_size = 20000);

// Whitespace-insensitive statement comparison used by the golden tests.
bool same_modulo_whitespace(const std::string& a, const std::string& b);

}  // namespace leanevo
