#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "leanevo/dataset.hpp"
#include "leanevo/engine.hpp"
#include "leanevo/llm.hpp"
#include "leanevo/prompts.hpp"
#include "leanevo/verify.hpp"

namespace leanevo {

constexpr int kSchemaVersion = 1;

struct MockRules {
  bool enabled{false};
  std::string fixtures_dir;
  struct LlmRule {
    std::string match;
    std::string and_match;  // optional second required substring
    std::string text;       // inline response, or loaded from `file`
    std::string file;
  };
  std::vector<LlmRule> llm_rules;
  std::vector<MockCompiler::Rule> compiler_rules;
};

struct PipelineConfig {
  std::string input;
  std::string input_format{"jsonl"};
  std::string output{"out/corpus.jsonl"};
  std::string checkpoint;  // empty disables resume journaling
  std::set<Method> methods{Method::Domain, Method::Difficulty, Method::AST};
  std::uint64_t seed{0};
  std::size_t sample_size{0};  // 0 = all
  int jobs{0};  // 0 = one worker per hardware thread
  bool dedup{true};
  bool evolve_seeds_with_ast{true};
  std::vector<std::string> decontamination;  // benchmark dataset paths

  EngineConfig engine;
  LlmEndpointConfig llm;
  double judge_temperature{0.0};
  int max_in_flight{0};
  int per_minute{0};
  CompilerConfig compiler;
  bool difficulty_filter{true};
  MockRules mock;

  static PipelineConfig from_json(const nlohmann::json& j);
  static PipelineConfig load(const std::string& path);
  void validate() const;
};

// Per-stage funnel counters. Conservation identities are checked by
// `conservation_violations`; an empty result is the invariant.
struct FunnelStats {
  std::size_t seeds_in{0};
  std::size_t seeds_sampled{0};
  std::size_t seeds_unparseable{0};
  std::size_t llm_calls{0};
  std::size_t llm_failures{0};
  std::size_t variant_diagnostics{0};
  std::size_t domain_mismatch_drops{0};
  std::size_t variants_raised{0};
  std::size_t compile_pass{0};
  std::size_t compile_fail{0};
  std::size_t skipped_compile{0};
  std::size_t repair_attempts{0};
  std::size_t repaired_ok{0};
  std::size_t reject_syntax{0};
  std::size_t skipped_repair{0};
  std::size_t reject_consistency{0};
  std::size_t reject_correctness{0};
  std::size_t reject_difficulty{0};
  std::size_t skipped_judge{0};
  std::size_t accepted{0};
  std::size_t rejected{0};
  std::size_t skipped{0};
  std::size_t ast_inputs{0};
  std::size_t ast_variants{0};
  std::size_t ast_unparseable{0};
  std::size_t dedup_drops{0};
  std::size_t decontamination_drops{0};
  std::size_t output_records{0};
  std::map<std::string, std::size_t> domain_before;
  std::map<std::string, std::size_t> domain_after;

  void merge(const FunnelStats& other);
  nlohmann::json to_json() const;
  static FunnelStats from_json(const nlohmann::json& j);
  std::string render_table() const;
  std::vector<std::string> conservation_violations() const;
};

struct PipelineResult {
  FunnelStats stats;
  std::vector<nlohmann::json> records;
  std::vector<std::pair<std::string, std::string>> decontamination_drops;  // corpus id, benchmark id
};

// Builds the LLM client / compiler the config describes (mock or live).
// Evolution and judging share the client; temperatures differ per call.
std::unique_ptr<LlmClient> make_llm_client(const PipelineConfig& cfg);
std::unique_ptr<Compiler> make_compiler(const PipelineConfig& cfg);

// Fig-2 order: LLM fan-out, verification funnel, then AST diversification
// of accepted statements (and seeds when configured). Writes the corpus to
// cfg.output and stats to cfg.output + ".stats.json".
PipelineResult run_pipeline(const PipelineConfig& cfg);

// Domain histogram of a corpus file; pairs with a second corpus for a
// before/after delta. Records without a label count as "Unlabeled" unless
// a classifier client is supplied.
struct StatsReport {
  std::map<std::string, std::size_t> histogram;
  std::map<std::string, std::size_t> other_histogram;
  bool has_other{false};
  // (record id, domain) decided by the classifier, for reviewable export
  std::vector<std::pair<std::string, std::string>> classified;
  nlohmann::json to_json() const;
  std::string render_table() const;
  void write_classification_csv(const std::string& path) const;
};
StatsReport corpus_stats(const std::string& corpus_path, const std::string& compare_path = "",
                         LlmClient* classifier = nullptr);

// Statement-level classifier prompt used when `classifier` is given.
std::string render_classify_prompt(const std::string& stmt, const DomainList& domains);

struct DecontaminationResult {
  std::vector<nlohmann::json> kept;
  std::vector<std::pair<std::string, std::string>> drops;     // exact matches
  std::vector<std::pair<std::string, std::string>> advisory;  // near duplicates
};

// Drops corpus records whose alpha-normalized structural hash matches a
// benchmark statement; near duplicates (same token multiset) are flagged
// but kept.
DecontaminationResult decontaminate(const std::vector<nlohmann::json>& corpus,
                                    const std::vector<std::string>& benchmark_paths);

// Dedup key: structural hash when the statement parses, whitespace-
// normalized text hash otherwise.
std::string dedup_key(const std::string& formal_statement);
std::string near_dup_key(const std::string& formal_statement);

}  // namespace leanevo
