#include "leanevo/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include "leanevo/hash.hpp"
#include "leanevo/parser.hpp"
#include "leanevo/printer.hpp"
#include "leanevo/prompts.hpp"
#include "leanevo/variants.hpp"

namespace leanevo {

namespace fs = std::filesystem;
using json = nlohmann::json;

// --- config ------------------------------------------------------------

namespace {

std::set<Method> methods_from_json(const json& arr) {
  std::set<Method> out;
  for (const auto& m : arr) {
    std::string name = m.get<std::string>();
    if (name == "domain") out.insert(Method::Domain);
    else if (name == "difficulty") out.insert(Method::Difficulty);
    else if (name == "ast") out.insert(Method::AST);
    else throw std::invalid_argument("unknown method: " + name);
  }
  return out;
}

std::set<RuleId> rules_from_json(const json& arr) {
  std::set<RuleId> out;
  for (const auto& r : arr) {
    std::string name = r.get<std::string>();
    auto id = rule_from_name(name);
    if (!id) throw std::invalid_argument("unknown rule: " + name);
    out.insert(*id);
  }
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

PipelineConfig PipelineConfig::from_json(const json& j) {
  PipelineConfig cfg;
  cfg.input = j.value("input", cfg.input);
  cfg.input_format = j.value("input_format", cfg.input_format);
  cfg.output = j.value("output", cfg.output);
  cfg.checkpoint = j.value("checkpoint", cfg.checkpoint);
  if (j.contains("methods")) cfg.methods = methods_from_json(j["methods"]);
  cfg.seed = j.value("seed", cfg.seed);
  cfg.sample_size = j.value("sample_size", cfg.sample_size);
  cfg.jobs = j.value("jobs", cfg.jobs);
  cfg.dedup = j.value("dedup", cfg.dedup);
  cfg.evolve_seeds_with_ast = j.value("evolve_seeds_with_ast", cfg.evolve_seeds_with_ast);
  if (j.contains("decontamination")) {
    cfg.decontamination = j["decontamination"].get<std::vector<std::string>>();
  }
  if (j.contains("engine")) {
    const auto& e = j["engine"];
    cfg.engine.probability = e.value("probability", cfg.engine.probability);
    cfg.engine.variants_per_statement =
        e.value("variants_per_statement", cfg.engine.variants_per_statement);
    cfg.engine.max_rule_applications =
        e.value("max_rule_applications", cfg.engine.max_rule_applications);
    cfg.engine.name_suffix = e.value("name_suffix", cfg.engine.name_suffix);
    if (e.contains("rules")) cfg.engine.enabled_rules = rules_from_json(e["rules"]);
  }
  if (j.contains("llm")) {
    const auto& l = j["llm"];
    cfg.llm.base_url = l.value("base_url", cfg.llm.base_url);
    cfg.llm.path = l.value("path", cfg.llm.path);
    cfg.llm.model = l.value("model", cfg.llm.model);
    cfg.llm.api_key_env = l.value("api_key_env", cfg.llm.api_key_env);
    cfg.llm.max_retries = l.value("max_retries", cfg.llm.max_retries);
    cfg.llm.timeout_seconds = l.value("timeout_seconds", cfg.llm.timeout_seconds);
    cfg.llm.temperature = l.value("temperature", cfg.llm.temperature);
    cfg.llm.backoff_seconds = l.value("backoff_seconds", cfg.llm.backoff_seconds);
  }
  cfg.judge_temperature = j.value("judge_temperature", cfg.judge_temperature);
  if (j.contains("limits")) {
    cfg.max_in_flight = j["limits"].value("max_in_flight", cfg.max_in_flight);
    cfg.per_minute = j["limits"].value("per_minute", cfg.per_minute);
  }
  if (j.contains("verification")) {
    const auto& v = j["verification"];
    cfg.compiler.command = v.value("compiler_command", cfg.compiler.command);
    cfg.compiler.version_command = v.value("version_command", cfg.compiler.version_command);
    cfg.compiler.workspace = v.value("workspace", cfg.compiler.workspace);
    cfg.compiler.scratch_dir = v.value("scratch_dir", cfg.compiler.scratch_dir);
    cfg.compiler.header = v.value("header", cfg.compiler.header);
    cfg.compiler.timeout_seconds = v.value("timeout_seconds", cfg.compiler.timeout_seconds);
    cfg.compiler.batch_size = v.value("batch_size", cfg.compiler.batch_size);
    cfg.difficulty_filter = v.value("difficulty_filter", cfg.difficulty_filter);
  }
  if (j.contains("mock")) {
    const auto& m = j["mock"];
    cfg.mock.enabled = m.value("enabled", true);
    cfg.mock.fixtures_dir = m.value("fixtures_dir", cfg.mock.fixtures_dir);
    if (m.contains("llm_rules")) {
      for (const auto& r : m["llm_rules"]) {
        MockRules::LlmRule rule;
        rule.match = r.value("match", "");
        rule.and_match = r.value("and_match", "");
        rule.text = r.value("text", "");
        rule.file = r.value("file", "");
        cfg.mock.llm_rules.push_back(std::move(rule));
      }
    }
    if (m.contains("compiler_rules")) {
      for (const auto& r : m["compiler_rules"]) {
        MockCompiler::Rule rule;
        rule.match = r.value("match", "");
        rule.ok = r.value("ok", false);
        rule.infrastructure = r.value("infrastructure", false);
        rule.diagnostic.line = r.value("line", 1);
        rule.diagnostic.column = r.value("column", 1);
        rule.diagnostic.message = r.value("message", "mock compile error");
        cfg.mock.compiler_rules.push_back(std::move(rule));
      }
    }
  }
  return cfg;
}

PipelineConfig PipelineConfig::load(const std::string& path) {
  return from_json(json::parse(read_file(path)));
}

void PipelineConfig::validate() const {
  if (methods.empty()) throw std::invalid_argument("pipeline: no methods enabled");
  if (input.empty()) throw std::invalid_argument("pipeline: input path required");
  engine.validate();
  llm.validate();
}

// --- stats ---------------------------------------------------------------

void FunnelStats::merge(const FunnelStats& other) {
  seeds_in += other.seeds_in;
  seeds_sampled += other.seeds_sampled;
  seeds_unparseable += other.seeds_unparseable;
  llm_calls += other.llm_calls;
  llm_failures += other.llm_failures;
  variant_diagnostics += other.variant_diagnostics;
  domain_mismatch_drops += other.domain_mismatch_drops;
  variants_raised += other.variants_raised;
  compile_pass += other.compile_pass;
  compile_fail += other.compile_fail;
  skipped_compile += other.skipped_compile;
  repair_attempts += other.repair_attempts;
  repaired_ok += other.repaired_ok;
  reject_syntax += other.reject_syntax;
  skipped_repair += other.skipped_repair;
  reject_consistency += other.reject_consistency;
  reject_correctness += other.reject_correctness;
  reject_difficulty += other.reject_difficulty;
  skipped_judge += other.skipped_judge;
  accepted += other.accepted;
  rejected += other.rejected;
  skipped += other.skipped;
  ast_inputs += other.ast_inputs;
  ast_variants += other.ast_variants;
  ast_unparseable += other.ast_unparseable;
  dedup_drops += other.dedup_drops;
  decontamination_drops += other.decontamination_drops;
  output_records += other.output_records;
  for (const auto& [k, v] : other.domain_before) domain_before[k] += v;
  for (const auto& [k, v] : other.domain_after) domain_after[k] += v;
}

nlohmann::json FunnelStats::to_json() const {
  json j;
  j["seeds_in"] = seeds_in;
  j["seeds_sampled"] = seeds_sampled;
  j["seeds_unparseable"] = seeds_unparseable;
  j["llm_calls"] = llm_calls;
  j["llm_failures"] = llm_failures;
  j["variant_diagnostics"] = variant_diagnostics;
  j["domain_mismatch_drops"] = domain_mismatch_drops;
  j["variants_raised"] = variants_raised;
  j["compile_pass"] = compile_pass;
  j["compile_fail"] = compile_fail;
  j["skipped_compile"] = skipped_compile;
  j["repair_attempts"] = repair_attempts;
  j["repaired_ok"] = repaired_ok;
  j["reject_syntax"] = reject_syntax;
  j["skipped_repair"] = skipped_repair;
  j["reject_consistency"] = reject_consistency;
  j["reject_correctness"] = reject_correctness;
  j["reject_difficulty"] = reject_difficulty;
  j["skipped_judge"] = skipped_judge;
  j["accepted"] = accepted;
  j["rejected"] = rejected;
  j["skipped"] = skipped;
  j["ast_inputs"] = ast_inputs;
  j["ast_variants"] = ast_variants;
  j["ast_unparseable"] = ast_unparseable;
  j["dedup_drops"] = dedup_drops;
  j["decontamination_drops"] = decontamination_drops;
  j["output_records"] = output_records;
  j["domain_before"] = domain_before;
  j["domain_after"] = domain_after;
  j["conservation_violations"] = conservation_violations();
  return j;
}

FunnelStats FunnelStats::from_json(const json& j) {
  FunnelStats s;
  s.seeds_in = j.value("seeds_in", 0u);
  s.seeds_sampled = j.value("seeds_sampled", 0u);
  s.seeds_unparseable = j.value("seeds_unparseable", 0u);
  s.llm_calls = j.value("llm_calls", 0u);
  s.llm_failures = j.value("llm_failures", 0u);
  s.variant_diagnostics = j.value("variant_diagnostics", 0u);
  s.domain_mismatch_drops = j.value("domain_mismatch_drops", 0u);
  s.variants_raised = j.value("variants_raised", 0u);
  s.compile_pass = j.value("compile_pass", 0u);
  s.compile_fail = j.value("compile_fail", 0u);
  s.skipped_compile = j.value("skipped_compile", 0u);
  s.repair_attempts = j.value("repair_attempts", 0u);
  s.repaired_ok = j.value("repaired_ok", 0u);
  s.reject_syntax = j.value("reject_syntax", 0u);
  s.skipped_repair = j.value("skipped_repair", 0u);
  s.reject_consistency = j.value("reject_consistency", 0u);
  s.reject_correctness = j.value("reject_correctness", 0u);
  s.reject_difficulty = j.value("reject_difficulty", 0u);
  s.skipped_judge = j.value("skipped_judge", 0u);
  s.accepted = j.value("accepted", 0u);
  s.rejected = j.value("rejected", 0u);
  s.skipped = j.value("skipped", 0u);
  s.ast_inputs = j.value("ast_inputs", 0u);
  s.ast_variants = j.value("ast_variants", 0u);
  s.ast_unparseable = j.value("ast_unparseable", 0u);
  s.dedup_drops = j.value("dedup_drops", 0u);
  s.decontamination_drops = j.value("decontamination_drops", 0u);
  s.output_records = j.value("output_records", 0u);
  if (j.contains("domain_before")) {
    s.domain_before = j["domain_before"].get<std::map<std::string, std::size_t>>();
  }
  if (j.contains("domain_after")) {
    s.domain_after = j["domain_after"].get<std::map<std::string, std::size_t>>();
  }
  return s;
}

std::vector<std::string> FunnelStats::conservation_violations() const {
  std::vector<std::string> out;
  auto check = [&](bool ok, const char* what) {
    if (!ok) out.push_back(what);
  };
  check(variants_raised == compile_pass + compile_fail + skipped_compile,
        "variants_raised != compile_pass + compile_fail + skipped_compile");
  check(compile_fail == repaired_ok + reject_syntax + skipped_repair,
        "compile_fail != repaired_ok + reject_syntax + skipped_repair");
  check(compile_pass + repaired_ok == accepted + reject_consistency + reject_correctness +
                                          reject_difficulty + skipped_judge,
        "judged inputs != accepted + judge rejects + skipped_judge");
  check(rejected == reject_syntax + reject_consistency + reject_correctness + reject_difficulty,
        "rejected != sum of rejection reasons");
  check(skipped == skipped_compile + skipped_repair + skipped_judge,
        "skipped != sum of per-stage skips");
  check(variants_raised == accepted + rejected + skipped,
        "variants_raised != accepted + rejected + skipped");
  check(output_records + dedup_drops + decontamination_drops == accepted + ast_variants,
        "output_records + drops != accepted + ast_variants");
  std::size_t after_total = 0;
  for (const auto& [k, v] : domain_after) after_total += v;
  check(after_total == output_records, "domain_after histogram total != output_records");
  return out;
}

std::string FunnelStats::render_table() const {
  std::ostringstream os;
  auto row = [&](const char* k, std::size_t v) {
    os << "  " << k;
    for (std::size_t i = std::string(k).size(); i < 28; ++i) os << ' ';
    os << v << '\n';
  };
  os << "funnel:\n";
  row("seeds in", seeds_in);
  row("seeds sampled", seeds_sampled);
  row("llm calls", llm_calls);
  row("llm failures", llm_failures);
  row("variants raised", variants_raised);
  row("compile pass", compile_pass);
  row("compile fail", compile_fail);
  row("repair attempts", repair_attempts);
  row("repaired ok", repaired_ok);
  row("rejected: syntax", reject_syntax);
  row("rejected: consistency", reject_consistency);
  row("rejected: correctness", reject_correctness);
  row("rejected: difficulty", reject_difficulty);
  row("accepted", accepted);
  row("skipped", skipped);
  row("ast inputs", ast_inputs);
  row("ast variants", ast_variants);
  row("dedup drops", dedup_drops);
  row("decontamination drops", decontamination_drops);
  row("output records", output_records);
  auto hist = [&](const char* title, const std::map<std::string, std::size_t>& h) {
    os << title << '\n';
    for (const auto& [k, v] : h) {
      os << "  " << k;
      for (std::size_t i = k.size(); i < 28; ++i) os << ' ';
      os << v << '\n';
    }
  };
  hist("domains before:", domain_before);
  hist("domains after:", domain_after);
  return os.str();
}

// --- backends ------------------------------------------------------------

std::unique_ptr<LlmClient> make_llm_client(const PipelineConfig& cfg) {
  if (cfg.mock.enabled) {
    auto mock = std::make_unique<MockLlmClient>(cfg.mock.fixtures_dir);
    for (const auto& rule : cfg.mock.llm_rules) {
      std::string text = rule.text;
      if (!rule.file.empty()) {
        fs::path p(rule.file);
        if (p.is_relative() && !cfg.mock.fixtures_dir.empty()) {
          p = fs::path(cfg.mock.fixtures_dir) / p;
        }
        text = read_file(p.string());
      }
      mock->add_rule(rule.match, std::move(text), rule.and_match);
    }
    return mock;
  }
  std::shared_ptr<RateLimiter> limiter;
  if (cfg.max_in_flight > 0 || cfg.per_minute > 0) {
    limiter = std::make_shared<RateLimiter>(cfg.max_in_flight, cfg.per_minute);
  }
  auto client = std::make_unique<ChatClient>(cfg.llm, make_http_transport(cfg.llm), limiter);
  client->set_logger([](const std::string& line) { std::clog << line << '\n'; });
  return client;
}

std::unique_ptr<Compiler> make_compiler(const PipelineConfig& cfg) {
  if (cfg.mock.enabled) {
    auto mock = std::make_unique<MockCompiler>();
    for (const auto& rule : cfg.mock.compiler_rules) mock->add_rule(rule);
    return mock;
  }
  return std::make_unique<LeanCompiler>(cfg.compiler);
}

// --- run -------------------------------------------------------------------

namespace {

json applications_to_json(const std::vector<RuleApplication>& apps) {
  json out = json::array();
  for (const auto& a : apps) {
    out.push_back(json{{"rule", rule_info(a.rule).name},
                       {"node_path", a.node_path},
                       {"before", a.before},
                       {"after", a.after}});
  }
  return out;
}

json verification_summary(const VerificationReport& report) {
  json v;
  v["compile_ok"] = report.compile.ok;
  v["repaired"] = report.repaired.has_value();
  for (const auto& verdict : report.verdicts) {
    v[std::string(aspect_name(verdict.aspect))] = verdict.verdict;
  }
  v["final"] = final_name(report.final);
  if (!report.reason.empty()) v["reason"] = report.reason;
  return v;
}

struct SeedOutcome {
  FunnelStats delta;
  std::vector<json> records;

  json to_json() const {
    return json{{"delta", delta.to_json()}, {"records", records}};
  }
  static SeedOutcome from_json(const json& j) {
    SeedOutcome out;
    out.delta = FunnelStats::from_json(j.at("delta"));
    for (const auto& r : j.at("records")) out.records.push_back(r);
    return out;
  }
};

struct VariantWork {
  std::string id;
  Method method;
  std::map<std::string, std::string> metadata;
  Variant variant;
};

// Verification outcome classification for the funnel counters; the stage
// prefix in `reason` tells skipped records apart.
void tally_report(FunnelStats& stats, const VerificationReport& report) {
  bool skipped_at_compile = report.final == VerificationReport::Final::Skipped &&
                            report.reason.rfind("compile:", 0) == 0;
  if (skipped_at_compile) {
    ++stats.skipped_compile;
    ++stats.skipped;
    return;
  }
  if (report.compile.ok) {
    ++stats.compile_pass;
  } else {
    ++stats.compile_fail;
    ++stats.repair_attempts;
  }
  if (report.repaired && report.repaired->compile.ok) ++stats.repaired_ok;
  switch (report.final) {
    case VerificationReport::Final::Accepted:
      ++stats.accepted;
      break;
    case VerificationReport::Final::Rejected:
      ++stats.rejected;
      if (report.reason == "syntax") ++stats.reject_syntax;
      else if (report.reason == "consistency") ++stats.reject_consistency;
      else if (report.reason == "correctness") ++stats.reject_correctness;
      else if (report.reason == "difficulty") ++stats.reject_difficulty;
      break;
    case VerificationReport::Final::Skipped:
      ++stats.skipped;
      if (report.reason.rfind("repair:", 0) == 0) {
        ++stats.skipped_repair;
      } else {
        ++stats.skipped_judge;
      }
      break;
  }
}

SeedOutcome process_seed(const PipelineConfig& cfg, const DatasetRecord& seed,
                         std::size_t seed_index, LlmClient& llm, Compiler& compiler) {
  SeedOutcome outcome;
  FunnelStats& stats = outcome.delta;

  auto seed_parse = parse_statement(seed.formal_statement);
  if (!seed_parse.ok()) ++stats.seeds_unparseable;

  // phase 1: LLM fan-out
  std::vector<VariantWork> work;
  auto raise_variants = [&](Method method, const std::string& prompt,
                            std::map<std::string, std::string> metadata, bool expect_domain) {
    ++stats.llm_calls;
    std::string response;
    try {
      response = llm.complete(prompt, cfg.llm.temperature);
    } catch (const LlmError&) {
      ++stats.llm_failures;
      return;  // seed skipped for this method; no variants raised
    }
    VariantParse parsed = parse_variants(response, expect_domain);
    stats.variant_diagnostics += parsed.diagnostics.size();
    std::size_t index = 0;
    for (auto& v : parsed.variants) {
      if (expect_domain && v.domain && seed.domain_label && *v.domain == *seed.domain_label) {
        ++stats.domain_mismatch_drops;
        continue;
      }
      VariantWork w;
      w.method = method;
      w.metadata = metadata;
      if (v.domain) w.metadata["domain"] = *v.domain;
      w.id = seed.id + "/" + (method == Method::Domain ? "domain" : "difficulty") + "/" +
             std::to_string(index++);
      w.variant = std::move(v);
      work.push_back(std::move(w));
    }
  };

  if (cfg.methods.count(Method::Domain)) {
    raise_variants(Method::Domain, render_domain_prompt(seed.formal_statement), {}, true);
  }
  if (cfg.methods.count(Method::Difficulty)) {
    int strategy_id = static_cast<int>(seed_index % 5) + 1;
    int direction = (seed_index / 5) % 2 == 0 ? +1 : -1;
    DifficultyStrategy strategy = DifficultyStrategy::get(strategy_id, direction);
    raise_variants(Method::Difficulty,
                   render_difficulty_prompt(seed.formal_statement, strategy),
                   {{"strategy", strategy.title},
                    {"strategy_id", std::to_string(strategy.id)},
                    {"direction", strategy.direction > 0 ? "+1" : "-1"}},
                   false);
  }
  stats.variants_raised += work.size();

  // phase 2: verification funnel
  struct AstInput {
    std::string parent_id;
    std::string statement;
    std::string nl;
    std::optional<std::string> domain;
  };
  std::vector<AstInput> ast_inputs;

  VerifyConfig vcfg;
  vcfg.difficulty_filter = cfg.difficulty_filter;
  vcfg.judge_temperature = cfg.judge_temperature;

  for (const auto& w : work) {
    VerificationReport report =
        verify(w.id, w.variant.nl_description, w.variant.formal_statement, compiler, llm, vcfg);
    tally_report(stats, report);
    if (report.final != VerificationReport::Final::Accepted) continue;

    std::optional<std::string> domain = w.variant.domain;
    if (!domain && w.method == Method::Difficulty) domain = seed.domain_label;

    json rec;
    rec["schema_version"] = kSchemaVersion;
    rec["id"] = w.id;
    rec["formal_statement"] = report.accepted_statement;
    rec["nl_description"] = w.variant.nl_description;
    if (domain) rec["domain"] = *domain;
    rec["provenance"] = json{{"seed_id", seed.id},
                             {"method", method_name(w.method)},
                             {"metadata", w.metadata},
                             {"rng_seed", cfg.seed},
                             {"status", status_name(RecordStatus::Verified)}};
    rec["verification"] = verification_summary(report);
    outcome.records.push_back(rec);

    if (cfg.methods.count(Method::AST)) {
      ast_inputs.push_back(
          AstInput{w.id, report.accepted_statement, w.variant.nl_description, domain});
    }
  }

  // phase 3: AST diversification of accepted statements (and the seed)
  if (cfg.methods.count(Method::AST)) {
    if (cfg.evolve_seeds_with_ast && seed_parse.ok()) {
      ast_inputs.push_back(AstInput{seed.id, seed.formal_statement,
                                    seed.nl_description.value_or(""), seed.domain_label});
    }
    for (const auto& input : ast_inputs) {
      ++stats.ast_inputs;
      auto parsed = parse_statement(input.statement);
      if (!parsed.ok()) {
        ++stats.ast_unparseable;
        continue;
      }
      EngineConfig engine_cfg = cfg.engine;
      engine_cfg.rng_seed = cfg.seed ^ fnv1a(input.parent_id);
      auto records = evolve_ast(*parsed.statement, engine_cfg, input.parent_id);
      stats.ast_variants += records.size();
      json rule_names = json::array();
      for (RuleId r : engine_cfg.enabled_rules) rule_names.push_back(rule_info(r).name);
      json engine_echo = {{"probability", engine_cfg.probability},
                          {"variants_per_statement", engine_cfg.variants_per_statement},
                          {"max_rule_applications", engine_cfg.max_rule_applications},
                          {"rules", rule_names},
                          {"name_suffix", engine_cfg.name_suffix}};
      std::size_t k = 0;
      for (const auto& rec : records) {
        json r;
        r["schema_version"] = kSchemaVersion;
        r["id"] = input.parent_id + "/ast/" + std::to_string(k++);
        r["formal_statement"] = rec.output;
        r["nl_description"] = input.nl;
        if (input.domain) r["domain"] = *input.domain;
        r["provenance"] = json{{"seed_id", rec.seed_statement_id},
                               {"method", method_name(Method::AST)},
                               {"applications", applications_to_json(rec.applications)},
                               {"rng_seed", rec.rng_seed},
                               {"engine", engine_echo},
                               {"status", status_name(rec.status)}};
        // no verification report: AST rewrites are equivalence-preserving
        outcome.records.push_back(std::move(r));
      }
    }
  }
  return outcome;
}

}  // namespace

std::string dedup_key(const std::string& formal_statement) {
  auto parsed = parse_statement(formal_statement);
  if (parsed.ok()) return "s:" + hash_hex(structural_hash(*parsed.statement));
  return "t:" + hash_hex(whitespace_normalized_hash(formal_statement));
}

std::string near_dup_key(const std::string& formal_statement) {
  auto parsed = parse_statement(formal_statement);
  if (!parsed.ok()) return "t:" + hash_hex(whitespace_normalized_hash(formal_statement));
  std::istringstream in(normalized_print(*parsed.statement));
  std::vector<std::string> tokens;
  std::string tok;
  while (in >> tok) tokens.push_back(tok);
  std::sort(tokens.begin(), tokens.end());
  std::string joined;
  for (const auto& t : tokens) {
    joined += t;
    joined += '\x1f';
  }
  return "n:" + hash_hex(fnv1a(joined));
}

PipelineResult run_pipeline(const PipelineConfig& cfg) {
  cfg.validate();

  IngestResult ingested = ingest(cfg.input, cfg.input_format);
  PipelineResult result;
  result.stats.seeds_in = ingested.records.size();

  // deterministic uniform sample, input order preserved
  std::vector<DatasetRecord> seeds = std::move(ingested.records);
  if (cfg.sample_size > 0 && cfg.sample_size < seeds.size()) {
    std::vector<std::size_t> idx(seeds.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    Rng rng(cfg.seed);
    rng.shuffle(idx);
    idx.resize(cfg.sample_size);
    std::sort(idx.begin(), idx.end());
    std::vector<DatasetRecord> sampled;
    sampled.reserve(idx.size());
    for (std::size_t i : idx) sampled.push_back(std::move(seeds[i]));
    seeds = std::move(sampled);
  }
  result.stats.seeds_sampled = seeds.size();
  for (const auto& s : seeds) {
    ++result.stats.domain_before[s.domain_label.value_or("Unlabeled")];
  }

  auto llm = make_llm_client(cfg);
  auto compiler = make_compiler(cfg);

  // resume journal: completed seeds are loaded, not recomputed
  std::map<std::string, SeedOutcome> journal;
  if (!cfg.checkpoint.empty() && fs::exists(cfg.checkpoint)) {
    for (const auto& row : read_jsonl(cfg.checkpoint)) {
      journal.emplace(row.at("seed_id").get<std::string>(),
                      SeedOutcome::from_json(row.at("outcome")));
    }
  }
  std::ofstream journal_out;
  std::mutex journal_mu;
  if (!cfg.checkpoint.empty()) {
    fs::path p(cfg.checkpoint);
    if (p.has_parent_path()) {
      std::error_code ec;
      fs::create_directories(p.parent_path(), ec);
    }
    journal_out.open(cfg.checkpoint, std::ios::app);
  }

  std::vector<SeedOutcome> outcomes(seeds.size());
  std::vector<std::size_t> todo;
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    auto it = journal.find(seeds[i].id);
    if (it != journal.end()) {
      outcomes[i] = it->second;
    } else {
      todo.push_back(i);
    }
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr fatal;
  std::mutex fatal_mu;
  auto worker = [&]() {
    for (;;) {
      std::size_t slot = next.fetch_add(1);
      if (slot >= todo.size()) return;
      std::size_t i = todo[slot];
      try {
        outcomes[i] = process_seed(cfg, seeds[i], i, *llm, *compiler);
        if (journal_out.is_open()) {
          std::lock_guard lock(journal_mu);
          journal_out << json{{"seed_id", seeds[i].id}, {"outcome", outcomes[i].to_json()}}.dump()
                      << '\n';
          journal_out.flush();
        }
      } catch (...) {
        std::lock_guard lock(fatal_mu);
        if (!fatal) fatal = std::current_exception();
        return;
      }
    }
  };

  int jobs = cfg.jobs > 0 ? cfg.jobs
                          : std::max(1, static_cast<int>(std::thread::hardware_concurrency()));
  if (jobs == 1 || todo.size() <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (fatal) std::rethrow_exception(fatal);

  for (const auto& outcome : outcomes) {
    result.stats.merge(outcome.delta);
    for (const auto& r : outcome.records) result.records.push_back(r);
  }

  // corpus-wide dedup across seeds and variants
  if (cfg.dedup) {
    std::set<std::string> keys;
    for (const auto& s : seeds) keys.insert(dedup_key(s.formal_statement));
    std::vector<json> kept;
    kept.reserve(result.records.size());
    for (auto& rec : result.records) {
      std::string key = dedup_key(rec.at("formal_statement").get<std::string>());
      if (!keys.insert(key).second) {
        ++result.stats.dedup_drops;
        continue;
      }
      kept.push_back(std::move(rec));
    }
    result.records = std::move(kept);
  }

  if (!cfg.decontamination.empty()) {
    DecontaminationResult decon = decontaminate(result.records, cfg.decontamination);
    result.stats.decontamination_drops = decon.drops.size();
    result.decontamination_drops = decon.drops;
    result.records = std::move(decon.kept);
  }

  result.stats.output_records = result.records.size();
  for (const auto& rec : result.records) {
    std::string domain = rec.contains("domain") ? rec["domain"].get<std::string>() : "Unlabeled";
    ++result.stats.domain_after[domain];
  }

  write_jsonl(cfg.output, result.records);
  {
    fs::path stats_path(cfg.output + ".stats.json");
    std::ofstream out(stats_path);
    out << result.stats.to_json().dump(2) << '\n';
  }
  return result;
}

// --- stats & decontamination -------------------------------------------

std::string render_classify_prompt(const std::string& stmt, const DomainList& domains) {
  std::string out =
      "Classify the mathematical domain of the following Lean 4 statement. "
      "Choose exactly one domain from this list:\n\n";
  out += domains.formatted();
  out += "\n\n```lean4\n";
  out += stmt;
  out += "\n```\n\nReply with the domain name inside a fenced block:\n```Domain\n"
         "Target Domain in the list\n```\n";
  return out;
}

nlohmann::json StatsReport::to_json() const {
  json j;
  j["histogram"] = histogram;
  if (has_other) j["compared_histogram"] = other_histogram;
  return j;
}

std::string StatsReport::render_table() const {
  std::ostringstream os;
  os << "domain histogram:\n";
  std::set<std::string> keys;
  for (const auto& [k, _] : histogram) keys.insert(k);
  for (const auto& [k, _] : other_histogram) keys.insert(k);
  for (const auto& k : keys) {
    os << "  " << k;
    for (std::size_t i = k.size(); i < 28; ++i) os << ' ';
    auto it = histogram.find(k);
    std::size_t a = it == histogram.end() ? 0 : it->second;
    os << a;
    if (has_other) {
      auto jt = other_histogram.find(k);
      std::size_t b = jt == other_histogram.end() ? 0 : jt->second;
      os << "\t-> " << b << "\t(" << (b >= a ? "+" : "") << (static_cast<long long>(b) -
                                                             static_cast<long long>(a))
         << ")";
    }
    os << '\n';
  }
  return os.str();
}

namespace {

std::map<std::string, std::size_t> histogram_of(
    const std::string& path, LlmClient* classifier,
    std::vector<std::pair<std::string, std::string>>* classified) {
  std::map<std::string, std::size_t> hist;
  for (const auto& row : read_jsonl(path)) {
    std::string domain;
    if (row.contains("domain") && row["domain"].is_string()) {
      domain = row["domain"].get<std::string>();
    }
    if (domain.empty() && classifier) {
      std::string stmt = row.value("formal_statement", "");
      try {
        std::string response =
            classifier->complete(render_classify_prompt(stmt, DomainList::preset()), 0.0);
        for (const auto& fence : scan_fences(response)) {
          std::string label = trim(fence.label);
          if (label == "Domain" || label == "domain") {
            std::string candidate = trim(fence.content);
            if (DomainList::preset().contains(candidate)) domain = candidate;
          }
        }
      } catch (const LlmError&) {
        // classification is best effort; fall through to Unlabeled
      }
      if (classified) {
        classified->emplace_back(row.value("id", ""), domain.empty() ? "Unlabeled" : domain);
      }
    }
    ++hist[domain.empty() ? "Unlabeled" : domain];
  }
  return hist;
}

}  // namespace

void StatsReport::write_classification_csv(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "id,domain\n";
  for (const auto& [id, domain] : classified) out << id << ',' << domain << '\n';
}

StatsReport corpus_stats(const std::string& corpus_path, const std::string& compare_path,
                         LlmClient* classifier) {
  StatsReport report;
  report.histogram = histogram_of(corpus_path, classifier, &report.classified);
  if (!compare_path.empty()) {
    report.other_histogram = histogram_of(compare_path, classifier, &report.classified);
    report.has_other = true;
  }
  return report;
}

DecontaminationResult decontaminate(const std::vector<nlohmann::json>& corpus,
                                    const std::vector<std::string>& benchmark_paths) {
  std::map<std::string, std::string> exact;  // key -> benchmark id
  std::map<std::string, std::string> near;
  for (const auto& path : benchmark_paths) {
    IngestResult bench = ingest_auto(path);
    for (const auto& rec : bench.records) {
      exact.emplace(dedup_key(rec.formal_statement), rec.id);
      near.emplace(near_dup_key(rec.formal_statement), rec.id);
    }
  }

  DecontaminationResult out;
  for (const auto& rec : corpus) {
    std::string stmt = rec.value("formal_statement", "");
    std::string id = rec.value("id", "");
    auto hit = exact.find(dedup_key(stmt));
    if (hit != exact.end()) {
      out.drops.emplace_back(id, hit->second);
      continue;
    }
    auto near_hit = near.find(near_dup_key(stmt));
    if (near_hit != near.end()) {
      out.advisory.emplace_back(id, near_hit->second);
    }
    out.kept.push_back(rec);
  }
  return out;
}

}  // namespace leanevo
