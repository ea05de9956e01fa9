#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "leanevo/dataset.hpp"
#include "leanevo/engine.hpp"
#include "leanevo/hash.hpp"
#include "leanevo/parser.hpp"
#include "leanevo/pipeline.hpp"
#include "leanevo/printer.hpp"
#include "leanevo/prompts.hpp"
#include "leanevo/variants.hpp"
#include "leanevo/verify.hpp"

using namespace leanevo;
using json = nlohmann::json;

namespace {

struct GlobalOpts {
  std::string config_path;
  std::uint64_t seed{0};
  bool seed_set{false};
  bool mock{false};
  int jobs{0};
  std::string out;
};

PipelineConfig effective_config(const GlobalOpts& g) {
  PipelineConfig cfg;
  if (!g.config_path.empty()) cfg = PipelineConfig::load(g.config_path);
  if (g.seed_set) cfg.seed = g.seed;
  if (g.mock) {
    cfg.mock.enabled = true;
    if (cfg.mock.fixtures_dir.empty()) cfg.mock.fixtures_dir = "fixtures/mock";
  }
  if (g.jobs > 0) cfg.jobs = g.jobs;
  if (!g.out.empty()) cfg.output = g.out;
  return cfg;
}

int cmd_parse(const std::string& input) {
  IngestResult data = ingest_auto(input);
  std::size_t ok = 0;
  std::size_t failed = 0;
  std::size_t mismatched = 0;
  for (const auto& rec : data.records) {
    auto first = parse_statement(rec.formal_statement);
    if (!first.ok()) {
      ++failed;
      std::cout << "FAIL       " << rec.id << "  " << first.error->message() << '\n';
      continue;
    }
    std::string printed = print_statement(*first.statement);
    auto second = parse_statement(printed);
    if (!second.ok() || print_statement(*second.statement) != printed) {
      ++mismatched;
      std::cout << "MISMATCH   " << rec.id << '\n';
      continue;
    }
    ++ok;
    std::cout << "OK         " << rec.id << "  hash=" << hash_hex(structural_hash(*first.statement))
              << '\n';
  }
  std::cout << "parsed " << ok << " / " << data.records.size() << " statements ("
            << failed << " unparseable, " << mismatched << " round-trip mismatches, "
            << data.skipped << " skipped rows)\n";
  return failed + mismatched == 0 ? 0 : 2;
}

int cmd_evolve_ast(const PipelineConfig& cfg, const std::string& input, const std::string& out) {
  IngestResult data = ingest_auto(input);
  std::vector<json> rows;
  std::size_t skipped = 0;
  for (const auto& rec : data.records) {
    auto parsed = parse_statement(rec.formal_statement);
    if (!parsed.ok()) {
      ++skipped;
      std::cerr << "skip (unparseable): " << rec.id << "  " << parsed.error->message() << '\n';
      continue;
    }
    EngineConfig engine = cfg.engine;
    engine.rng_seed = cfg.seed ^ fnv1a(rec.id);
    for (std::size_t k = 0; const auto& variant : evolve_ast(*parsed.statement, engine, rec.id)) {
      json row;
      row["schema_version"] = kSchemaVersion;
      row["id"] = rec.id + "/ast/" + std::to_string(k++);
      row["formal_statement"] = variant.output;
      if (rec.nl_description) row["nl_description"] = *rec.nl_description;
      if (rec.domain_label) row["domain"] = *rec.domain_label;
      json apps = json::array();
      for (const auto& a : variant.applications) {
        apps.push_back(json{{"rule", rule_info(a.rule).name},
                            {"node_path", a.node_path},
                            {"before", a.before},
                            {"after", a.after}});
      }
      row["provenance"] = json{{"seed_id", variant.seed_statement_id},
                               {"method", method_name(variant.method)},
                               {"applications", apps},
                               {"rng_seed", variant.rng_seed},
                               {"status", status_name(variant.status)}};
      rows.push_back(std::move(row));
    }
  }
  write_jsonl(out, rows);
  std::cout << rows.size() << " variants written to " << out << " (" << skipped
            << " statements passed through untransformed)\n";
  return 0;
}

int cmd_evolve_llm(const PipelineConfig& cfg, const std::string& input, const std::string& out,
                   Method method, int strategy_id, const std::string& direction) {
  IngestResult data = ingest_auto(input);
  auto llm = make_llm_client(cfg);
  std::vector<json> rows;
  std::size_t failures = 0;
  for (std::size_t idx = 0; idx < data.records.size(); ++idx) {
    const auto& rec = data.records[idx];
    std::string prompt;
    std::map<std::string, std::string> metadata;
    if (method == Method::Domain) {
      prompt = render_domain_prompt(rec.formal_statement);
    } else {
      int sid = strategy_id > 0 ? strategy_id : static_cast<int>(idx % 5) + 1;
      int dir = direction == "down" ? -1 : direction == "up" ? +1
                : ((idx / 5) % 2 == 0 ? +1 : -1);
      DifficultyStrategy strategy = DifficultyStrategy::get(sid, dir);
      prompt = render_difficulty_prompt(rec.formal_statement, strategy);
      metadata["strategy"] = strategy.title;
      metadata["direction"] = dir > 0 ? "+1" : "-1";
    }
    std::string response;
    try {
      response = llm->complete(prompt, cfg.llm.temperature);
    } catch (const LlmError& e) {
      ++failures;
      std::cerr << "skip (endpoint): " << rec.id << "  " << e.what() << '\n';
      continue;
    }
    VariantParse parsed = parse_variants(response, method == Method::Domain);
    for (const auto& d : parsed.diagnostics) std::cerr << rec.id << ": " << d << '\n';
    std::size_t k = 0;
    for (const auto& v : parsed.variants) {
      json row;
      row["schema_version"] = kSchemaVersion;
      row["id"] = rec.id + "/" + (method == Method::Domain ? "domain" : "difficulty") + "/" +
                  std::to_string(k++);
      row["formal_statement"] = v.formal_statement;
      row["nl_description"] = v.nl_description;
      if (v.domain) row["domain"] = *v.domain;
      json meta = metadata;
      if (v.domain) meta["domain"] = *v.domain;
      row["provenance"] = json{{"seed_id", rec.id},
                               {"method", method_name(method)},
                               {"metadata", meta},
                               {"rng_seed", cfg.seed},
                               {"status", status_name(RecordStatus::Pending)}};
      rows.push_back(std::move(row));
    }
  }
  write_jsonl(out, rows);
  std::cout << rows.size() << " raw variants written to " << out << " (" << failures
            << " seeds skipped on endpoint errors)\n";
  return 0;
}

int cmd_verify(const PipelineConfig& cfg, const std::string& input, const std::string& out) {
  auto rows = read_jsonl(input);
  auto llm = make_llm_client(cfg);
  auto compiler = make_compiler(cfg);
  VerifyConfig vcfg;
  vcfg.difficulty_filter = cfg.difficulty_filter;
  vcfg.judge_temperature = cfg.judge_temperature;

  std::vector<json> accepted;
  std::size_t rejected = 0;
  std::size_t skipped = 0;
  for (const auto& row : rows) {
    std::string id = row.value("id", "");
    VerificationReport report = verify(id, row.value("nl_description", ""),
                                       row.value("formal_statement", ""), *compiler, *llm, vcfg);
    std::cout << final_name(report.final) << "  " << id;
    if (!report.reason.empty()) std::cout << "  (" << report.reason << ")";
    std::cout << '\n';
    if (report.final == VerificationReport::Final::Accepted) {
      json rec = row;
      rec["formal_statement"] = report.accepted_statement;
      json v;
      v["compile_ok"] = report.compile.ok;
      v["repaired"] = report.repaired.has_value();
      for (const auto& verdict : report.verdicts) {
        v[std::string(aspect_name(verdict.aspect))] = verdict.verdict;
      }
      v["final"] = final_name(report.final);
      rec["verification"] = v;
      if (rec.contains("provenance")) rec["provenance"]["status"] = "Verified";
      accepted.push_back(std::move(rec));
    } else if (report.final == VerificationReport::Final::Rejected) {
      ++rejected;
    } else {
      ++skipped;
    }
  }
  write_jsonl(out, accepted);
  std::cout << accepted.size() << " accepted, " << rejected << " rejected, " << skipped
            << " skipped -> " << out << '\n';
  return 0;
}

int cmd_run(const PipelineConfig& cfg) {
  PipelineResult result = run_pipeline(cfg);
  std::cout << result.stats.render_table();
  auto violations = result.stats.conservation_violations();
  for (const auto& v : violations) std::cerr << "conservation violation: " << v << '\n';
  std::cout << result.records.size() << " records -> " << cfg.output << '\n';
  return violations.empty() ? 0 : 3;
}

int cmd_stats(const PipelineConfig& cfg, const std::string& corpus, const std::string& compare,
              bool classify, const std::string& out) {
  std::unique_ptr<LlmClient> llm;
  if (classify) llm = make_llm_client(cfg);
  StatsReport report = corpus_stats(corpus, compare, llm.get());
  std::cout << report.render_table();
  if (!out.empty()) {
    std::ofstream o(out);
    o << report.to_json().dump(2) << '\n';
    if (classify) {
      report.write_classification_csv(out + ".classified.csv");
      std::cout << report.classified.size() << " classifications -> " << out
                << ".classified.csv (review and correct before trusting labels)\n";
    }
  }
  return 0;
}

int cmd_decontaminate(const std::string& corpus, const std::vector<std::string>& benchmarks,
                      const std::string& out) {
  auto rows = read_jsonl(corpus);
  DecontaminationResult result = decontaminate(rows, benchmarks);
  write_jsonl(out, result.kept);
  std::string drops_path = out + ".drops.csv";
  {
    std::ofstream o(drops_path);
    o << "corpus_id,benchmark_id,kind\n";
    for (const auto& [cid, bid] : result.drops) o << cid << ',' << bid << ",exact\n";
    for (const auto& [cid, bid] : result.advisory) o << cid << ',' << bid << ",near\n";
  }
  std::cout << result.drops.size() << " dropped, " << result.advisory.size()
            << " near-duplicate advisories; kept " << result.kept.size() << " -> " << out
            << " (drop list: " << drops_path << ")\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"leanevo: AST, domain, and difficulty evolution for Lean 4 theorem statements"};
  app.require_subcommand(1);

  GlobalOpts g;
  app.add_option("--config", g.config_path, "pipeline config (json)");
  app.add_option("--seed", g.seed, "global rng seed")->each([&](const std::string&) {
    g.seed_set = true;
  });
  app.add_flag("--mock", g.mock, "use mock llm/compiler backends");
  app.add_option("--jobs", g.jobs, "worker threads");
  app.add_option("--out", g.out, "output path");

  std::string input;
  std::string compare;
  std::string direction;
  int strategy_id = 0;
  bool classify = false;
  std::vector<std::string> benchmarks;

  auto* parse_cmd = app.add_subcommand("parse", "round-trip check statements in a file");
  parse_cmd->add_option("input", input, "jsonl file or directory of .lean files")->required();

  auto* ast_cmd = app.add_subcommand("evolve-ast", "deterministic AST rewriting");
  ast_cmd->add_option("input", input)->required();

  auto* domain_cmd = app.add_subcommand("evolve-domain", "LLM cross-domain evolution");
  domain_cmd->add_option("input", input)->required();

  auto* diff_cmd = app.add_subcommand("evolve-difficulty", "LLM difficulty evolution");
  diff_cmd->add_option("input", input)->required();
  diff_cmd->add_option("--strategy", strategy_id, "strategy id 1..5 (default round-robin)");
  diff_cmd->add_option("--direction", direction, "up or down (default round-robin)");

  auto* verify_cmd = app.add_subcommand("verify", "compile + repair + judge funnel");
  verify_cmd->add_option("input", input, "jsonl of {id, formal_statement, nl_description}")
      ->required();

  app.add_subcommand("run", "full three-phase pipeline from config");

  auto* stats_cmd = app.add_subcommand("stats", "domain histogram of a corpus");
  stats_cmd->add_option("input", input)->required();
  stats_cmd->add_option("--compare", compare, "second corpus for a before/after delta");
  stats_cmd->add_flag("--classify", classify, "classify unlabeled records with the llm");

  auto* decon_cmd = app.add_subcommand("decontaminate", "drop benchmark-matching statements");
  decon_cmd->add_option("input", input)->required();
  decon_cmd->add_option("--benchmark", benchmarks, "benchmark dataset path (repeatable)")
      ->required();

  CLI11_PARSE(app, argc, argv);

  try {
    PipelineConfig cfg = effective_config(g);
    std::string out = g.out;
    if (parse_cmd->parsed()) return cmd_parse(input);
    if (ast_cmd->parsed()) {
      return cmd_evolve_ast(cfg, input, out.empty() ? "out/ast_variants.jsonl" : out);
    }
    if (domain_cmd->parsed()) {
      return cmd_evolve_llm(cfg, input, out.empty() ? "out/domain_variants.jsonl" : out,
                            Method::Domain, 0, "");
    }
    if (diff_cmd->parsed()) {
      return cmd_evolve_llm(cfg, input, out.empty() ? "out/difficulty_variants.jsonl" : out,
                            Method::Difficulty, strategy_id, direction);
    }
    if (verify_cmd->parsed()) {
      return cmd_verify(cfg, input, out.empty() ? "out/accepted.jsonl" : out);
    }
    if (app.get_subcommand("run")->parsed()) return cmd_run(cfg);
    if (stats_cmd->parsed()) return cmd_stats(cfg, input, compare, classify, out);
    if (decon_cmd->parsed()) {
      return cmd_decontaminate(input, benchmarks, out.empty() ? "out/decontaminated.jsonl" : out);
    }
  } catch (const CompilerError& e) {
    std::cerr << "infrastructure error: " << e.what() << '\n';
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
