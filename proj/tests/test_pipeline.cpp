#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "leanevo/pipeline.hpp"

using namespace leanevo;
namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const char* tag) {
    path = fs::temp_directory_path() /
           (std::string("leanevo-pl-") + tag + "-" +
            std::to_string(reinterpret_cast<std::uintptr_t>(this)));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
};

PipelineConfig mock_cfg(const TempDir& tmp) {
  PipelineConfig cfg;
  cfg.input = std::string(LEANEVO_FIXTURES_DIR) + "/seeds/seeds.jsonl";
  cfg.output = (tmp.path / "corpus.jsonl").string();
  cfg.seed = 7;
  cfg.mock.enabled = true;
  cfg.mock.fixtures_dir = std::string(LEANEVO_FIXTURES_DIR) + "/mock";
  cfg.engine.probability = 1.0;
  cfg.jobs = 1;  // parallel equivalence is asserted separately
  return cfg;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

TEST_CASE("mock pipeline: fan-out shape, conservation, and provenance") {
  TempDir tmp("shape");
  PipelineConfig cfg = mock_cfg(tmp);
  PipelineResult result = run_pipeline(cfg);

  CHECK(result.stats.seeds_in == 4);
  CHECK(result.stats.conservation_violations().empty());
  // each seed raises 2 domain variants and >= 1 difficulty variant
  CHECK(result.stats.variants_raised >= 8);
  CHECK(result.stats.accepted >= 2);
  CHECK(result.stats.ast_variants >= 1);

  std::size_t ast_records = 0;
  for (const auto& rec : result.records) {
    REQUIRE(rec.contains("provenance"));
    const auto& prov = rec["provenance"];
    CHECK(prov.contains("seed_id"));
    std::string method = prov["method"];
    if (method == "AST") {
      ++ast_records;
      // AST rewrites bypass verification entirely
      CHECK_FALSE(rec.contains("verification"));
      CHECK(prov["status"] == "Verified");
      CHECK(prov.contains("applications"));
    } else {
      CHECK(rec.contains("verification"));
      CHECK(rec["verification"]["final"] == "Accepted");
    }
    CHECK(rec["schema_version"] == kSchemaVersion);
  }
  CHECK(ast_records >= 1);
  CHECK(result.records.size() == result.stats.output_records);
}

TEST_CASE("single-seed run reproduces the two-variant fan-out") {
  TempDir tmp("fanout");
  TempDir seeds("fanout-seeds");
  fs::path seed_file = seeds.path / "one.jsonl";
  {
    std::ofstream out(seed_file);
    out << json{{"id", "s1"},
                {"formal_statement",
                 "theorem lean_workbook_12011 (m n : ℤ) (h_1 : 2*m + n = 0) : "
                 "m^3 ≠ n^3 - 15 := by sorry"},
                {"domain", "Number Theory"}}
               .dump()
        << "\n";
  }
  PipelineConfig cfg = mock_cfg(tmp);
  cfg.input = seed_file.string();
  cfg.methods = {Method::Domain, Method::AST};
  PipelineResult result = run_pipeline(cfg);

  // two accepted domain pairs, each with at least one AST variant
  CHECK(result.stats.accepted == 2);
  std::map<std::string, std::size_t> ast_children;
  for (const auto& rec : result.records) {
    if (rec["provenance"]["method"] == "AST") {
      ++ast_children[rec["provenance"]["seed_id"].get<std::string>()];
    }
  }
  CHECK(ast_children["s1/domain/0"] >= 1);
  CHECK(ast_children["s1/domain/1"] >= 1);
  CHECK(result.stats.conservation_violations().empty());
  // domain histogram follows the variants' declared domains
  CHECK(result.stats.domain_after["Geometry"] >= 1);
  CHECK(result.stats.domain_after["Integral"] >= 1);
  CHECK(result.stats.domain_before["Number Theory"] == 1);
}

TEST_CASE("mock pipeline is deterministic byte for byte") {
  TempDir tmp1("det1");
  TempDir tmp2("det2");
  PipelineConfig a = mock_cfg(tmp1);
  PipelineConfig b = mock_cfg(tmp2);
  run_pipeline(a);
  run_pipeline(b);
  CHECK(slurp(tmp1.path / "corpus.jsonl") == slurp(tmp2.path / "corpus.jsonl"));
  CHECK(slurp(tmp1.path / "corpus.jsonl.stats.json") ==
        slurp(tmp2.path / "corpus.jsonl.stats.json"));
  // and parallel execution does not change the output
  TempDir tmp3("det3");
  PipelineConfig c = mock_cfg(tmp3);
  c.jobs = 4;
  run_pipeline(c);
  CHECK(slurp(tmp3.path / "corpus.jsonl") == slurp(tmp1.path / "corpus.jsonl"));
}

TEST_CASE("resume from a truncated checkpoint matches the uninterrupted run") {
  TempDir full("resume-full");
  PipelineConfig cfg_full = mock_cfg(full);
  cfg_full.checkpoint = (full.path / "journal.jsonl").string();
  run_pipeline(cfg_full);
  std::string uninterrupted = slurp(full.path / "corpus.jsonl");

  // keep only the first two journal lines, as if the run was interrupted
  TempDir resumed("resume-part");
  PipelineConfig cfg_res = mock_cfg(resumed);
  cfg_res.checkpoint = (resumed.path / "journal.jsonl").string();
  {
    std::istringstream in(slurp(full.path / "journal.jsonl"));
    std::ofstream out(cfg_res.checkpoint);
    std::string line;
    for (int i = 0; i < 2 && std::getline(in, line); ++i) out << line << '\n';
  }
  run_pipeline(cfg_res);
  CHECK(slurp(resumed.path / "corpus.jsonl") == uninterrupted);
}

TEST_CASE("dedup is idempotent and drops cross-seed duplicates") {
  TempDir tmp("dedup");
  PipelineConfig cfg = mock_cfg(tmp);
  PipelineResult first = run_pipeline(cfg);
  // the mock responses repeat identical variants for every seed, so the
  // corpus-wide pass must have dropped some
  CHECK(first.stats.dedup_drops > 0);
  std::set<std::string> keys;
  for (const auto& rec : first.records) {
    CHECK(keys.insert(dedup_key(rec["formal_statement"].get<std::string>())).second);
  }
}

TEST_CASE("decontamination drops alpha-renamed benchmark statements") {
  std::vector<json> corpus = {
      {{"id", "c1"},
       {"formal_statement",
        "theorem renamed_amgm (u v : ℝ) (hu : 0 < u) (hv : 0 < v) : (u + v) / 2 ≥ "
        "Real.sqrt (u * v) := by sorry"}},
      {{"id", "c2"},
       {"formal_statement", "theorem unrelated (x : ℝ) (h : x > 1) : x^2 > x := by sorry"}},
      {{"id", "c3"},
       {"formal_statement", "theorem comm_variant (x : ℝ) : 0 ≤ x^2 := by sorry"}},
  };
  auto result = decontaminate(
      corpus, {std::string(LEANEVO_FIXTURES_DIR) + "/benchmarks/minibench.jsonl"});
  REQUIRE(result.drops.size() == 1);
  CHECK(result.drops[0].first == "c1");
  CHECK(result.drops[0].second == "bench-1");
  CHECK(result.kept.size() == 2);
}

TEST_CASE("commutativity variants of benchmarks are advisories, not drops") {
  // bench-2 is x^2 >= 0; the dual-converted form 0 <= x^2 hashes differently
  std::vector<json> corpus = {
      {{"id", "near"},
       {"formal_statement", "theorem near_bench (x : ℝ) : x^2 + 0 ≥ 0 := by sorry"}},
      {{"id", "token-twin"},
       {"formal_statement", "theorem twin (n : ℕ) : 0 + n = n := by sorry"}},
  };
  auto result = decontaminate(
      corpus, {std::string(LEANEVO_FIXTURES_DIR) + "/benchmarks/minibench.jsonl"});
  CHECK(result.drops.empty());
  REQUIRE(result.advisory.size() == 1);
  CHECK(result.advisory[0].first == "token-twin");
  CHECK(result.advisory[0].second == "bench-3");
}

TEST_CASE("unparseable benchmark statements fall back to text comparison") {
  TempDir tmp("textfallback");
  fs::path bench = tmp.path / "bench.jsonl";
  {
    std::ofstream out(bench);
    out << json{{"id", "bench-def"},
                {"formal_statement",
                 "def helper : ℕ → ℕ := fun n => n + 1\n"
                 "theorem with_prelude (n : ℕ) : helper n > n := by sorry"}}
               .dump()
        << '\n';
  }
  std::vector<json> corpus = {
      {{"id", "same-modulo-ws"},
       {"formal_statement",
        "def helper : ℕ → ℕ := fun n => n + 1\n"
        "theorem with_prelude (n : ℕ)  :  helper n > n   := by sorry"}},
      {{"id", "different"},
       {"formal_statement", "theorem different (n : ℕ) : n = n := by sorry"}},
  };
  auto result = decontaminate(corpus, {bench.string()});
  REQUIRE(result.drops.size() == 1);
  CHECK(result.drops[0].first == "same-modulo-ws");
  CHECK(result.drops[0].second == "bench-def");
  CHECK(result.kept.size() == 1);
}

TEST_CASE("stats subcommand core: histogram and comparison") {
  TempDir tmp("stats");
  fs::path a = tmp.path / "a.jsonl";
  fs::path b = tmp.path / "b.jsonl";
  {
    std::ofstream out(a);
    for (const char* d : {"Algebra", "Algebra", "Algebra", "Geometry"}) {
      out << json{{"id", d}, {"formal_statement", "theorem t : True := by sorry"}, {"domain", d}}
                 .dump()
          << '\n';
    }
    std::ofstream outb(b);
    outb << json{{"id", "x"}, {"formal_statement", "theorem t : True := by sorry"}}.dump()
         << '\n';
  }
  StatsReport report = corpus_stats(a.string());
  CHECK(report.histogram["Algebra"] == 3);
  CHECK(report.histogram["Geometry"] == 1);
  StatsReport both = corpus_stats(a.string(), b.string());
  CHECK(both.has_other);
  CHECK(both.other_histogram["Unlabeled"] == 1);
  CHECK(both.render_table().find("Algebra") != std::string::npos);

  StatsReport empty = corpus_stats(b.string());
  CHECK(empty.histogram.size() == 1);  // only Unlabeled
}

TEST_CASE("domain variants matching the seed's own domain are filtered") {
  TempDir tmp("domfilter");
  TempDir seedsdir("domfilter-seeds");
  fs::path seed_file = seedsdir.path / "one.jsonl";
  {
    // the mock response declares Geometry and Integral; a Geometry seed
    // must drop the Geometry variant
    std::ofstream out(seed_file);
    out << json{{"id", "g1"},
                {"formal_statement", "theorem g1 (x : ℝ) : x = x := by sorry"},
                {"domain", "Geometry"}}
               .dump()
        << "\n";
  }
  PipelineConfig cfg = mock_cfg(tmp);
  cfg.input = seed_file.string();
  cfg.methods = {Method::Domain};
  PipelineResult result = run_pipeline(cfg);
  CHECK(result.stats.domain_mismatch_drops == 1);
  CHECK(result.stats.variants_raised == 1);
  for (const auto& rec : result.records) CHECK(rec["domain"] != "Geometry");
}

TEST_CASE("stats classifier labels unlabeled records through the llm") {
  TempDir tmp("classify");
  fs::path corpus = tmp.path / "c.jsonl";
  {
    std::ofstream out(corpus);
    out << json{{"id", "u1"},
                {"formal_statement", "theorem u1 (a : ℝ) : a = a := by sorry"}}
               .dump()
        << '\n';
    out << json{{"id", "l1"},
                {"formal_statement", "theorem l1 : True := by sorry"},
                {"domain", "Geometry"}}
               .dump()
        << '\n';
  }
  MockLlmClient classifier(std::string(LEANEVO_FIXTURES_DIR) + "/mock");
  classifier.add_rule("Classify the mathematical domain", "```Domain\nAlgebra\n```");
  StatsReport report = corpus_stats(corpus.string(), "", &classifier);
  CHECK(report.histogram["Algebra"] == 1);
  CHECK(report.histogram["Geometry"] == 1);
  REQUIRE(report.classified.size() == 1);  // only the unlabeled record
  CHECK(report.classified[0] == std::pair<std::string, std::string>{"u1", "Algebra"});
  fs::path csv = tmp.path / "review.csv";
  report.write_classification_csv(csv.string());
  CHECK(slurp(csv).find("u1,Algebra") != std::string::npos);
  // classifier answers outside the preset list stay unlabeled
  MockLlmClient off_list(std::string(LEANEVO_FIXTURES_DIR) + "/mock");
  off_list.add_rule("Classify the mathematical domain", "```Domain\nAstrology\n```");
  StatsReport fallback = corpus_stats(corpus.string(), "", &off_list);
  CHECK(fallback.histogram["Unlabeled"] == 1);
}

TEST_CASE("llm failure skips the seed's method instead of failing the run") {
  TempDir tmp("llmfail");
  PipelineConfig cfg = mock_cfg(tmp);
  cfg.mock.fixtures_dir = (tmp.path / "empty-fixtures").string();  // nothing to serve
  fs::create_directories(tmp.path / "empty-fixtures");
  PipelineResult result = run_pipeline(cfg);
  CHECK(result.stats.llm_failures == result.stats.llm_calls);
  CHECK(result.stats.variants_raised == 0);
  // AST evolution of the seeds still runs
  CHECK(result.stats.ast_variants > 0);
  CHECK(result.stats.conservation_violations().empty());
}

TEST_CASE("seed sampling is uniform, deterministic, and order-preserving") {
  TempDir tmp("sample");
  TempDir seedsdir("sample-seeds");
  fs::path seed_file = seedsdir.path / "many.jsonl";
  {
    std::ofstream out(seed_file);
    for (int i = 0; i < 20; ++i) {
      out << json{{"id", "s" + std::to_string(i)},
                  {"formal_statement", "theorem s" + std::to_string(i) +
                                           " (a b : ℝ) (h : a + b = " + std::to_string(i) +
                                           ") : a * b ≤ " + std::to_string(i) +
                                           " := by sorry"}}
                 .dump()
          << '\n';
    }
  }
  PipelineConfig cfg = mock_cfg(tmp);
  cfg.input = seed_file.string();
  cfg.methods = {Method::AST};
  cfg.sample_size = 5;
  PipelineResult first = run_pipeline(cfg);
  CHECK(first.stats.seeds_in == 20);
  CHECK(first.stats.seeds_sampled == 5);

  TempDir tmp2("sample2");
  cfg.output = (tmp2.path / "corpus.jsonl").string();
  PipelineResult second = run_pipeline(cfg);
  CHECK(slurp(tmp.path / "corpus.jsonl") == slurp(tmp2.path / "corpus.jsonl"));

  // a different seed picks a different subset (overwhelmingly likely)
  TempDir tmp3("sample3");
  cfg.output = (tmp3.path / "corpus.jsonl").string();
  cfg.seed = 999;
  run_pipeline(cfg);
  CHECK(slurp(tmp3.path / "corpus.jsonl") != slurp(tmp.path / "corpus.jsonl"));
}

TEST_CASE("config json round trip covers the documented fields") {
  json j = {
      {"input", "seeds.jsonl"},
      {"output", "out/c.jsonl"},
      {"methods", {"domain", "ast"}},
      {"seed", 99},
      {"sample_size", 10},
      {"jobs", 3},
      {"dedup", false},
      {"engine", {{"probability", 0.25}, {"variants_per_statement", 2},
                  {"rules", {"commutativity", "de-morgan"}}}},
      {"llm", {{"base_url", "https://example.test"}, {"model", "m"}, {"max_retries", 5}}},
      {"verification", {{"compiler_command", "lean {file}"}, {"difficulty_filter", false}}},
      {"mock", {{"enabled", true}, {"fixtures_dir", "fx"}}},
  };
  PipelineConfig cfg = PipelineConfig::from_json(j);
  CHECK(cfg.input == "seeds.jsonl");
  CHECK(cfg.methods == std::set<Method>{Method::Domain, Method::AST});
  CHECK(cfg.seed == 99);
  CHECK(cfg.sample_size == 10);
  CHECK(cfg.jobs == 3);
  CHECK_FALSE(cfg.dedup);
  CHECK(cfg.engine.probability == doctest::Approx(0.25));
  CHECK(cfg.engine.enabled_rules ==
        std::set<RuleId>{RuleId::Commutativity, RuleId::DeMorgan});
  CHECK(cfg.llm.max_retries == 5);
  CHECK_FALSE(cfg.difficulty_filter);
  CHECK(cfg.mock.enabled);

  json bad = j;
  bad["methods"] = json::array();
  CHECK_THROWS_AS(PipelineConfig::from_json(bad).validate(), std::invalid_argument);
}
