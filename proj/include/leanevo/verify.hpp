#pragma once

#include <atomic>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "leanevo/llm.hpp"

namespace leanevo {

struct CompileDiagnostic {
  int line{0};
  int column{0};
  std::string message;
};

struct CompileResult {
  bool ok{false};
  std::vector<CompileDiagnostic> errors;  // error severity only; sorry warnings pass
  double elapsed_seconds{0.0};
  std::string toolchain;
};

// Infrastructure failure (toolchain missing, workspace unusable). Halts the
// pipeline with a clear message; never recorded as a statement rejection.
class CompilerError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CompilerConfig {
  std::string command{"lake env lean {file}"};  // {file} is substituted
  std::string version_command{"lean --version"};
  std::string workspace{"."};
  std::string scratch_dir;  // default: <workspace>/.leanevo-scratch
  std::string header{"import Mathlib\n\n"};
  double timeout_seconds{60.0};
  int batch_size{16};
};

class Compiler {
 public:
  virtual ~Compiler() = default;
  virtual CompileResult check(const std::string& stmt) = 0;
  // Default implementation loops check(); the Lean runner overrides it to
  // share one compiler invocation across a batch.
  virtual std::vector<CompileResult> check_batch(const std::vector<std::string>& stmts);
};

// Invokes the configured Lean toolchain on scratch files prefixed with the
// configured header. Diagnostics are parsed from
// `<file>:<line>:<col>: <severity>: <message>` lines.
class LeanCompiler : public Compiler {
 public:
  explicit LeanCompiler(CompilerConfig cfg);
  CompileResult check(const std::string& stmt) override;
  std::vector<CompileResult> check_batch(const std::vector<std::string>& stmts) override;

 private:
  CompilerConfig cfg_;
  std::string toolchain_;
  std::atomic<int> scratch_counter_{0};

  std::string scratch_path(const std::string& stem);
  CompileResult run_on_file(const std::string& path, double timeout);
};

// Scripted stand-in for tests and mock pipelines: substring rules decide
// the outcome, everything else compiles clean.
class MockCompiler : public Compiler {
 public:
  struct Rule {
    std::string match;
    bool ok{false};
    bool infrastructure{false};  // throw CompilerError instead
    CompileDiagnostic diagnostic{1, 1, "mock compile error"};
  };

  MockCompiler() = default;
  void add_rule(Rule rule) { rules_.push_back(std::move(rule)); }
  CompileResult check(const std::string& stmt) override;

 private:
  std::vector<Rule> rules_;
};

enum class JudgeAspect { Consistency, Correctness, Difficulty };
const char* aspect_name(JudgeAspect a);

struct JudgeVerdict {
  JudgeAspect aspect{JudgeAspect::Consistency};
  std::string verdict;  // Consistent/Inconsistent, Correct/Incorrect, Yes/No
  bool pass{false};     // for Difficulty, Yes (low difficulty) fails
  std::string analysis;
};

struct RepairOutcome {
  std::string repaired_statement;
  CompileResult compile;
  std::string analysis;
};

struct VerificationReport {
  enum class Final { Accepted, Rejected, Skipped };

  std::string statement_id;
  CompileResult compile;
  std::optional<RepairOutcome> repaired;
  std::vector<JudgeVerdict> verdicts;
  Final final{Final::Skipped};
  std::string reason;              // rejection/skip cause ("syntax", "consistency", ...)
  std::string accepted_statement;  // the text that passed compilation
};

const char* final_name(VerificationReport::Final f);

struct VerifyConfig {
  bool difficulty_filter{true};
  double judge_temperature{0.0};
  double repair_temperature{0.0};
};

// Renders the matching judge template, calls the model, and parses the
// final ```judge fence case-insensitively. Unrecognized verdicts fail the
// aspect with reason "unparseable verdict".
JudgeVerdict judge(const std::string& nl, const std::string& stmt, JudgeAspect aspect,
                   LlmClient& llm, double temperature);

// Single repair attempt; returns the corrected statement from the
// **Corrected Lean4 Code** fence, or nullopt (reason in `fail_reason`).
std::optional<std::string> repair(const std::string& stmt, const std::string& errors_text,
                                  LlmClient& llm, double temperature,
                                  std::string* analysis = nullptr,
                                  std::string* fail_reason = nullptr);

std::string format_diagnostics(const std::vector<CompileDiagnostic>& diags);

// compile -> (repair -> recompile) -> consistency -> correctness ->
// difficulty with short-circuit rejection. Infrastructure errors surface
// as Skipped.
VerificationReport verify(const std::string& id, const std::string& nl, const std::string& stmt,
                          Compiler& compiler, LlmClient& llm, const VerifyConfig& cfg = {});

}  // namespace leanevo
