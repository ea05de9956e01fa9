#include "leanevo/verify.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

#include "leanevo/prompts.hpp"
#include "leanevo/variants.hpp"
#include "proc.hpp"

namespace leanevo {

namespace fs = std::filesystem;

std::vector<CompileResult> Compiler::check_batch(const std::vector<std::string>& stmts) {
  std::vector<CompileResult> out;
  out.reserve(stmts.size());
  for (const auto& s : stmts) out.push_back(check(s));
  return out;
}

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

struct ParsedDiag {
  int line;
  int column;
  std::string severity;
  std::string message;
};

std::vector<ParsedDiag> parse_diagnostics(const std::string& output) {
  static const std::regex pattern(
      R"(^([^\s:][^:]*):(\d+):(\d+):\s*(error|warning|info):\s*(.*)$)");
  std::vector<ParsedDiag> out;
  std::istringstream in(output);
  std::string line;
  while (std::getline(in, line)) {
    std::smatch m;
    if (std::regex_match(line, m, pattern)) {
      out.push_back(ParsedDiag{std::stoi(m[2]), std::stoi(m[3]), m[4], m[5]});
    }
  }
  return out;
}

}  // namespace

LeanCompiler::LeanCompiler(CompilerConfig cfg) : cfg_(std::move(cfg)) {
  if (!fs::is_directory(cfg_.workspace)) {
    throw CompilerError("lean workspace does not exist: " + cfg_.workspace);
  }
  if (cfg_.scratch_dir.empty()) {
    cfg_.scratch_dir = (fs::path(cfg_.workspace) / ".leanevo-scratch").string();
  }
  std::error_code ec;
  fs::create_directories(cfg_.scratch_dir, ec);
  if (ec) throw CompilerError("cannot create scratch dir: " + cfg_.scratch_dir);
  if (!cfg_.version_command.empty()) {
    auto v = detail::run_command("cd '" + cfg_.workspace + "' && " + cfg_.version_command, 30);
    if (v.exit_code == 0) {
      toolchain_ = trim(v.output.substr(0, v.output.find('\n')));
    }
  }
}

std::string LeanCompiler::scratch_path(const std::string& stem) {
  return (fs::path(cfg_.scratch_dir) / (stem + ".lean")).string();
}

CompileResult LeanCompiler::run_on_file(const std::string& path, double timeout) {
  std::string cmd = cfg_.command;
  auto slot = cmd.find("{file}");
  if (slot == std::string::npos) throw CompilerError("compiler command lacks a {file} slot");
  cmd.replace(slot, 6, "'" + path + "'");
  cmd = "cd '" + cfg_.workspace + "' && " + cmd;

  auto start = std::chrono::steady_clock::now();
  auto run = detail::run_command(cmd, timeout);
  auto elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  if (run.exit_code == 127) {
    throw CompilerError("lean toolchain not found while running: " + cfg_.command);
  }

  CompileResult result;
  result.elapsed_seconds = elapsed;
  result.toolchain = toolchain_;
  if (run.timed_out) {
    result.ok = false;
    result.errors.push_back(CompileDiagnostic{0, 0, "timeout"});
    return result;
  }
  for (const auto& d : parse_diagnostics(run.output)) {
    if (d.severity == "error") {
      result.errors.push_back(CompileDiagnostic{d.line, d.column, d.message});
    }
  }
  if (run.exit_code != 0 && result.errors.empty()) {
    result.errors.push_back(CompileDiagnostic{
        0, 0,
        "compiler exited with code " + std::to_string(run.exit_code) + ": " +
            run.output.substr(run.output.size() > 400 ? run.output.size() - 400 : 0)});
  }
  result.ok = run.exit_code == 0 && result.errors.empty();
  return result;
}

CompileResult LeanCompiler::check(const std::string& stmt) {
  std::string path = scratch_path("stmt_" + std::to_string(scratch_counter_++));
  std::ofstream out(path);
  out << cfg_.header << stmt << '\n';
  out.close();
  return run_on_file(path, cfg_.timeout_seconds);
}

std::vector<CompileResult> LeanCompiler::check_batch(const std::vector<std::string>& stmts) {
  std::vector<CompileResult> results(stmts.size());
  std::size_t batch = cfg_.batch_size > 0 ? static_cast<std::size_t>(cfg_.batch_size) : 16;
  for (std::size_t begin = 0; begin < stmts.size(); begin += batch) {
    std::size_t end = std::min(stmts.size(), begin + batch);

    // one file, one namespace per statement, diagnostics mapped back by line
    std::ostringstream file;
    file << cfg_.header;
    int header_lines = static_cast<int>(std::count(cfg_.header.begin(), cfg_.header.end(), '\n'));
    std::vector<std::pair<int, int>> ranges;  // [first, last] line of each statement
    int line = header_lines + 1;
    for (std::size_t i = begin; i < end; ++i) {
      std::ostringstream block;
      block << "namespace LeanevoBatch" << (i - begin) << '\n'
            << stmts[i] << '\n'
            << "end LeanevoBatch" << (i - begin) << "\n\n";
      std::string text = block.str();
      int lines = static_cast<int>(std::count(text.begin(), text.end(), '\n'));
      ranges.emplace_back(line, line + lines - 1);
      line += lines;
      file << text;
    }

    std::string path = scratch_path("batch_" + std::to_string(scratch_counter_++));
    {
      std::ofstream out(path);
      out << file.str();
    }
    double timeout = cfg_.timeout_seconds * static_cast<double>(end - begin);
    CompileResult whole = run_on_file(path, timeout);

    for (std::size_t i = begin; i < end; ++i) {
      CompileResult r;
      r.elapsed_seconds = whole.elapsed_seconds;
      r.toolchain = whole.toolchain;
      auto [lo, hi] = ranges[i - begin];
      for (const auto& e : whole.errors) {
        bool unattributed = e.line == 0;
        if (unattributed || (e.line >= lo && e.line <= hi)) {
          r.errors.push_back(e);
        }
      }
      r.ok = r.errors.empty();
      results[i] = r;
    }
  }
  return results;
}

CompileResult MockCompiler::check(const std::string& stmt) {
  for (const auto& rule : rules_) {
    if (stmt.find(rule.match) == std::string::npos) continue;
    if (rule.infrastructure) throw CompilerError("mock compiler: scripted infrastructure failure");
    CompileResult r;
    r.ok = rule.ok;
    r.toolchain = "mock";
    if (!rule.ok) r.errors.push_back(rule.diagnostic);
    return r;
  }
  CompileResult r;
  r.ok = true;
  r.toolchain = "mock";
  return r;
}

const char* aspect_name(JudgeAspect a) {
  switch (a) {
    case JudgeAspect::Consistency: return "Consistency";
    case JudgeAspect::Correctness: return "Correctness";
    case JudgeAspect::Difficulty: return "Difficulty";
  }
  return "?";
}

const char* final_name(VerificationReport::Final f) {
  switch (f) {
    case VerificationReport::Final::Accepted: return "Accepted";
    case VerificationReport::Final::Rejected: return "Rejected";
    case VerificationReport::Final::Skipped: return "Skipped";
  }
  return "?";
}

std::string format_diagnostics(const std::vector<CompileDiagnostic>& diags) {
  std::ostringstream out;
  for (const auto& d : diags) {
    out << "line " << d.line << ", column " << d.column << ": " << d.message << '\n';
  }
  return out.str();
}

JudgeVerdict judge(const std::string& nl, const std::string& stmt, JudgeAspect aspect,
                   LlmClient& llm, double temperature) {
  std::string prompt;
  switch (aspect) {
    case JudgeAspect::Consistency: prompt = render_consistency_prompt(nl, stmt); break;
    case JudgeAspect::Correctness: prompt = render_correctness_prompt(nl, stmt); break;
    case JudgeAspect::Difficulty: prompt = render_difficulty_filter_prompt(nl, stmt); break;
  }
  std::string response = llm.complete(prompt, temperature);

  JudgeVerdict out;
  out.aspect = aspect;
  std::string token;
  for (const auto& fence : scan_fences(response)) {
    std::string label = lower(trim(fence.label));
    if (label == "judge") token = lower(trim(fence.content));
    if (label == "analysis") out.analysis = trim(fence.content);
  }
  switch (aspect) {
    case JudgeAspect::Consistency:
      if (token == "consistent") {
        out.verdict = "Consistent";
        out.pass = true;
      } else if (token == "inconsistent") {
        out.verdict = "Inconsistent";
      }
      break;
    case JudgeAspect::Correctness:
      if (token == "correct") {
        out.verdict = "Correct";
        out.pass = true;
      } else if (token == "incorrect") {
        out.verdict = "Incorrect";
      }
      break;
    case JudgeAspect::Difficulty:
      // Yes = low difficulty = filtered out
      if (token == "no") {
        out.verdict = "No";
        out.pass = true;
      } else if (token == "yes") {
        out.verdict = "Yes";
      }
      break;
  }
  if (out.verdict.empty()) {
    out.verdict = "unparseable verdict";
    out.pass = false;
  }
  return out;
}

std::optional<std::string> repair(const std::string& stmt, const std::string& errors_text,
                                  LlmClient& llm, double temperature, std::string* analysis,
                                  std::string* fail_reason) {
  std::string response = llm.complete(render_repair_prompt(stmt, errors_text), temperature);

  auto fences = scan_fences(response);
  std::string code;
  // the fence following the **Corrected Lean4 Code** marker, else the last
  // lean4 fence anywhere
  auto marker = response.find("**Corrected Lean4 Code**");
  if (marker != std::string::npos) {
    auto after = scan_fences(response.substr(marker));
    for (const auto& f : after) {
      std::string label = lower(trim(f.label));
      if (label == "lean4" || label == "lean") {
        code = f.content;
        break;
      }
    }
  }
  if (code.empty()) {
    for (const auto& f : fences) {
      std::string label = lower(trim(f.label));
      if (label == "lean4" || label == "lean") code = f.content;
    }
  }
  for (const auto& f : fences) {
    if (analysis && lower(trim(f.label)) == "analysis") *analysis = trim(f.content);
  }
  if (code.empty()) {
    if (fail_reason) *fail_reason = "no lean4 fence in repair response";
    return std::nullopt;
  }
  code = trim(code);
  if (!ends_with_sorry_trailer(code)) {
    if (fail_reason) *fail_reason = "missing trailer";
    return std::nullopt;
  }
  return code;
}

VerificationReport verify(const std::string& id, const std::string& nl, const std::string& stmt,
                          Compiler& compiler, LlmClient& llm, const VerifyConfig& cfg) {
  VerificationReport report;
  report.statement_id = id;

  std::string candidate = stmt;
  // reason carries the stage on Skipped so the funnel can attribute it
  std::string stage = "compile";
  try {
    report.compile = compiler.check(stmt);
    if (!report.compile.ok) {
      stage = "repair";
      std::string analysis;
      std::string fail_reason;
      auto fixed = repair(stmt, format_diagnostics(report.compile.errors), llm,
                          cfg.repair_temperature, &analysis, &fail_reason);
      if (!fixed) {
        report.final = VerificationReport::Final::Rejected;
        report.reason = "syntax";
        return report;
      }
      RepairOutcome outcome;
      outcome.repaired_statement = *fixed;
      outcome.analysis = analysis;
      outcome.compile = compiler.check(*fixed);
      bool repaired_ok = outcome.compile.ok;
      report.repaired = std::move(outcome);
      if (!repaired_ok) {
        report.final = VerificationReport::Final::Rejected;
        report.reason = "syntax";
        return report;
      }
      candidate = *fixed;
    }

    stage = "judge";
    const JudgeAspect order[] = {JudgeAspect::Consistency, JudgeAspect::Correctness,
                                 JudgeAspect::Difficulty};
    for (JudgeAspect aspect : order) {
      if (aspect == JudgeAspect::Difficulty && !cfg.difficulty_filter) break;
      JudgeVerdict verdict = judge(nl, candidate, aspect, llm, cfg.judge_temperature);
      report.verdicts.push_back(verdict);
      if (!verdict.pass) {
        report.final = VerificationReport::Final::Rejected;
        report.reason = lower(aspect_name(aspect));
        return report;
      }
    }
  } catch (const CompilerError& e) {
    report.final = VerificationReport::Final::Skipped;
    report.reason = stage + ": infrastructure: " + e.what();
    return report;
  } catch (const LlmError& e) {
    report.final = VerificationReport::Final::Skipped;
    report.reason = stage + ": infrastructure: " + e.what();
    return report;
  }

  report.final = VerificationReport::Final::Accepted;
  report.accepted_statement = candidate;
  return report;
}

}  // namespace leanevo
