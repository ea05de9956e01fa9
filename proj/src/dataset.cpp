#include "leanevo/dataset.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace leanevo {

namespace fs = std::filesystem;
using json = nlohmann::json;

nlohmann::json record_to_json(const DatasetRecord& r) {
  json j;
  j["id"] = r.id;
  j["formal_statement"] = r.formal_statement;
  if (r.nl_description) j["nl_description"] = *r.nl_description;
  if (!r.source.empty()) j["source"] = r.source;
  if (r.domain_label) j["domain"] = *r.domain_label;
  return j;
}

DatasetRecord record_from_json(const json& j, const std::string& fallback_id) {
  DatasetRecord r;
  r.id = j.value("id", fallback_id);
  r.formal_statement = j.value("formal_statement", "");
  if (j.contains("nl_description") && j["nl_description"].is_string()) {
    r.nl_description = j["nl_description"].get<std::string>();
  }
  r.source = j.value("source", "");
  if (j.contains("domain") && j["domain"].is_string()) {
    r.domain_label = j["domain"].get<std::string>();
  } else if (j.contains("domain_label") && j["domain_label"].is_string()) {
    r.domain_label = j["domain_label"].get<std::string>();
  }
  return r;
}

std::vector<json> read_jsonl(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<json> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    rows.push_back(json::parse(line));
  }
  return rows;
}

void write_jsonl(const std::string& path, const std::vector<json>& rows) {
  fs::path p(path);
  if (p.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(p.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path);
  for (const auto& row : rows) out << row.dump() << '\n';
}

namespace {

IngestResult ingest_jsonl(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open dataset: " + path);
  IngestResult out;
  std::string line;
  std::size_t lineno = 0;
  std::string stem = fs::path(path).filename().string();
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      ++out.skipped;
      out.diagnostics.push_back(path + ":" + std::to_string(lineno) + ": bad json: " + e.what());
      continue;
    }
    DatasetRecord r = record_from_json(j, stem + "#" + std::to_string(lineno));
    if (r.formal_statement.empty()) {
      ++out.skipped;
      out.diagnostics.push_back(path + ":" + std::to_string(lineno) +
                                ": missing formal_statement");
      continue;
    }
    out.records.push_back(std::move(r));
  }
  return out;
}

IngestResult ingest_lean_dir(const std::string& path) {
  if (!fs::is_directory(path)) throw std::runtime_error("not a directory: " + path);
  IngestResult out;
  std::vector<fs::path> files;
  for (const auto& entry : fs::recursive_directory_iterator(path)) {
    if (entry.is_regular_file() && entry.path().extension() == ".lean") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  for (const auto& f : files) {
    std::ifstream in(f);
    if (!in) {
      ++out.skipped;
      out.diagnostics.push_back("unreadable file skipped: " + f.string());
      continue;
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    std::string text = buf.str();
    while (!text.empty() && (text.back() == '\n' || text.back() == '\r')) text.pop_back();
    if (text.empty()) {
      ++out.skipped;
      out.diagnostics.push_back("empty file skipped: " + f.string());
      continue;
    }
    DatasetRecord r;
    r.id = fs::relative(f, path).string();
    r.formal_statement = std::move(text);
    r.source = path;
    out.records.push_back(std::move(r));
  }
  return out;
}

}  // namespace

IngestResult ingest(const std::string& path, const std::string& format) {
  if (format == "jsonl") return ingest_jsonl(path);
  if (format == "lean-dir") return ingest_lean_dir(path);
  throw std::runtime_error("unknown ingest format: " + format + " (expected jsonl or lean-dir)");
}

IngestResult ingest_auto(const std::string& path) {
  return ingest(path, fs::is_directory(path) ? "lean-dir" : "jsonl");
}

}  // namespace leanevo
