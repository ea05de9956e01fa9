#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace leanevo {

struct DatasetRecord {
  std::string id;
  std::string formal_statement;
  std::optional<std::string> nl_description;
  std::string source;
  std::optional<std::string> domain_label;
};

struct IngestResult {
  std::vector<DatasetRecord> records;
  std::size_t skipped{0};
  std::vector<std::string> diagnostics;
};

// format: "jsonl" (one object per line, `formal_statement` required, `id`
// derived from the line number when absent) or "lean-dir" (one record per
// .lean file, ids are paths relative to the directory).
// Unreadable inputs throw std::runtime_error; malformed entries are
// skipped with a diagnostic.
IngestResult ingest(const std::string& path, const std::string& format);

// picks "lean-dir" for directories, "jsonl" otherwise
IngestResult ingest_auto(const std::string& path);

nlohmann::json record_to_json(const DatasetRecord& r);
DatasetRecord record_from_json(const nlohmann::json& j, const std::string& fallback_id);

std::vector<nlohmann::json> read_jsonl(const std::string& path);
void write_jsonl(const std::string& path, const std::vector<nlohmann::json>& rows);

}  // namespace leanevo
