#pragma once

#include <optional>
#include <string>
#include <vector>

#include "leanevo/prompts.hpp"

namespace leanevo {

// One parsed (NL description, formal statement[, domain]) group from a
// model response.
struct Variant {
  std::string nl_description;
  std::string formal_statement;
  std::optional<std::string> domain;
};

struct VariantParse {
  std::vector<Variant> variants;
  std::vector<std::string> diagnostics;
};

// Total on arbitrary text: malformed groups become diagnostics, never
// exceptions. Fence labels are matched case-insensitively and `lean4`
// fences count as formal statements. At most `max_variants` are kept
// (the templates ask for 3-5); extras are dropped with a diagnostic.
VariantParse parse_variants(const std::string& response, bool expect_domain,
                            std::size_t max_variants = 5,
                            const DomainList& domains = DomainList::preset());

// Fenced-block scanner shared with the judge/repair response parsers.
struct Fence {
  std::string label;  // text after the opening ``` (trimmed)
  std::string content;
};
std::vector<Fence> scan_fences(const std::string& text);

std::string trim(const std::string& s);
bool ends_with_sorry_trailer(const std::string& stmt);

}  // namespace leanevo
