#include "leanevo/variants.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <utility>

namespace leanevo {

std::string trim(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

bool ends_with_sorry_trailer(const std::string& stmt) {
  static const std::string trailer = ":= by sorry";
  std::string t = trim(stmt);
  return t.size() >= trailer.size() && t.compare(t.size() - trailer.size(), trailer.size(), trailer) == 0;
}

std::vector<Fence> scan_fences(const std::string& text) {
  std::vector<Fence> fences;
  std::istringstream in(text);
  std::string line;
  bool open = false;
  Fence current;
  while (std::getline(in, line)) {
    std::string t = trim(line);
    if (!open) {
      if (t.rfind("```", 0) == 0 && t.size() > 3) {
        current = Fence{trim(t.substr(3)), ""};
        open = true;
      }
      continue;
    }
    if (t == "```") {
      if (!current.content.empty() && current.content.back() == '\n') {
        current.content.pop_back();
      }
      fences.push_back(std::move(current));
      current = Fence{};
      open = false;
      continue;
    }
    current.content += line;
    current.content += '\n';
  }
  return fences;
}

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

enum class FenceKind { Nl, Formal, Domain, Other };

FenceKind classify_fence(const std::string& label) {
  std::string l = lower(trim(label));
  if (l == "nl description") return FenceKind::Nl;
  if (l == "formal statement" || l == "lean4" || l == "lean") return FenceKind::Formal;
  if (l == "domain") return FenceKind::Domain;
  return FenceKind::Other;
}

}  // namespace

VariantParse parse_variants(const std::string& response, bool expect_domain,
                            std::size_t max_variants, const DomainList& domains) {
  VariantParse out;
  auto fences = scan_fences(response);
  if (fences.empty()) {
    out.diagnostics.push_back("no fenced blocks found in response");
    return out;
  }

  struct Group {
    std::optional<std::string> nl;
    std::optional<std::string> formal;
    std::optional<std::string> domain;
    bool empty() const { return !nl && !formal && !domain; }
  };

  Group current;
  std::size_t dropped_over_cap = 0;

  auto flush = [&]() {
    if (current.empty()) return;
    Group g = std::exchange(current, Group{});
    if (!g.formal) {
      out.diagnostics.push_back("variant dropped: missing formal statement");
      return;
    }
    std::string stmt = trim(*g.formal);
    if (stmt.empty()) {
      out.diagnostics.push_back("variant dropped: empty formal statement");
      return;
    }
    if (!ends_with_sorry_trailer(stmt)) {
      out.diagnostics.push_back("variant dropped: missing trailer ':= by sorry'");
      return;
    }
    Variant v;
    v.formal_statement = stmt;
    if (g.nl) v.nl_description = trim(*g.nl);
    if (!g.nl) out.diagnostics.push_back("variant has no NL description fence");
    if (g.domain) {
      std::string d = trim(*g.domain);
      if (domains.contains(d)) {
        v.domain = d;
      } else {
        out.diagnostics.push_back("variant declares unknown domain '" + d + "'");
      }
    } else if (expect_domain) {
      out.diagnostics.push_back("variant missing a Domain fence");
    }
    if (out.variants.size() >= max_variants) {
      ++dropped_over_cap;
      return;
    }
    out.variants.push_back(std::move(v));
  };

  for (const auto& fence : fences) {
    switch (classify_fence(fence.label)) {
      case FenceKind::Nl:
        if (current.nl || current.formal) flush();
        current.nl = fence.content;
        break;
      case FenceKind::Formal:
        if (current.formal) flush();
        current.formal = fence.content;
        break;
      case FenceKind::Domain:
        if (!current.formal && !current.nl) {
          out.diagnostics.push_back("stray Domain fence ignored");
        } else {
          current.domain = fence.content;
          flush();
        }
        break;
      case FenceKind::Other:
        out.diagnostics.push_back("ignored fence '" + fence.label + "'");
        break;
    }
  }
  flush();
  if (dropped_over_cap > 0) {
    out.diagnostics.push_back(std::to_string(dropped_over_cap) +
                              " variant(s) beyond the 3-5 cap dropped");
  }
  return out;
}

}  // namespace leanevo
