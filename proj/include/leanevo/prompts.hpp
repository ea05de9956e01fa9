#pragma once

#include <string>
#include <vector>

namespace leanevo {

// The preset target-domain list, in prompt order.
struct DomainList {
  std::vector<std::string> domains;

  static const DomainList& preset();
  // `["Algebra", "Number Theory", ...]` as injected into the prompt.
  std::string formatted() const;
  bool contains(const std::string& name) const;
  void validate() const;  // non-empty, unique names
};

// One of the five evolution strategies with its direction: +1 increases
// difficulty, -1 decreases it.
struct DifficultyStrategy {
  int id{1};          // 1..5
  int direction{+1};  // +1 or -1
  std::string title;
  std::vector<std::string> methods;

  // Throws std::invalid_argument for id outside 1..5 or direction not ±1.
  static DifficultyStrategy get(int id, int direction);
  static const std::vector<DifficultyStrategy>& upward();
  static const std::vector<DifficultyStrategy>& downward();

  std::string methods_text() const;
};

// Stored prompt templates. Substitution slots are written as literal
// `{...}` tokens.
const std::string& domain_prompt_template();
const std::string& difficulty_up_prompt_template();
const std::string& difficulty_down_prompt_template();
const std::string& consistency_prompt_template();
const std::string& correctness_prompt_template();
const std::string& difficulty_filter_prompt_template();
const std::string& repair_prompt_template();

std::string render_domain_prompt(const std::string& formal_statement,
                                 const DomainList& domains = DomainList::preset());
std::string render_difficulty_prompt(const std::string& formal_statement,
                                     const DifficultyStrategy& strategy);
std::string render_consistency_prompt(const std::string& nl, const std::string& stmt);
std::string render_correctness_prompt(const std::string& nl, const std::string& stmt);
std::string render_difficulty_filter_prompt(const std::string& nl, const std::string& stmt);
std::string render_repair_prompt(const std::string& code, const std::string& errors);

// True when `rendered` differs from `tpl` only inside the given placeholder
// slots; on failure `why` (when non-null) describes the first divergence.
bool matches_outside_slots(const std::string& tpl, const std::string& rendered,
                           const std::vector<std::string>& placeholders,
                           std::string* why = nullptr);

}  // namespace leanevo
