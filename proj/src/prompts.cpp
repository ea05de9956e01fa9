#include "leanevo/prompts.hpp"

#include <set>
#include <stdexcept>

namespace leanevo {

namespace {

std::string replace_once(std::string text, const std::string& slot, const std::string& value) {
  auto pos = text.find(slot);
  if (pos == std::string::npos) {
    throw std::logic_error("template is missing slot " + slot);
  }
  return text.replace(pos, slot.size(), value);
}

const char* kDomainTemplate =
    R"TPL(Your task is to start with a given Lean 4 formalized problem and follow the strategy below to formulate a new problem in a different mathematical domain.

### Transformation Strategy

Step 1. Deconstruction & Abstraction
Identify the original statement's abstract logical skeleton by isolating its core components. This involves recognizing the underlying mathematical objects, the essential operations being performed, and the fundamental relationship being asserted.

Step 2. Analogy & Transfer

Find a parallel structure in a new mathematical domain by identifying an analogous sequence of objects in the list below.

{Domain List}

Then, translate the original operations and relations into concepts that are natural within this new context.

Step 3. Instantiation & Packaging

Formulate a new, concrete problem by applying the transferred structure and operations to the analogous objects. Package this new proposition into a clear natural language description and a rigorous formal statement.

Evolved variants should follow the following requirements:
1. Each variant should be mathematically rigorous and meaningful
2. Each variant should be syntax correct and a valid Lean 4 statement
3. Each variant should differ from the original mathematical domain
4. Each variant should follow the same output format as "### Example Variant Format"

### Example Variant Format:
```NL Description
Prove that ...
```
```Formal Statement
... := by sorry
```
```Domain
Target Domain in the list
```

Please provide 3-5 variants following the strategies and requirements above, based on original statement.

### Original Formal Statement
```lean4
{Original Formal Statement}
```

### Evolution Results (3-5 variants in other mathematical domains)
)TPL";

const char* kDifficultyUpTemplate =
    R"TPL(Your task is to evolve a given formal statement into several, more complex formal statements, according to the provided strategies and requirements. For each new formal statement, you must provide its corresponding natural language meaning.

### Difficulty Enhancement Strategy

Your objective is to {strategy} for the original statement.

First, understand the core concept and structure of the original formal statement. Identify its key logical components, such as variables, propositions, logical operators, quantifiers, conditions, and the overall scope. Then, you can select from a range of strategies, including but not limited to the following, to enhance difficulty:

{Specific Methods}

...

### Evolution Requirements

Evolved variants should follow the following requirements:
1. Each variant must represent a genuine enhancement of its proof's logic and difficulty, not just an increase in superficial complexity.
2. Each variant should be mathematically rigorous and meaningful
3. Each variant should be syntax correct and a valid Lean 4 statement
4. Each variant should be different from the original statement and other variants
5. Each variant should follow the same output format as "### Example Variant Format".

### Example Variant Format:
```NL Description
Prove that ...
```
```Formal Statement
... := by sorry
```

Please provide 3-5 variants following the strategies and requirements.

### Original Formal Statement
```lean4
{Original Formal Statement}
```

### Evolution Results (3-5 variants with increasing difficulty)
)TPL";

const char* kDifficultyDownTemplate =
    R"TPL(Your task is to evolve a given formal statement into several, simpler formal statements, according to the provided strategies and requirements. For each new formal statement, you must provide its corresponding natural language meaning.

### Difficulty Reduction Strategy

Your objective is to {strategy} for the original statement.

First, understand the core concept and structure of the original formal statement. Identify its key logical components, such as variables, propositions, logical operators, quantifiers, conditions, and the overall scope. Then, you can select from a range of strategies, including but not limited to the following, to reduce difficulty:

{Specific Methods}

...

### Evolution Requirements

Evolved variants should follow the following requirements:
1. Each variant must represent a genuine simplification of its proof's logic and structure, not just a cosmetic rephrasing.
2. Each variant should be mathematically rigorous and meanigful
3. Each variant should be syntax correct and a valid Lean 4 statement
4. Each variant should be different from the original statement and other variants
5. Each variant should follow the same output format as "### Example Variant Format".

### Example Variant Format:
```NL Description
Prove that ...
```
```Formal Statement
... := by sorry
```

Please provide 3-5 variants following the strategies and requirements.

### Original Formal Statement
```lean4
{Original Formal Statement}
```

### Evolution Results (3-5 variants with decreasing difficulty)
)TPL";

const char* kConsistencyTemplate =
    R"TPL(You will be provided with a Natural Language Description and a Formal Statement. Please judge if they are consistent, and provide specific analysis:

Natural Language Description:
```Problem
{Natural Language Description}
```
Formal Statement:
```lean4
{Formal Statement}
```

For your response, please follow this example format:
**Consistency Analysis:**
```analysis
Your detailed analysis
```
**Judge Result:**
```judge
Consistent or Inconsistent
```

Now, please provide your formal answer:
)TPL";

const char* kCorrectnessTemplate =
    R"TPL(You will be provided with a Natural Language Description and a Formal Statement. Please judge if the mathematical statement is correct, and provide specific analysis:

Natural Language Description:
```Problem
{original nl}
```

Formal Statement:
```lean4
{correct formal statement}
```

Please analyze the mathematical correctness by considering:
1. Whether the problem is provable (can be proven or disproven)
2. Whether the problem statement is well-formed and meaningful
3. Whether there are any logical contradictions or inconsistencies

For your response, please follow this example format:
**Mathematical Correctness Analysis:**
```analysis
Your detailed analysis
```
**Judge Result:**
```judge
Correct or Incorrect
```

Now, please provide your formal answer:
)TPL";

const char* kDifficultyFilterTemplate =
    R"TPL(You will be provided with a Natural Language Description and a Formal Statement. Your task is to classify the difficulty of problem in Lean 4:

Natural Language Description:
```Problem
{Natural Language Description}
```
Formal Statement:
```lean4
{Formal Statement}
```

Please analyze the problem and determine if it is Low-difficulty. Here are the criteria for a Low-difficulty problem:
1. Simple calculations
2. Simple algebraic manipulations
3. Solving single variable linear equations (by just a 1-step calculation)
4. Inequalities proved by an easy sum-of-squares technique

Conversely, the following types of problems should NOT be classified as Low-difficulty:
1. Inequality proving with the square root (might be more complex)
2. More complex inequalities, limits, and integrals
3. Problems dealing with integers (more related to number theory)
4. Problems involving higher order roots, complex numbers, matrices, polynomials, group, finite-sum, or functional equations (since these might shed lights on other hard problems)

For your response, please follow this example format:

**Difficulty Analysis:**
```analysis
Your detailed analysis
```
**Judge Result:**
- Is Low-difficulty:
```judge
Yes or No
```

Now, please provide your formal answer:
)TPL";

const char* kRepairTemplate =
    R"TPL(Your task is to fix the code based on the errors and provide a corrected version. Please also provide a detailed analysis of the changes you made. You will be provided with an incorrect Lean4 code snippet and a list of corresponding errors.

Incorrect Lean4 Code:
```lean4
{incorrect lean4 code}
```
Error List:
```errors
{errors}
```

Please modify the incorrect Lean 4 code according to the following requirements:
1.The corrected statement must be syntactically valid and well-typed according to Lean4 rules.
2.The correction should maintain the original mathematical meaning that the user was likely trying to express in the statement.
3.The corrected Lean 4 code must end with ':= by sorry'.

For your response, please follow this example format:
**Modification Analysis**
```analysis
Your detailed analysis
```
**Corrected Lean4 Code**
```lean4
Your corrected Lean4 code
```

Now, please provide your formal answer:
)TPL";

}  // namespace

const DomainList& DomainList::preset() {
  static const DomainList list{{"Algebra", "Number Theory", "Integral", "Precalculus",
                                "Differentiation", "Multivariable Calculus", "Sequences Series",
                                "Applied Mathematics", "Discrete Mathematics", "Geometry",
                                "Calculus", "Other"}};
  return list;
}

std::string DomainList::formatted() const {
  std::string out = "[";
  for (std::size_t i = 0; i < domains.size(); ++i) {
    if (i) out += ", ";
    out += '"' + domains[i] + '"';
  }
  out += ']';
  return out;
}

bool DomainList::contains(const std::string& name) const {
  for (const auto& d : domains) {
    if (d == name) return true;
  }
  return false;
}

void DomainList::validate() const {
  if (domains.empty()) throw std::invalid_argument("domain list must be non-empty");
  std::set<std::string> seen;
  for (const auto& d : domains) {
    if (!seen.insert(d).second) throw std::invalid_argument("duplicate domain: " + d);
  }
}

const std::vector<DifficultyStrategy>& DifficultyStrategy::upward() {
  static const std::vector<DifficultyStrategy> strategies = {
      {1, +1, "Complicate the Logical Structure",
       {"(1) Construct a new problem that increases the nesting depth and layers of the "
        "original problem's propositional logic.",
        "(2) Construct a new problem by introducing a logical system with complex dependencies "
        "between its components.",
        "(3) Construct a new problem whose internal structure is obscured by multiple layers "
        "of non-obvious equivalent transformations."}},
      {2, +1, "Increase the Mathematical Depth",
       {"(1) Construct a new problem that relies on a deeper theoretical framework.",
        "(2) Construct a new problem that requires a longer, but logically similar, chain of "
        "reasoning to solve.",
        "(3) Construct a new problem that positions the original problem as a critical "
        "sub-problem or lemma within its proof."}},
      {3, +1, "Elevate Abstraction and Generalization",
       {"(1) Construct a new problem by elevating and generalizing a specific instance or "
        "special case from the original problem into a universal proposition that must be "
        "proven.",
        "(2) Construct a new problem that adds stricter conditions, requiring reasoning and "
        "verification under them.",
        "(3) Construct a new problem whose proof requires the fusion of concepts or tools "
        "from different knowledge domains."}},
      {4, +1, "Intensify Constraints and Precision",
       {"(1) Construct a new problem that increases complexity by establishing critical "
        "boundaries or singularities within the problem's domain.",
        "(2) Construct a new problem that adds specific, strong constraints, requiring the "
        "discovery of an optimal solution or an extremal state.",
        "(3) Construct a new problem with heightened rigor requirements, making it necessary "
        "to provide a strict argument for the existence, uniqueness, or enumeration of the "
        "solution(s)."}},
      {5, +1, "Add Parametric and Analytical Complexity",
       {"(1) Construct a new problem that broadens the hypothesis space and increases "
        "analytical complexity by introducing or adjusting explicit parameters.",
        "(2) Construct a new problem whose internal structure spans both discrete and "
        "continuous forms, requiring a transformation between them (e.g., the limit "
        "relationship between a sum and an integral) to be solved."}},
  };
  return strategies;
}

const std::vector<DifficultyStrategy>& DifficultyStrategy::downward() {
  static const std::vector<DifficultyStrategy> strategies = {
      {1, -1, "Simplify the Logical Structure",
       {"(1) Construct a new problem that decreases the nesting depth and layers of the "
        "proposition's logic.",
        "(2) Construct a new problem containing a logical system with weaker or no "
        "dependencies between its components.",
        "(3) Construct a new problem whose internal structure is transparent, solvable "
        "through direct logical relations rather than non-obvious transformations."}},
      {2, -1, "Reduce the Mathematical Depth",
       {"(1) Construct a new problem that relies on a more elementary theoretical framework.",
        "(2) Construct a new problem that only requires completing the initial steps or the "
        "final conclusion of the original problem's longer reasoning chain.",
        "(3) Construct a new problem by isolating a key lemma or an intermediate step from "
        "the original problem's proof and setting it as the sole objective."}},
      {3, -1, "Reduce Abstraction and Specialize",
       {"(1) Construct a new problem by taking a general or abstract proposition and creating "
        "a specific, concrete instance of it to be solved or verified.",
        "(2) Construct a new problem that replaces abstract symbols and variables with "
        "concrete numerical values or tangible examples to lower the barrier to "
        "understanding.",
        "(3) Construct a new problem by reformulating it so that it can be solved using "
        "concepts and tools from a single, self-contained knowledge domain, avoiding "
        "interdisciplinary fusion."}},
      {4, -1, "Loosen Constraints and Precision",
       {"(1) Construct a new problem by restricting its domain to regular cases, excluding "
        "critical boundaries or singularities.",
        "(2) Construct a new problem that requires finding any feasible solution rather than "
        "an optimal or extremal one.",
        "(3) Construct a new problem that asks for a single concrete example of a solution, "
        "rather than a rigorous proof of its existence, uniqueness, or enumeration."}},
      {5, -1, "Reduce Parametric and Analytical Complexity",
       {"(1) Construct a new problem that reduces the dimension of analysis by reducing the "
        "number of variables required to address the problem or by simplifying a complex "
        "functional relationship between parameters to a linear one."}},
  };
  return strategies;
}

DifficultyStrategy DifficultyStrategy::get(int id, int direction) {
  if (id < 1 || id > 5) throw std::invalid_argument("strategy id must be 1..5");
  if (direction != +1 && direction != -1) {
    throw std::invalid_argument("strategy direction must be +1 or -1");
  }
  const auto& table = direction > 0 ? upward() : downward();
  return table[static_cast<std::size_t>(id - 1)];
}

std::string DifficultyStrategy::methods_text() const {
  std::string out;
  for (std::size_t i = 0; i < methods.size(); ++i) {
    if (i) out += '\n';
    out += methods[i];
  }
  return out;
}

const std::string& domain_prompt_template() {
  static const std::string tpl = kDomainTemplate;
  return tpl;
}
const std::string& difficulty_up_prompt_template() {
  static const std::string tpl = kDifficultyUpTemplate;
  return tpl;
}
const std::string& difficulty_down_prompt_template() {
  static const std::string tpl = kDifficultyDownTemplate;
  return tpl;
}
const std::string& consistency_prompt_template() {
  static const std::string tpl = kConsistencyTemplate;
  return tpl;
}
const std::string& correctness_prompt_template() {
  static const std::string tpl = kCorrectnessTemplate;
  return tpl;
}
const std::string& difficulty_filter_prompt_template() {
  static const std::string tpl = kDifficultyFilterTemplate;
  return tpl;
}
const std::string& repair_prompt_template() {
  static const std::string tpl = kRepairTemplate;
  return tpl;
}

std::string render_domain_prompt(const std::string& formal_statement, const DomainList& domains) {
  if (formal_statement.empty()) throw std::invalid_argument("formal statement must be non-empty");
  domains.validate();
  std::string out = replace_once(domain_prompt_template(), "{Domain List}", domains.formatted());
  return replace_once(std::move(out), "{Original Formal Statement}", formal_statement);
}

std::string render_difficulty_prompt(const std::string& formal_statement,
                                     const DifficultyStrategy& strategy) {
  if (formal_statement.empty()) throw std::invalid_argument("formal statement must be non-empty");
  const std::string& tpl = strategy.direction > 0 ? difficulty_up_prompt_template()
                                                  : difficulty_down_prompt_template();
  std::string out = replace_once(tpl, "{strategy}", strategy.title);
  out = replace_once(std::move(out), "{Specific Methods}", strategy.methods_text());
  return replace_once(std::move(out), "{Original Formal Statement}", formal_statement);
}

std::string render_consistency_prompt(const std::string& nl, const std::string& stmt) {
  std::string out = replace_once(consistency_prompt_template(), "{Natural Language Description}", nl);
  return replace_once(std::move(out), "{Formal Statement}", stmt);
}

std::string render_correctness_prompt(const std::string& nl, const std::string& stmt) {
  std::string out = replace_once(correctness_prompt_template(), "{original nl}", nl);
  return replace_once(std::move(out), "{correct formal statement}", stmt);
}

std::string render_difficulty_filter_prompt(const std::string& nl, const std::string& stmt) {
  std::string out =
      replace_once(difficulty_filter_prompt_template(), "{Natural Language Description}", nl);
  return replace_once(std::move(out), "{Formal Statement}", stmt);
}

std::string render_repair_prompt(const std::string& code, const std::string& errors) {
  std::string out = replace_once(repair_prompt_template(), "{incorrect lean4 code}", code);
  return replace_once(std::move(out), "{errors}", errors);
}

bool matches_outside_slots(const std::string& tpl, const std::string& rendered,
                           const std::vector<std::string>& placeholders, std::string* why) {
  // literal template segments between placeholder occurrences, in order
  std::vector<std::string> segments;
  std::size_t pos = 0;
  while (pos <= tpl.size()) {
    std::size_t best = std::string::npos;
    std::size_t best_len = 0;
    for (const auto& p : placeholders) {
      std::size_t at = tpl.find(p, pos);
      if (at < best) {
        best = at;
        best_len = p.size();
      }
    }
    if (best == std::string::npos) {
      segments.push_back(tpl.substr(pos));
      break;
    }
    segments.push_back(tpl.substr(pos, best - pos));
    pos = best + best_len;
  }

  std::size_t at = 0;
  for (std::size_t i = 0; i < segments.size(); ++i) {
    const std::string& seg = segments[i];
    if (seg.empty()) continue;
    std::size_t found = rendered.find(seg, at);
    if (found == std::string::npos || (i == 0 && found != 0)) {
      if (why) *why = "missing template segment: " + seg.substr(0, 60);
      return false;
    }
    at = found + seg.size();
  }
  if (!segments.empty() && !segments.back().empty() && at != rendered.size()) {
    if (why) *why = "trailing bytes after the final template segment";
    return false;
  }
  return true;
}

}  // namespace leanevo
