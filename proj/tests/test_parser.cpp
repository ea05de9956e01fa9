#include <doctest.h>

#include "leanevo/parser.hpp"
#include "leanevo/rng.hpp"
#include "leanevo/printer.hpp"

using namespace leanevo;

namespace {

Statement parse_ok(const std::string& src) {
  auto res = parse_statement(src);
  REQUIRE_MESSAGE(res.ok(), (res.error ? res.error->message() : "no statement"));
  return *res.statement;
}

}  // namespace

TEST_CASE("parses the evolved_thm fixture into the expected shape") {
  Statement s = parse_ok(
      "theorem evolved_thm (x y : ℝ) (h₀ : x * y = 4) (h₁ : x > y) "
      "(h₂ : x^3 - y^3 = 3555) : x^2 + y^2 = 233 := by sorry");
  CHECK(s.name == "evolved_thm");
  REQUIRE(s.binders.size() == 1);
  CHECK(s.binders[0].names == std::vector<std::string>{"x", "y"});
  CHECK(s.binders[0].type->name == "ℝ");
  REQUIRE(s.hypotheses.size() == 3);
  CHECK(s.hypotheses[0].label == "h₀");
  const Expr& h0 = *s.hypotheses[0].prop;
  REQUIRE(h0.kind == Expr::Kind::Relation);
  CHECK(h0.rel == RelOp::Eq);
  CHECK(h0.lhs()->kind == Expr::Kind::Binary);
  CHECK(h0.lhs()->bop == BinOp::Mul);
  CHECK(h0.rhs()->name == "4");
  const Expr& h1 = *s.hypotheses[1].prop;
  CHECK(h1.rel == RelOp::Gt);
  const Expr& h2 = *s.hypotheses[2].prop;
  REQUIRE(h2.lhs()->kind == Expr::Kind::Binary);
  CHECK(h2.lhs()->bop == BinOp::Sub);
  CHECK(h2.lhs()->lhs()->bop == BinOp::Pow);
  CHECK(h2.rhs()->name == "3555");
  const Expr& goal = *s.goal;
  REQUIRE(goal.kind == Expr::Kind::Relation);
  CHECK(goal.lhs()->bop == BinOp::Add);
  CHECK(goal.rhs()->name == "233");
}

TEST_CASE("minimal statement with no hypotheses") {
  Statement s = parse_ok("theorem t (a : ℝ) : a = a := by sorry");
  CHECK(s.hypotheses.empty());
  CHECK(s.binders.size() == 1);
  CHECK(s.goal->kind == Expr::Kind::Relation);
}

TEST_CASE("missing relation operand reports position and lexeme") {
  auto res = parse_statement("theorem bad (a : ℝ) : a = := by sorry");
  REQUIRE_FALSE(res.ok());
  CHECK(res.error->expected == "expression");
  CHECK(res.error->found == ":=");
}

TEST_CASE("def prelude is rejected, not silently skipped") {
  std::string src =
      "def u_seq : ℕ → ℤ\n  | 0 => 133\n"
      "theorem variant_2 (n : ℕ) : 133 ∣ u_seq n := by sorry";
  auto res = parse_statement(src);
  REQUIRE_FALSE(res.ok());
  CHECK(res.error->expected == "'theorem'");
  CHECK(res.error->found == "def");

  // opting in folds the prelude into the header and keeps it verbatim
  ParseOptions lenient;
  lenient.allow_unknown_prelude = true;
  auto ok = parse_statement(src, lenient);
  REQUIRE(ok.ok());
  CHECK(ok.statement->name == "variant_2");
  CHECK(ok.statement->header.find("def u_seq") == 0);
  std::string printed = print_statement(*ok.statement);
  CHECK(printed.find("def u_seq") == 0);
  auto again = parse_statement(printed, lenient);
  REQUIRE(again.ok());
  CHECK(print_statement(*again.statement) == printed);
}

TEST_CASE("strict ident checking rejects unknown free identifiers") {
  ParseOptions strict;
  strict.strict_idents = true;
  auto bad = parse_statement("theorem t (a : ℝ) : a = mystery_const := by sorry", strict);
  REQUIRE_FALSE(bad.ok());
  CHECK(bad.error->expected == "known identifier");
  CHECK(bad.error->found == "mystery_const");
  // declared names and table constants pass
  CHECK(parse_statement("theorem t (a : ℝ) (h : a > 0) : dist a a = 0 := by sorry", strict)
            .ok());
  // the table is configurable
  strict.constants.insert("mystery_const");
  CHECK(parse_statement("theorem t (a : ℝ) : a = mystery_const := by sorry", strict).ok());
}

TEST_CASE("operator precedence matches the Lean conventions") {
  Statement s = parse_ok("theorem t (a b c : ℝ) : a + b * c ^ 2 = a := by sorry");
  const Expr& lhs = *s.goal->lhs();
  REQUIRE(lhs.bop == BinOp::Add);
  REQUIRE(lhs.rhs()->bop == BinOp::Mul);
  CHECK(lhs.rhs()->rhs()->bop == BinOp::Pow);

  // ¬ binds looser than relations: ¬ a = b is ¬(a = b)
  Statement t = parse_ok("theorem t (a b : ℝ) : ¬ a = b := by sorry");
  REQUIRE(t.goal->kind == Expr::Kind::Unary);
  CHECK(t.goal->operand()->kind == Expr::Kind::Relation);

  // → is right associative and looser than ∧
  Statement u = parse_ok("theorem t (P Q R : Prop) (hp : P) : P ∧ Q → Q → R := by sorry");
  REQUIRE(u.goal->bop == BinOp::Imp);
  CHECK(u.goal->lhs()->bop == BinOp::And);
  CHECK(u.goal->rhs()->bop == BinOp::Imp);
}

TEST_CASE("ascii operator aliases are accepted") {
  Statement s = parse_ok("theorem t (a b : ℝ) (h : a >= b) : b <= a := by sorry");
  CHECK(s.hypotheses[0].prop->rel == RelOp::Ge);
  CHECK(s.goal->rel == RelOp::Le);
  Statement arrows = parse_ok("theorem t (f : ℝ -> ℝ) (x : ℝ) : f x = f x := by sorry");
  CHECK(arrows.binders[0].type->bop == BinOp::Imp);
}

TEST_CASE("divisibility parses as a binary operator and as a goal shape") {
  Statement s = parse_ok("theorem t (n : ℕ) : 133 ∣ 11^(n+2) + 12^(2*n+1) := by sorry");
  REQUIRE(s.goal->kind == Expr::Kind::Binary);
  CHECK(s.goal->bop == BinOp::Dvd);
  CHECK(s.goal->rhs()->bop == BinOp::Add);
  // ascii pipe alias
  Statement t = parse_ok("theorem t (n : ℕ) : 7 | n := by sorry");
  CHECK(t.goal->bop == BinOp::Dvd);
}

TEST_CASE("binder vs hypothesis classification") {
  // arrow types with no bound references stay binders
  Statement s = parse_ok(
      "theorem t (f g : ℝ → ℝ) (hf : f 0 = g 0) : f 1 = f 1 := by sorry");
  CHECK(s.binders.size() == 1);
  REQUIRE(s.hypotheses.size() == 1);
  CHECK(s.hypotheses[0].label == "hf");

  // opaque application referencing a binder is a hypothesis
  Statement u = parse_ok(
      "theorem t (f : ℝ → ℝ) (hf : ContinuousOn f (Set.Icc 0 1)) : f 0 = f 0 := by sorry");
  REQUIRE(u.hypotheses.size() == 1);
  CHECK(u.hypotheses[0].prop->kind == Expr::Kind::App);

  // type-head applications stay binders even when dependent
  Statement v = parse_ok(
      "theorem t (n : ℕ) (v : Fin (n + 1)) : n = n := by sorry");
  CHECK(v.binders.size() == 2);
  CHECK(v.hypotheses.empty());

  // implicit binders use braces
  Statement w = parse_ok("theorem t {n : ℕ} (hn : n > 0) : n = n := by sorry");
  REQUIRE(w.binders.size() == 1);
  CHECK(w.binders[0].implicit);
}

TEST_CASE("quantifiers, bounded quantifiers, and integrals") {
  Statement s = parse_ok(
      "theorem t (f : ℝ → ℝ) (h : ∀ x ∈ Set.Icc 0 1, f x ≥ 0) "
      ": ∃ y, f y = f y := by sorry");
  const Expr& h = *s.hypotheses[0].prop;
  REQUIRE(h.kind == Expr::Kind::Quantifier);
  CHECK(h.quant == QuantKind::Forall);
  CHECK(h.binder.names == std::vector<std::string>{"x"});
  REQUIRE(h.binder.domain != nullptr);
  CHECK(h.binder.domain->name == "Set.Icc");
  CHECK(s.goal->quant == QuantKind::Exists);

  Statement t = parse_ok(
      "theorem integral_t (f g : ℝ → ℝ) (h : ∀ x : ℝ, f x = g x) : "
      "∫ x in (0)..1, (f x)^3 ≠ ∫ x in (0)..1, (g x)^3 - 15 := by sorry");
  const Expr& goal = *t.goal;
  REQUIRE(goal.kind == Expr::Kind::Relation);
  CHECK(goal.rel == RelOp::Ne);
  REQUIRE(goal.lhs()->is_integral());
  REQUIRE(goal.rhs()->is_integral());
  // the right integral body extends over the subtraction
  CHECK(goal.rhs()->args[3]->bop == BinOp::Sub);
}

TEST_CASE("comments and headers are captured verbatim") {
  std::string src =
      "import Mathlib\nopen Real\n-- fixture comment\n"
      "theorem t (a : ℝ) : a = a := by sorry";
  Statement s = parse_ok(src);
  CHECK(s.header == "import Mathlib\nopen Real\n-- fixture comment\n");
  std::string printed = print_statement(s);
  CHECK(printed.find("import Mathlib") == 0);
}

TEST_CASE("full proofs are replaced by the sorry trailer") {
  Statement s = parse_ok("theorem t (a : ℝ) : a = a := by rfl");
  CHECK(s.trailer == ":= by sorry");
  CHECK(print_statement(s).find(":= by sorry") != std::string::npos);
}

TEST_CASE("duplicate hypothesis labels are rejected") {
  auto res = parse_statement(
      "theorem t (a : ℝ) (h : a > 0) (h : a < 1) : a = a := by sorry");
  REQUIRE_FALSE(res.ok());
  CHECK(res.error->expected == "unique hypothesis label");
}

TEST_CASE("comma-separated binder names are tolerated") {
  Statement s = parse_ok("theorem t (m, n : ℤ) (h_1 : 2*m + n = 0) : m^3 ≠ n^3 - 15 := by sorry");
  CHECK(s.binders[0].names == std::vector<std::string>{"m", "n"});
}

TEST_CASE("unsupported syntax yields a parse error, not a crash") {
  CHECK_FALSE(parse_statement("theorem t : match x with | 0 => 1 := by sorry").ok());
  CHECK_FALSE(parse_statement("theorem (a : ℝ) : a = a := by sorry").ok());
  CHECK_FALSE(parse_statement("theorem t (a : ℝ) : a = a").ok());
  CHECK_FALSE(parse_statement("").ok());
}

TEST_CASE("parser is total: random byte soup yields errors, never crashes") {
  Rng rng(0xF00D);
  const std::string alphabet =
      "theorm(){}:=,∀∃∧∨¬→↔≤≥≠∈∣∫^*/+-abcxyzℝℕ0123456789 .\n\t\"'|<>!";
  // collect codepoint boundaries so slices stay valid utf-8
  std::vector<std::size_t> starts;
  for (std::size_t i = 0; i < alphabet.size(); ++i) {
    if ((static_cast<unsigned char>(alphabet[i]) & 0xC0) != 0x80) starts.push_back(i);
  }
  for (int trial = 0; trial < 500; ++trial) {
    std::string input;
    std::size_t len = rng.pick(120);
    for (std::size_t i = 0; i < len; ++i) {
      std::size_t k = rng.pick(starts.size());
      std::size_t begin = starts[k];
      std::size_t end = k + 1 < starts.size() ? starts[k + 1] : alphabet.size();
      input.append(alphabet, begin, end - begin);
    }
    auto res = parse_statement(input);
    if (res.ok()) {
      // anything that parses must round-trip
      std::string printed = print_statement(*res.statement);
      CHECK(parse_statement(printed).ok());
    } else {
      CHECK(res.error->position.offset <= input.size());
    }
  }
}

TEST_CASE("error positions lie within the input") {
  std::string src = "theorem bad (a : ℝ) : a = := by sorry";
  auto res = parse_statement(src);
  REQUIRE_FALSE(res.ok());
  CHECK(res.error->position.offset <= src.size());
  CHECK(res.error->position.line >= 1);
}
