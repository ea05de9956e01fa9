import pytest

import leanevo


SEED = (
    "theorem evolved_thm (x y : ℝ) (h₀ : x * y = 4) (h₁ : x > y) "
    "(h₂ : x^3 - y^3 = 3555) : x^2 + y^2 = 233 := by sorry"
)


def test_parse_and_print_roundtrip():
    stmt = leanevo.parse_statement(SEED)
    assert stmt.name == "evolved_thm"
    assert stmt.binder_names == ["x", "y"]
    assert stmt.hypothesis_labels == ["h₀", "h₁", "h₂"]
    assert stmt.goal == "x^2 + y^2 = 233"
    printed = str(stmt)
    again = leanevo.parse_statement(printed)
    assert str(again) == printed


def test_parse_error_raises():
    with pytest.raises(ValueError):
        leanevo.parse_statement("theorem bad (a : ℝ) : a = := by sorry")


def test_structural_hash_alpha_equivalence():
    a = leanevo.structural_hash("theorem a (x : ℝ) : x = x := by sorry")
    b = leanevo.structural_hash("theorem b (y : ℝ) : y = y := by sorry")
    c = leanevo.structural_hash("theorem c (y : ℝ) : y + 0 = y := by sorry")
    assert a == b
    assert a != c


def test_free_vars():
    assert leanevo.free_vars("x * y = 4") == {"x", "y"}
    assert leanevo.free_vars("∀ x, x ≤ y") == {"y"}


def test_evolve_ast_is_deterministic():
    kwargs = dict(probability=1.0, seed=11, variants=4)
    first = leanevo.evolve_ast(SEED, **kwargs)
    second = leanevo.evolve_ast(SEED, **kwargs)
    assert [r["output"] for r in first] == [r["output"] for r in second]
    assert first, "p=1 on this seed must produce variants"
    for rec in first:
        assert rec["method"] == "AST"
        assert rec["output"].endswith(":= by sorry")
        assert "_auged" in rec["output"]


def test_closure_small_example():
    closure = leanevo.enumerate_closure(
        "theorem t (a b c : ℝ) : a + b = c := by sorry",
        rules=["commutativity", "symmetric-operand-swap"],
        depth=2,
    )
    assert not closure["truncated"]
    assert len(closure["statements"]) == 4


def test_rule_catalog_lists_seven_rules():
    catalog = leanevo.rule_catalog()
    assert len(catalog) == 7
    names = {entry["name"] for entry in catalog}
    assert "hypothesis-reordering" in names
    assert "dual-relation-conversion" in names


def test_prompt_rendering():
    prompt = leanevo.render_domain_prompt(SEED)
    assert "### Transformation Strategy" in prompt
    assert SEED in prompt
    up = leanevo.render_difficulty_prompt(SEED, 1, +1)
    assert "Complicate the Logical Structure" in up
    down = leanevo.render_difficulty_prompt(SEED, 1, -1)
    assert "Simplify the Logical Structure" in down
    assert "Algebra" in leanevo.preset_domains()


def test_parse_variants():
    response = (
        "```NL Description\nProve it.\n```\n"
        "```Formal Statement\ntheorem t : True := by sorry\n```\n"
        "```Domain\nGeometry\n```\n"
    )
    parsed = leanevo.parse_variants(response, expect_domain=True)
    assert len(parsed["variants"]) == 1
    assert parsed["variants"][0]["domain"] == "Geometry"
