"""Discriminator search and refinement-rule generation."""

import pytest

from mvlogic.axiomatizer import (
    Discriminator,
    find_discriminator,
    generate_refinement_rules,
    subsume_simplify,
    unary_profile,
)
from mvlogic.calculus import Rule
from mvlogic.errors import NotARefinement
from mvlogic.formula import parse_formula, parse_formula_set, substitute, var
from mvlogic.registry import (
    MAT_DM4,
    MAT_LETK_UB,
    MAT_PP6A1_UB,
    MAT_PP6_UB,
)
from mvlogic.semantics import Sound, check_rule_soundness, solve_valuations


def profile_oracle(m, formula, a):
    """Values the formula can take when p is pinned to a, computed through
    the valuation search instead of profile composition."""
    from mvlogic.formula import subformulas

    domain = subformulas(formula)
    cons = {var("p"): frozenset({a})}
    return frozenset(
        w[formula] for w in solve_valuations(m, domain, cons)
    )


def test_unary_profile_matches_valuation_oracle():
    for m in (MAT_PP6_UB, MAT_PP6A1_UB):
        for text in ("p", "~p", "@p", "@(p => p)" if "imp" in
                     m.algebra.interp else "@~p"):
            f = parse_formula(text)
            prof = unary_profile(m, f)
            for i, a in enumerate(m.carrier):
                assert prof[i] == profile_oracle(m, f, a)


def test_dm4_separators():
    d = find_discriminator(MAT_DM4, 1)
    assert isinstance(d, Discriminator)
    used = set()
    for a in MAT_DM4.carrier:
        used |= d.pos.get(a, frozenset()) | d.neg.get(a, frozenset())
    assert used == {parse_formula("p"), parse_formula("~p")}


REFERENCE_TABLE = {
    "hf": ("@p", "p"),
    "f": ("~p", "@p, p"),
    "n": ("", "p, @p, ~p"),
    "b": ("p, ~p", "@p"),
    "t": ("p", "@p, ~p"),
    "ht": ("p, @p", ""),
}


def test_pp6_ub_discriminator_table():
    d = find_discriminator(MAT_PP6_UB, 1)
    assert isinstance(d, Discriminator)
    des = MAT_PP6_UB.designated
    undes = frozenset(MAT_PP6_UB.carrier) - des
    for a, (pos_text, neg_text) in REFERENCE_TABLE.items():
        pos = parse_formula_set(pos_text)
        neg = parse_formula_set(neg_text)
        assert d.pos.get(a, frozenset()) == pos
        assert d.neg.get(a, frozenset()) == neg
        i = MAT_PP6_UB.carrier.index(a)
        for f in pos:
            assert unary_profile(MAT_PP6_UB, f)[i] <= des
        for f in neg:
            assert unary_profile(MAT_PP6_UB, f)[i] <= undes


def test_discriminator_isolates_values():
    d = find_discriminator(MAT_PP6_UB, 1)
    carrier = MAT_PP6_UB.carrier
    des = MAT_PP6_UB.designated
    for i, a in enumerate(carrier):
        for j, b in enumerate(carrier):
            if a == b:
                continue
            separated = False
            for f in d.formulas(a) | d.formulas(b):
                pa = unary_profile(MAT_PP6_UB, f)[i] <= des
                pb = unary_profile(MAT_PP6_UB, f)[j] <= des
                na = unary_profile(MAT_PP6_UB, f)[i] <= (
                    frozenset(carrier) - des
                )
                nb = unary_profile(MAT_PP6_UB, f)[j] <= (
                    frozenset(carrier) - des
                )
                if (pa and nb) or (na and pb):
                    separated = True
                    break
            assert separated, (a, b)


def test_generate_refinement_rules_shape():
    d = find_discriminator(MAT_PP6A1_UB, 1)
    rules = generate_refinement_rules(MAT_PP6A1_UB, MAT_LETK_UB, d)
    # every imp entry of the A1 matrix has three values, LET_K+ keeps one
    assert len(rules) == 72
    assert all(r.name.startswith("del_imp_") for r in rules)


def test_generate_refinement_rules_example_verbatim():
    d = find_discriminator(MAT_PP6A1_UB, 1)
    rules = generate_refinement_rules(MAT_PP6A1_UB, MAT_LETK_UB, d)
    by_name = {r.name: r for r in rules}
    rule = by_name["del_imp_b_hf_n"]
    assert rule.antecedent == parse_formula_set("p, ~p, @q")
    assert rule.succedent == parse_formula_set(
        "@p, q, p => q, ~(p => q), @(p => q)"
    )


def test_generate_refinement_rules_no_deletions():
    d = find_discriminator(MAT_LETK_UB, 1)
    assert generate_refinement_rules(MAT_LETK_UB, MAT_LETK_UB, d) == []


def test_generate_refinement_rules_errors():
    d = find_discriminator(MAT_PP6A1_UB, 1)
    with pytest.raises(NotARefinement):
        generate_refinement_rules(MAT_DM4, MAT_LETK_UB, d)
    with pytest.raises(NotARefinement):
        # arguments swapped: the A1 matrix is not a refinement of LET_K+
        generate_refinement_rules(MAT_LETK_UB, MAT_PP6A1_UB, d)


def test_generated_rules_sound():
    d = find_discriminator(MAT_PP6A1_UB, 1)
    rules = generate_refinement_rules(MAT_PP6A1_UB, MAT_LETK_UB, d)
    for rule in rules:
        assert isinstance(
            check_rule_soundness(rule, [MAT_LETK_UB]), Sound
        ), rule.name


def test_subsume_simplify():
    p, q = var("p"), var("q")
    base = Rule("r2cl", frozenset(), parse_formula_set("p, p => q"))
    diluted = Rule(
        "fat", frozenset({parse_formula("@q")}),
        parse_formula_set("p, p => q, @p"),
    )
    kept = subsume_simplify([base, diluted])
    assert kept == [base]
    # renamed duplicates collapse to the first
    renamed = Rule(
        "copy",
        frozenset(),
        frozenset(
            substitute(f, {"p": q, "q": p}) for f in base.succedent
        ),
    )
    assert subsume_simplify([base, renamed]) == [base]
    # incomparable rules survive
    other = Rule("other", parse_formula_set("q"), parse_formula_set("~q"))
    assert subsume_simplify([base, other]) == [base, other]
