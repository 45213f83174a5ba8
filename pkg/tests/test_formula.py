from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from expdef.cyclotomic import CycNum
from expdef.definitions import BUILDERS, def_int_forall, def_kernel_generators, def_rat_exists, def_real_abelian
from expdef.formula import (
    Add, And, Eq, Exists, Exp, Forall, Implies, Mul, Neg, Not, One, Or, Pred, RatConst, SexprError, Var, Zero,
    all_vars, bound_vars, desugar, expand_macros, free_vars, integer_literal, is_official, parse_sexpr,
    prenex, quantifier_complexity, render, to_sexpr,
)
from expdef.rab import cos_decomposition

x, y, z = Var("x"), Var("y"), Var("z")


def test_int_forall_renders_as_expected():
    assert render(def_int_forall().formula) == "∀x (E(x) = 1 → E(y·x) = 1)"
    assert render(def_int_forall().formula, "latex") == r"\forall x\,(E(x) = 1 \rightarrow E(y \cdot x) = 1)"


@pytest.mark.parametrize("formula, word", [
    (Eq(x, y), ""),
    (Forall("x", Eq(x, y)), "∀"),
    (Exists("x", Eq(x, y)), "∃"),
    (Forall("x", Exists("y", Forall("z", Eq(x, Add(y, z))))), "∀∃∀"),
    (Not(Exists("x", Eq(x, y))), "∀"),
    (Implies(Exists("x", Eq(x, y)), Eq(y, Zero())), "∀"),
    (And((Exists("x", Eq(x, y)), Exists("z", Eq(z, y)))), "∃"),
    (Or((Forall("x", Eq(x, y)), Exists("z", Eq(z, y)))), "∀∃"),
])
def test_quantifier_complexity(formula, word):
    assert quantifier_complexity(formula) == word


def test_builder_complexities():
    assert def_int_forall().complexity == "∀"
    assert def_rat_exists().complexity == "∃"
    assert def_kernel_generators("general").complexity == "∀∃∀"
    assert def_kernel_generators("prime-log").complexity == "∀∃"


def test_prenex_keeps_free_variables_and_separates_clashing_binders():
    f = And((Exists("x", Eq(x, y)), Forall("x", Eq(Exp(x), One()))))
    p = prenex(f)
    assert free_vars(p) == {"y"}
    assert len(set(bound_vars(p))) == 2


def test_macro_expansion_is_hygienic():
    # the Int body binds x; applying it to a free x must not capture
    f = Pred("Int", (x,))
    g = expand_macros(f)
    assert free_vars(g) == {"x"}
    assert isinstance(g, Forall) and g.var != "x"
    assert render(g) == f"∀{g.var} (E({g.var}) = 1 → E(x·{g.var}) = 1)"


def test_nested_macros_get_distinct_binders():
    f = And((Pred("Rat", (x,)), Pred("Rat", (y,))))
    g = expand_macros(f)
    names = bound_vars(g)
    assert len(names) == len(set(names)) == 4
    assert free_vars(g) == {"x", "y"}


def test_expansion_is_idempotent():
    for build in BUILDERS.values():
        d = build()
        assert expand_macros(d.formula) == d.formula
        assert desugar(d.formula) == d.formula


def test_unknown_macro_and_arity():
    with pytest.raises(KeyError):
        expand_macros(Pred("Nope", (x,)))
    with pytest.raises(ValueError):
        expand_macros(Pred("Int", (x, y)))


def test_builders_emit_official_formulas():
    for build in BUILDERS.values():
        d = build()
        assert is_official(d.formula), d.name
        assert free_vars(d.formula) == set(d.free)
        assert not any(isinstance(a, Pred) for a in _subformulas(d.formula))


def _subformulas(f):
    yield f
    for child in getattr(f, "args", ()) if isinstance(f, (And, Or)) else ():
        yield from _subformulas(child)
    for attr in ("arg", "left", "right", "body"):
        child = getattr(f, attr, None)
        if child is not None and not isinstance(child, (Var, Add, Mul, Neg, Exp, One, Zero, RatConst)):
            yield from _subformulas(child)


def test_rational_definition_clears_denominators():
    d = def_real_abelian(cos_decomposition(CycNum.rational(Fraction(7, 3))))
    assert d.formula == Eq(Mul(integer_literal(3), x), integer_literal(7))
    assert d.complexity == ""
    assert is_official(d.formula)


def test_desugar_mixed_denominators():
    f = Eq(Add(Mul(RatConst(Fraction(1, 2)), x), RatConst(Fraction(1, 3))), y)
    g = desugar(f)
    assert is_official(g)
    # 6 * (x/2 + 1/3) = 6y  <=>  3x + 2 = 6y
    assert g == Eq(Add(Mul(integer_literal(3), x), integer_literal(2)), Mul(integer_literal(6), y))


def test_desugar_refuses_rationals_inside_E():
    with pytest.raises(ValueError):
        desugar(Eq(Exp(RatConst(Fraction(1, 2))), x))


def test_integer_literals_use_only_one():
    assert integer_literal(0) == Zero()
    assert integer_literal(1) == One()
    assert integer_literal(-2) == Neg(Add(One(), One()))
    assert render(Eq(integer_literal(3), x)) == "1 + 1 + 1 = x"


# -- s-expressions -------------------------------------------------------

names = st.sampled_from(["x", "y", "z", "w_1"])


def _terms():
    leaves = st.one_of(
        st.just(Zero()), st.just(One()), names.map(Var),
        st.fractions(min_value=-5, max_value=5, max_denominator=6).filter(lambda q: q not in (0, 1)).map(RatConst),
    )
    return st.recursive(leaves, lambda t: st.one_of(
        t.map(Neg), t.map(Exp), st.tuples(t, t).map(lambda p: Add(*p)), st.tuples(t, t).map(lambda p: Mul(*p)),
    ), max_leaves=6)


def _formulas():
    atoms = st.tuples(_terms(), _terms()).map(lambda p: Eq(*p))
    return st.recursive(atoms, lambda f: st.one_of(
        f.map(Not),
        st.tuples(f, f).map(lambda p: Implies(*p)),
        st.lists(f, min_size=2, max_size=3).map(lambda fs: And(tuple(fs))),
        st.lists(f, min_size=2, max_size=3).map(lambda fs: Or(tuple(fs))),
        st.tuples(names, f).map(lambda p: Exists(*p)),
        st.tuples(names, f).map(lambda p: Forall(*p)),
    ), max_leaves=5)


@given(_formulas())
def test_sexpr_round_trip(f):
    assert parse_sexpr(to_sexpr(f)) == f


@given(_formulas())
def test_prenex_preserves_free_variables(f):
    p = prenex(f)
    assert free_vars(p) == free_vars(f)
    assert quantifier_complexity(p) == quantifier_complexity(f)


def test_sexpr_builders_round_trip():
    for build in BUILDERS.values():
        d = build()
        assert parse_sexpr(to_sexpr(d.formula)) == d.formula
        assert render(d.formula, "sexpr") == to_sexpr(d.formula)


def test_sexpr_macro_and_literal():
    f = parse_sexpr("(pred Int (* 2/3 y))")
    assert f == Pred("Int", (Mul(RatConst(Fraction(2, 3)), y),))
    assert parse_sexpr("(= -2 x)") == Eq(RatConst(-2), x)


@pytest.mark.parametrize("src", [
    "(= x)", "(and (= x y))", "(forall (x) (= x y))", "(= x y", "(= x y))", "(xor (= x y) (= x y))",
    "(= (E x y) 1)", "(= and 1)", "", "(= x y) (= y x)",
])
def test_sexpr_errors(src):
    with pytest.raises(SexprError):
        parse_sexpr(src)


def test_latex_renders_with_mathtext():
    mathtext = pytest.importorskip("matplotlib.mathtext")
    parser = mathtext.MathTextParser("path")
    for build in BUILDERS.values():
        s = build().render("latex")
        parser.parse(f"${s}$")


def test_all_vars_covers_bound_and_free():
    f = Forall("x", Eq(Mul(x, y), z))
    assert all_vars(f) == {"x", "y", "z"}
    assert free_vars(f) == {"y", "z"}
