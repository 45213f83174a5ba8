"""Macro predicates and the definition builders.

Each builder returns a :class:`Definition`: the source formula (with macro
applications), the official formula (expanded and desugared), and a
witness plan whose recipes name concrete values for the existential
variables. Recipes are expressions in the grammar of :mod:`expdef.expr`
and may mention tau, z(n), earlier variables, E(), numer(), denom() and,
for numeric models only, log().
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .cyclotomic import CycNum, root_of_unity
from .formula import (
    Add, DefinedPredicate, Eq, Exists, Exp, Forall, Formula, Implies, Mul, NameSupply, Neg, Not, One,
    Pred, RatConst, Var, Zero, bound_vars, conj, desugar, expand_with_hints, free_vars, integer_literal,
    quantifier_blocks, quantifier_complexity, register, render, to_sexpr,
)
from .rab import CosDecomposition, cos_decomposition


# -- witness plans -----------------------------------------------------

@dataclass
class WitnessPlan:
    """Recipes for existential (and free) variables plus extra universal probes."""

    assignments: dict[str, str] = field(default_factory=dict)
    probes: dict[str, tuple[str, ...]] = field(default_factory=dict)
    numeric_only: set[str] = field(default_factory=set)

    def with_assignments(self, **values: str) -> WitnessPlan:
        merged = dict(values)
        merged.update((k, r) for k, r in self.assignments.items() if k not in values)
        ordered = {k: merged[k] for k in list(values) + [k for k in self.assignments if k not in values]}
        return WitnessPlan(ordered, dict(self.probes), set(self.numeric_only))

    def to_json(self) -> dict:
        return {
            "assignments": dict(self.assignments),
            "probes": {k: list(v) for k, v in self.probes.items()},
            "numeric_only": sorted(self.numeric_only),
        }

    @classmethod
    def from_json(cls, data: dict) -> WitnessPlan:
        return cls(
            dict(data.get("assignments", {})),
            {k: tuple(v) for k, v in data.get("probes", {}).items()},
            set(data.get("numeric_only", [])),
        )


@dataclass
class Definition:
    name: str
    source: Formula
    formula: Formula
    free: tuple[str, ...]
    plan: WitnessPlan
    decomposition: CosDecomposition | None = None

    def __iter__(self):
        return iter((self.formula, self.plan))

    @property
    def complexity(self) -> str:
        return quantifier_complexity(self.formula)

    def render(self, fmt: str = "text") -> str:
        return render(self.formula, fmt)

    def to_json(self) -> dict:
        out = {
            "name": self.name,
            "formula": to_sexpr(self.formula),
            "free": list(self.free),
            "complexity": self.complexity,
            "blocks": [{"quantifier": q, "variables": xs} for q, xs in quantifier_blocks(self.formula)],
            "witness_plan": self.plan.to_json(),
        }
        if self.decomposition is not None:
            out["decomposition"] = self.decomposition.to_json()
        return out


# -- macro library -----------------------------------------------------

def _x(name: str) -> Var:
    return Var(name)


def _ker(t) -> Pred:
    return Pred("Ker", (t,))


KER = register(DefinedPredicate("Ker", ("x",), Eq(Exp(_x("x")), One())))

INT = register(DefinedPredicate(
    "Int", ("y",),
    Forall("x", Implies(_ker(_x("x")), _ker(Mul(_x("y"), _x("x"))))),
))

RAT = register(DefinedPredicate(
    "Rat", ("y",),
    Exists("z", Exists("w", conj(
        _ker(_x("z")), _ker(_x("w")), Not(Eq(_x("w"), Zero())), Eq(_x("z"), Mul(_x("w"), _x("y"))),
    ))),
    hints={"z": "numer(y)*tau", "w": "denom(y)*tau"},
))

INT_THETA = register(DefinedPredicate(
    "IntTheta", ("x",),
    Exists("t", conj(
        Eq(Exp(_x("t")), RatConst(2)),
        Pred("Rat", (Exp(Mul(_x("x"), _x("t"))),)),
        Pred("Rat", (_x("x"),)),
    )),
    hints={"t": "log(2)"},
    numeric_only=frozenset({"t"}),
))


def _kergen_body(int_macro: str) -> Formula:
    x, y, n = _x("x"), _x("y"), _x("n")
    return conj(
        _ker(x),
        Forall("y", Implies(_ker(y), Exists("n", conj(Pred(int_macro, (n,)), Eq(Mul(n, x), y))))),
    )


KERGEN = register(DefinedPredicate("KerGen", ("x",), _kergen_body("Int"), hints={"n": "y/x"}))
KERGEN_LOG = register(DefinedPredicate("KerGenLog", ("x",), _kergen_body("IntTheta"), hints={"n": "y/x"}))


def _jx(j: str, x: str) -> Mul:
    return Mul(_x(j), _x(x))


def _cos_eq(x: str, y: str, j: str) -> Formula:
    # y = 1/2 (E(jx) + E(-jx))
    return Eq(_x(y), Mul(RatConst(Fraction(1, 2)), Add(Exp(_jx(j, x)), Exp(Neg(_jx(j, x))))))


def _sin_eq(x: str, y: str, j: str) -> Formula:
    # y = 1/(2j) (E(jx) - E(-jx)), with j moved to the left
    return Eq(Mul(_x(j), _x(y)),
              Mul(RatConst(Fraction(1, 2)), Add(Exp(_jx(j, x)), Neg(Exp(Neg(_jx(j, x)))))))


def _sqrt_minus_one(j: str) -> Formula:
    return Eq(Mul(_x(j), _x(j)), Neg(One()))


_J_PROBES = {"j": ("z(4)", "z(4)^3")}

COS = register(DefinedPredicate(
    "Cos", ("x", "y"), Exists("j", conj(_sqrt_minus_one("j"), _cos_eq("x", "y", "j"))), hints={"j": "z(4)"}))
COS_ALL = register(DefinedPredicate(
    "CosAll", ("x", "y"), Forall("j", Implies(_sqrt_minus_one("j"), _cos_eq("x", "y", "j"))),
    probe_hints=_J_PROBES))
SIN = register(DefinedPredicate(
    "Sin", ("x", "y"), Exists("j", conj(_sqrt_minus_one("j"), _sin_eq("x", "y", "j"))), hints={"j": "z(4)"}))
SIN_ALL = register(DefinedPredicate(
    "SinAll", ("x", "y"), Forall("j", Implies(_sqrt_minus_one("j"), _sin_eq("x", "y", "j"))),
    probe_hints=_J_PROBES))

PI = register(DefinedPredicate(
    "Pi", ("p",),
    Exists("j", Exists("u", Exists("h", conj(
        _sqrt_minus_one("j"),
        Pred("KerGen", (_x("u"),)),
        Eq(_x("u"), Mul(integer_literal(2), Mul(_x("j"), _x("p")))),
        Eq(Mul(integer_literal(2), _x("h")), _x("p")),
        Pred("Sin", (_x("h"), One())),
    )))),
    hints={"j": "z(4)", "u": "2*j*p", "h": "p/2"},
))

PI_SK = "tau/(2*z(4))"
"""pi inside SK: tau/(2i), since tau stands for 2*pi*i."""


# -- builders ----------------------------------------------------------

def _finish(name: str, source: Formula, free: tuple[str, ...], top: dict[str, str] | None = None,
            subject: dict[str, str] | None = None, decomposition=None) -> Definition:
    supply = NameSupply(free)
    expansion = expand_with_hints(source, supply)
    formula = desugar(expansion.formula)
    if free_vars(formula) != set(free):
        raise AssertionError(f"{name}: free variables {sorted(free_vars(formula))} != {sorted(free)}")
    hints = dict(expansion.hints)
    hints.update(top or {})
    order = list(free) + bound_vars(formula)
    assignments = {}
    for var in order:
        if subject and var in subject:
            assignments[var] = subject[var]
        elif var in hints:
            assignments[var] = hints[var]
    plan = WitnessPlan(assignments, dict(expansion.probe_hints), set(expansion.numeric_only))
    return Definition(name, source, formula, free, plan, decomposition)


def def_int_forall() -> Definition:
    """{y : for all x, E(x) = 1 implies E(yx) = 1}: the integers, as a universal definition."""
    return _finish("int_forall", Pred("Int", (_x("y"),)), ("y",), subject={"y": "3"})


def def_rat_exists() -> Definition:
    """{y : exists kernel elements z, w with w nonzero and z = wy}: the rationals."""
    return _finish("rat_exists", Pred("Rat", (_x("y"),)), ("y",), subject={"y": "2/3"})


def def_int_laczkovich() -> Definition:
    """Integers via a logarithm t of 2: E(xt) and x both rational."""
    return _finish("int_laczkovich", Pred("IntTheta", (_x("x"),)), ("x",), subject={"x": "2"})


def def_kernel_generators(variant: str = "general") -> Definition:
    """{tau, -tau}: kernel elements dividing every kernel element by an integer."""
    if variant not in ("general", "prime-log"):
        raise ValueError("variant must be 'general' or 'prime-log'")
    macro = "KerGen" if variant == "general" else "KerGenLog"
    return _finish(f"kernel_generators_{variant}", Pred(macro, (_x("x"),)), ("x",), subject={"x": "tau"})


def def_cos(variant: str = "exists") -> Definition:
    return _trig("Cos", variant, "(z(8) + z(8)^-1)/2")


def def_sin(variant: str = "exists") -> Definition:
    return _trig("Sin", variant, "(z(8) - z(8)^-1)/(2*z(4))")


def _trig(kind: str, variant: str, value: str) -> Definition:
    if variant not in ("exists", "forall"):
        raise ValueError("variant must be 'exists' or 'forall'")
    macro = kind if variant == "exists" else kind + "All"
    # x = 2*pi/8, i.e. tau/(8i)
    return _finish(f"{kind.lower()}_{variant}", Pred(macro, (_x("x"), _x("y"))), ("x", "y"),
                   subject={"x": "tau/(8*z(4))", "y": value})


def def_pi() -> Definition:
    return _finish("pi", Pred("Pi", (_x("x"),)), ("x",), subject={"x": PI_SK})


def _rat_term(q: Fraction):
    return RatConst(q) if q.denominator != 1 else integer_literal(q.numerator)


def def_real_abelian(d: CosDecomposition, name: str = "real_abelian") -> Definition:
    """x = constant + sum r_n cos(2 pi s_n), each cosine pinned down through pi."""
    if not isinstance(d, CosDecomposition):
        raise TypeError("expected a CosDecomposition")
    d.validate()
    k = len(d.terms)
    a_names = [f"a_{i + 1}" for i in range(k)] if k > 1 else ["a"] * k
    c_names = [f"c_{i + 1}" for i in range(k)] if k > 1 else ["c"] * k
    x = _x("x")
    summands = []
    if d.constant != 0 or not d.terms:
        summands.append(_rat_term(d.constant))
    for (r, _), c in zip(d.terms, c_names):
        summands.append(_x(c) if r == 1 else Mul(_rat_term(r), _x(c)))
    rhs = summands[0]
    for s in summands[1:]:
        rhs = Add(rhs, s)
    linear = Eq(x, rhs)
    top: dict[str, str] = {}
    if not d.terms:
        return _finish(name, linear, ("x",), subject={"x": _value_expr(d.reconstruct())}, decomposition=d)
    parts: list[Formula] = [Pred("Pi", (_x("p"),))]
    top["p"] = PI_SK
    for (r, s), a, c in zip(d.terms, a_names, c_names):
        # a = 2*pi*s, written with the denominators of 2s cleared
        parts.append(Eq(_x(a), Mul(_rat_term(2 * s), _x("p"))))
        top[a] = f"{_recipe_rat(2 * s)}*p"
    for (r, s), a, c in zip(d.terms, a_names, c_names):
        parts.append(Pred("Cos", (_x(a), _x(c))))
        top[c] = _value_expr((root_of_unity(s) + root_of_unity(-s)) / 2)
    parts.append(linear)
    body: Formula = conj(*parts)
    for var in reversed(["p"] + a_names + c_names):
        body = Exists(var, body)
    return _finish(name, body, ("x",), top=top, subject={"x": _value_expr(d.reconstruct())}, decomposition=d)


def _recipe_rat(q: Fraction) -> str:
    return f"({q})" if q.denominator != 1 or q < 0 else str(q)


def _value_expr(a: CycNum) -> str:
    s = a.to_expr()
    return f"({s})" if any(ch in s for ch in "+- ") else s


def def_sqrt2() -> Definition:
    """+sqrt(2) = 2 cos(pi/4)."""
    sqrt2 = root_of_unity(Fraction(1, 8)) + root_of_unity(Fraction(-1, 8))
    return def_real_abelian(cos_decomposition(sqrt2), name="sqrt2")


BUILDERS = {
    "int_forall": def_int_forall,
    "rat_exists": def_rat_exists,
    "int_laczkovich": def_int_laczkovich,
    "kernel_generators": lambda: def_kernel_generators("general"),
    "kernel_generators_prime_log": lambda: def_kernel_generators("prime-log"),
    "cos": lambda: def_cos("exists"),
    "cos_forall": lambda: def_cos("forall"),
    "sin": lambda: def_sin("exists"),
    "sin_forall": lambda: def_sin("forall"),
    "pi": def_pi,
    "sqrt2": def_sqrt2,
}
