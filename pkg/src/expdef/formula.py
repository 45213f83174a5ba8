"""First-order formulas over the signature {0, 1, +, -, *, E, =}.

Terms and formulas are frozen dataclasses. Macro predicates (``Pred``)
and rational literals (``RatConst``) are conveniences that
:func:`expand_macros` and :func:`desugar` remove, leaving the official
language only.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Iterator

from . import expr as ex
from .poly import as_rat


# -- terms -------------------------------------------------------------

@dataclass(frozen=True)
class Term:
    pass


@dataclass(frozen=True)
class Zero(Term):
    pass


@dataclass(frozen=True)
class One(Term):
    pass


@dataclass(frozen=True)
class Var(Term):
    name: str


@dataclass(frozen=True)
class Neg(Term):
    arg: Term


@dataclass(frozen=True)
class Add(Term):
    left: Term
    right: Term


@dataclass(frozen=True)
class Mul(Term):
    left: Term
    right: Term


@dataclass(frozen=True)
class Exp(Term):
    arg: Term


@dataclass(frozen=True)
class RatConst(Term):
    value: Fraction

    def __post_init__(self):
        object.__setattr__(self, "value", as_rat(self.value))


# -- formulas ----------------------------------------------------------

@dataclass(frozen=True)
class Formula:
    pass


@dataclass(frozen=True)
class Eq(Formula):
    left: Term
    right: Term


@dataclass(frozen=True)
class And(Formula):
    args: tuple[Formula, ...]


@dataclass(frozen=True)
class Or(Formula):
    args: tuple[Formula, ...]


@dataclass(frozen=True)
class Not(Formula):
    arg: Formula


@dataclass(frozen=True)
class Implies(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Exists(Formula):
    var: str
    body: Formula


@dataclass(frozen=True)
class Forall(Formula):
    var: str
    body: Formula


@dataclass(frozen=True)
class Pred(Formula):
    name: str
    args: tuple[Term, ...]


Quantifier = (Exists, Forall)


def conj(*fs: Formula) -> Formula:
    return fs[0] if len(fs) == 1 else And(tuple(fs))


def disj(*fs: Formula) -> Formula:
    return fs[0] if len(fs) == 1 else Or(tuple(fs))


def v(name: str) -> Var:
    return Var(name)


def integer_literal(n: int) -> Term:
    """n as a balanced tree of additions of 1 (depth about log2 n)."""
    if n < 0:
        return Neg(integer_literal(-n))
    if n == 0:
        return Zero()
    if n == 1:
        return One()
    return Add(integer_literal(n - n // 2), integer_literal(n // 2))


# -- traversal ---------------------------------------------------------

def term_vars(t: Term) -> set[str]:
    if isinstance(t, Var):
        return {t.name}
    if isinstance(t, (Add, Mul)):
        return term_vars(t.left) | term_vars(t.right)
    if isinstance(t, (Neg, Exp)):
        return term_vars(t.arg)
    return set()


def free_vars(f: Formula) -> set[str]:
    if isinstance(f, Eq):
        return term_vars(f.left) | term_vars(f.right)
    if isinstance(f, (And, Or)):
        return set().union(*(free_vars(a) for a in f.args))
    if isinstance(f, Not):
        return free_vars(f.arg)
    if isinstance(f, Implies):
        return free_vars(f.left) | free_vars(f.right)
    if isinstance(f, Quantifier):
        return free_vars(f.body) - {f.var}
    if isinstance(f, Pred):
        return set().union(set(), *(term_vars(a) for a in f.args))
    raise TypeError(f)


def all_vars(f: Formula) -> set[str]:
    """Every variable name occurring free or bound."""
    if isinstance(f, Quantifier):
        return all_vars(f.body) | {f.var}
    if isinstance(f, (And, Or)):
        return set().union(*(all_vars(a) for a in f.args))
    if isinstance(f, Not):
        return all_vars(f.arg)
    if isinstance(f, Implies):
        return all_vars(f.left) | all_vars(f.right)
    return free_vars(f)


def bound_vars(f: Formula) -> list[str]:
    if isinstance(f, Quantifier):
        return [f.var] + bound_vars(f.body)
    if isinstance(f, (And, Or)):
        return [x for a in f.args for x in bound_vars(a)]
    if isinstance(f, Not):
        return bound_vars(f.arg)
    if isinstance(f, Implies):
        return bound_vars(f.left) + bound_vars(f.right)
    return []


def atoms(f: Formula) -> Iterator[Formula]:
    if isinstance(f, (Eq, Pred)):
        yield f
    elif isinstance(f, (And, Or)):
        for a in f.args:
            yield from atoms(a)
    elif isinstance(f, Not):
        yield from atoms(f.arg)
    elif isinstance(f, Implies):
        yield from atoms(f.left)
        yield from atoms(f.right)
    elif isinstance(f, Quantifier):
        yield from atoms(f.body)


def subst_term(t: Term, mapping: dict[str, Term]) -> Term:
    if isinstance(t, Var):
        return mapping.get(t.name, t)
    if isinstance(t, Add):
        return Add(subst_term(t.left, mapping), subst_term(t.right, mapping))
    if isinstance(t, Mul):
        return Mul(subst_term(t.left, mapping), subst_term(t.right, mapping))
    if isinstance(t, Neg):
        return Neg(subst_term(t.arg, mapping))
    if isinstance(t, Exp):
        return Exp(subst_term(t.arg, mapping))
    return t


def map_terms(f: Formula, fn) -> Formula:
    """Apply ``fn`` to every top-level term; quantifier binders are untouched."""
    if isinstance(f, Eq):
        return Eq(fn(f.left), fn(f.right))
    if isinstance(f, Pred):
        return Pred(f.name, tuple(fn(a) for a in f.args))
    if isinstance(f, And):
        return And(tuple(map_terms(a, fn) for a in f.args))
    if isinstance(f, Or):
        return Or(tuple(map_terms(a, fn) for a in f.args))
    if isinstance(f, Not):
        return Not(map_terms(f.arg, fn))
    if isinstance(f, Implies):
        return Implies(map_terms(f.left, fn), map_terms(f.right, fn))
    if isinstance(f, Quantifier):
        return type(f)(f.var, map_terms(f.body, fn))
    raise TypeError(f)


def substitute(f: Formula, mapping: dict[str, Term], supply: NameSupply | None = None) -> Formula:
    """Capture-avoiding substitution of terms for free variables."""
    if isinstance(f, Quantifier):
        inner = {k: t for k, t in mapping.items() if k != f.var}
        if not inner:
            return f
        incoming = set().union(*(term_vars(t) for t in inner.values()))
        var, body = f.var, f.body
        if var in incoming:
            supply = supply or NameSupply(all_vars(f) | incoming)
            new = supply.fresh(var)
            body = substitute(body, {var: Var(new)}, supply)
            var = new
        return type(f)(var, substitute(body, inner, supply))
    if isinstance(f, (Eq, Pred)):
        return map_terms(f, lambda t: subst_term(t, mapping))
    if isinstance(f, And):
        return And(tuple(substitute(a, mapping, supply) for a in f.args))
    if isinstance(f, Or):
        return Or(tuple(substitute(a, mapping, supply) for a in f.args))
    if isinstance(f, Not):
        return Not(substitute(f.arg, mapping, supply))
    if isinstance(f, Implies):
        return Implies(substitute(f.left, mapping, supply), substitute(f.right, mapping, supply))
    raise TypeError(f)


# -- fresh names -------------------------------------------------------

class NameSupply:
    """Deterministic fresh-name source; a base name is reused as is while unused."""

    def __init__(self, taken=()):
        self.taken = set(taken)
        self.counters: dict[str, int] = {}

    def reserve(self, names) -> None:
        self.taken |= set(names)

    def fresh(self, base: str) -> str:
        base = re.sub(r"_\d+$", "", base) or "v"
        if base not in self.taken:
            self.taken.add(base)
            return base
        k = self.counters.get(base, 0)
        while True:
            k += 1
            name = f"{base}_{k}"
            if name not in self.taken:
                self.counters[base] = k
                self.taken.add(name)
                return name


# -- macros ------------------------------------------------------------

@dataclass(frozen=True)
class DefinedPredicate:
    """A named abbreviation with parameters, a body and witness hints.

    ``hints`` maps bound variables of the body to recipe expressions over
    the parameters and earlier bound variables; ``probe_hints`` adds probe
    values for universally acting variables.
    """

    name: str
    params: tuple[str, ...]
    body: Formula
    hints: dict[str, str] = field(default_factory=dict)
    probe_hints: dict[str, tuple[str, ...]] = field(default_factory=dict)
    numeric_only: frozenset[str] = frozenset()

    @property
    def arity(self) -> int:
        return len(self.params)

    def __post_init__(self):
        extra = free_vars(self.body) - set(self.params)
        if extra:
            raise ValueError(f"macro {self.name} has stray free variables {sorted(extra)}")


_REGISTRY: dict[str, DefinedPredicate] = {}


def register(pred: DefinedPredicate) -> DefinedPredicate:
    for other in _mentions(pred.body):
        if other not in _REGISTRY and other != pred.name:
            raise ValueError(f"macro {pred.name} uses unknown macro {other}")
        if other == pred.name:
            raise ValueError(f"macro {pred.name} is recursive")
    _REGISTRY[pred.name] = pred
    return pred


def lookup(name: str) -> DefinedPredicate:
    try:
        return _REGISTRY[name]
    except KeyError:
        raise KeyError(f"unknown macro predicate {name!r}") from None


def _mentions(f: Formula) -> set[str]:
    return {a.name for a in atoms(f) if isinstance(a, Pred)}


@dataclass
class Expansion:
    """Result of :func:`expand_macros` with collected witness hints."""

    formula: Formula
    hints: dict[str, str]
    probe_hints: dict[str, tuple[str, ...]]
    numeric_only: set[str]


def term_to_node(t: Term) -> ex.Node:
    if isinstance(t, Var):
        return ex.Name(t.name)
    if isinstance(t, Zero):
        return ex.Num(Fraction(0))
    if isinstance(t, One):
        return ex.Num(Fraction(1))
    if isinstance(t, RatConst):
        return ex.Num(t.value)
    if isinstance(t, Neg):
        return ex.Negate(term_to_node(t.arg))
    if isinstance(t, Add):
        return ex.BinOp("+", term_to_node(t.left), term_to_node(t.right))
    if isinstance(t, Mul):
        return ex.BinOp("*", term_to_node(t.left), term_to_node(t.right))
    if isinstance(t, Exp):
        return ex.Call("E", term_to_node(t.arg))
    raise TypeError(t)


def expand_macros(f: Formula, supply: NameSupply | None = None) -> Formula:
    return expand_with_hints(f, supply).formula


def expand_with_hints(f: Formula, supply: NameSupply | None = None) -> Expansion:
    """Inline every macro with freshly named bound variables.

    Recipes attached to a macro's bound variables are rewritten through the
    same renaming and parameter substitution, so they stay valid for the
    expanded formula.
    """
    supply = supply or NameSupply()
    supply.reserve(all_vars(f))
    out = Expansion(f, {}, {}, set())
    out.formula = _expand(f, supply, out)
    return out


def _expand(f: Formula, supply: NameSupply, out: Expansion) -> Formula:
    if isinstance(f, Eq):
        return f
    if isinstance(f, Pred):
        pred = lookup(f.name)
        if len(f.args) != pred.arity:
            raise ValueError(f"{f.name} expects {pred.arity} arguments, got {len(f.args)}")
        renaming = {b: supply.fresh(b) for b in dict.fromkeys(bound_vars(pred.body))}
        body = _rename_bound(pred.body, renaming)
        mapping = dict(zip(pred.params, f.args))
        body = substitute(body, mapping, supply)
        node_map = {p: term_to_node(t) for p, t in mapping.items()}
        node_map.update({old: ex.Name(new) for old, new in renaming.items()})
        for var, recipe in pred.hints.items():
            out.hints[renaming[var]] = ex.render(ex.substitute(ex.parse_expr(recipe), node_map))
        for var, recipes in pred.probe_hints.items():
            out.probe_hints[renaming[var]] = tuple(
                ex.render(ex.substitute(ex.parse_expr(r), node_map)) for r in recipes)
        out.numeric_only |= {renaming[var] for var in pred.numeric_only}
        return _expand(body, supply, out)
    if isinstance(f, And):
        return And(tuple(_expand(a, supply, out) for a in f.args))
    if isinstance(f, Or):
        return Or(tuple(_expand(a, supply, out) for a in f.args))
    if isinstance(f, Not):
        return Not(_expand(f.arg, supply, out))
    if isinstance(f, Implies):
        return Implies(_expand(f.left, supply, out), _expand(f.right, supply, out))
    if isinstance(f, Quantifier):
        return type(f)(f.var, _expand(f.body, supply, out))
    raise TypeError(f)


def _rename_bound(f: Formula, renaming: dict[str, str]) -> Formula:
    if isinstance(f, Quantifier):
        new = renaming.get(f.var, f.var)
        body = substitute(f.body, {f.var: Var(new)}) if new != f.var else f.body
        return type(f)(new, _rename_bound(body, renaming))
    if isinstance(f, And):
        return And(tuple(_rename_bound(a, renaming) for a in f.args))
    if isinstance(f, Or):
        return Or(tuple(_rename_bound(a, renaming) for a in f.args))
    if isinstance(f, Not):
        return Not(_rename_bound(f.arg, renaming))
    if isinstance(f, Implies):
        return Implies(_rename_bound(f.left, renaming), _rename_bound(f.right, renaming))
    return f


# -- desugaring --------------------------------------------------------

def _has_rat(t: Term) -> bool:
    if isinstance(t, RatConst):
        return True
    if isinstance(t, (Add, Mul)):
        return _has_rat(t.left) or _has_rat(t.right)
    if isinstance(t, (Neg, Exp)):
        return _has_rat(t.arg)
    return False


def _literal_value(t: Term) -> int | None:
    if isinstance(t, Zero):
        return 0
    if isinstance(t, One):
        return 1
    if isinstance(t, Neg):
        a = _literal_value(t.arg)
        return None if a is None else -a
    if isinstance(t, Add):
        a, b = _literal_value(t.left), _literal_value(t.right)
        return None if a is None or b is None else a + b
    return None


def _times(k: int, t: Term) -> Term:
    if k == 1:
        return t
    n = _literal_value(t)
    if n is not None:
        return integer_literal(k * n)
    return Mul(integer_literal(k), t)


def _clear(t: Term) -> tuple[int, Term]:
    """Return (L, t') with t' = L*t free of rational literals."""
    if isinstance(t, RatConst):
        q = t.value
        return q.denominator, integer_literal(q.numerator)
    if isinstance(t, Exp):
        if _has_rat(t.arg):
            raise ValueError("rational literal inside E(...) cannot be cleared")
        return 1, t
    if isinstance(t, Neg):
        k, a = _clear(t.arg)
        return k, Neg(a)
    if isinstance(t, Add):
        ka, a = _clear(t.left)
        kb, b = _clear(t.right)
        k = lcm(ka, kb)
        return k, Add(_times(k // ka, a), _times(k // kb, b))
    if isinstance(t, Mul):
        ka, a = _clear(t.left)
        kb, b = _clear(t.right)
        if isinstance(a, One):
            return ka * kb, b
        if isinstance(b, One):
            return ka * kb, a
        return ka * kb, Mul(a, b)
    return 1, t


def desugar(f: Formula) -> Formula:
    """Remove rational literals by clearing denominators in each equation."""
    if isinstance(f, Eq):
        if not (_has_rat(f.left) or _has_rat(f.right)):
            return f
        kl, left = _clear(f.left)
        kr, right = _clear(f.right)
        k = lcm(kl, kr)
        return Eq(_times(k // kl, left), _times(k // kr, right))
    if isinstance(f, Pred):
        return f
    if isinstance(f, And):
        return And(tuple(desugar(a) for a in f.args))
    if isinstance(f, Or):
        return Or(tuple(desugar(a) for a in f.args))
    if isinstance(f, Not):
        return Not(desugar(f.arg))
    if isinstance(f, Implies):
        return Implies(desugar(f.left), desugar(f.right))
    if isinstance(f, Quantifier):
        return type(f)(f.var, desugar(f.body))
    raise TypeError(f)


def is_official(f: Formula) -> bool:
    """Only {0, 1, +, -, *, E, =} and the logical connectives occur."""
    return all(isinstance(a, Eq) and not _has_rat(a.left) and not _has_rat(a.right) for a in atoms(f))


# -- prenex form -------------------------------------------------------

Prefix = list[tuple[str, str]]  # ("A" | "E", variable)


def _flip(prefix: Prefix) -> Prefix:
    return [("E" if q == "A" else "A", x) for q, x in prefix]


def _blocks(prefix: Prefix) -> list[Prefix]:
    out: list[Prefix] = []
    for q, x in prefix:
        if out and out[-1][0][0] == q:
            out[-1].append((q, x))
        else:
            out.append([(q, x)])
    return out


def _merge(a: Prefix, b: Prefix) -> Prefix:
    """Interleave two independent prefixes with as few alternations as possible."""
    ba, bb = _blocks(a), _blocks(b)
    out: Prefix = []
    while ba and bb:
        if ba[0][0][0] == bb[0][0][0]:
            out += ba.pop(0) + bb.pop(0)
        elif len(ba) >= len(bb):
            out += ba.pop(0)
        else:
            out += bb.pop(0)
    for rest in ba + bb:
        out += rest
    return out


def _prenex(f: Formula) -> tuple[Prefix, Formula]:
    if isinstance(f, Eq):
        return [], f
    if isinstance(f, Pred):
        raise ValueError("expand macros before prenexing")
    if isinstance(f, Exists):
        p, m = _prenex(f.body)
        return [("E", f.var)] + p, m
    if isinstance(f, Forall):
        p, m = _prenex(f.body)
        return [("A", f.var)] + p, m
    if isinstance(f, Not):
        p, m = _prenex(f.arg)
        return _flip(p), Not(m)
    if isinstance(f, Implies):
        pl, ml = _prenex(f.left)
        pr, mr = _prenex(f.right)
        return _merge(_flip(pl), pr), Implies(ml, mr)
    if isinstance(f, (And, Or)):
        prefix: Prefix = []
        mats = []
        for a in f.args:
            p, m = _prenex(a)
            prefix = _merge(prefix, p)
            mats.append(m)
        return prefix, type(f)(tuple(mats))
    raise TypeError(f)


def _distinct_binders(f: Formula) -> Formula:
    """Rename bound variables so that all binders are distinct and differ from free names."""
    names = bound_vars(f)
    free = free_vars(f)
    if len(names) == len(set(names)) and not (set(names) & free):
        return f
    supply = NameSupply(all_vars(f))
    seen = set(free)

    def walk(g: Formula) -> Formula:
        if isinstance(g, Quantifier):
            var, body = g.var, g.body
            if var in seen:
                new = supply.fresh(var)
                body = substitute(body, {var: Var(new)})
                var = new
            seen.add(var)
            return type(g)(var, walk(body))
        if isinstance(g, And):
            return And(tuple(walk(a) for a in g.args))
        if isinstance(g, Or):
            return Or(tuple(walk(a) for a in g.args))
        if isinstance(g, Not):
            return Not(walk(g.arg))
        if isinstance(g, Implies):
            return Implies(walk(g.left), walk(g.right))
        return g

    return walk(f)


def prenex_prefix(f: Formula) -> tuple[Prefix, Formula]:
    return _prenex(_distinct_binders(f))


def prenex(f: Formula) -> Formula:
    prefix, matrix = prenex_prefix(f)
    out = matrix
    for q, x in reversed(prefix):
        out = Forall(x, out) if q == "A" else Exists(x, out)
    return out


def quantifier_complexity(f: Formula) -> str:
    """Collapsed quantifier word of the prenex form, e.g. "∀∃∀"."""
    if any(isinstance(a, Pred) for a in atoms(f)):
        f = expand_macros(f)
    prefix, _ = prenex_prefix(f)
    word = ""
    for q, _ in prefix:
        sym = "∀" if q == "A" else "∃"
        if not word.endswith(sym):
            word += sym
    return word


def quantifier_blocks(f: Formula) -> list[tuple[str, list[str]]]:
    prefix, _ = prenex_prefix(f)
    return [("∀" if blk[0][0] == "A" else "∃", [x for _, x in blk]) for blk in _blocks(prefix)]


# -- rendering ---------------------------------------------------------

_TEXT = {"forall": "∀", "exists": "∃", "and": " ∧ ", "or": " ∨ ", "not": "¬", "implies": " → ",
         "mul": "·", "neg": "-"}
_LATEX = {"forall": r"\forall ", "exists": r"\exists ", "and": r" \wedge ", "or": r" \vee ",
          "not": r"\neg ", "implies": r" \rightarrow ", "mul": r" \cdot ", "neg": "-"}


def _name(name: str, style: dict) -> str:
    if style is _LATEX:
        m = re.fullmatch(r"([A-Za-z]+)_?(\d+)?(?:_(\d+))?", name)
        if m and m.group(2):
            sub = m.group(2) + (f",{m.group(3)}" if m.group(3) else "")
            return f"{m.group(1)}_{{{sub}}}"
        return name.replace("_", r"\_")
    return name


def _render_term(t: Term, style: dict, prec: int = 0) -> str:
    if isinstance(t, Zero):
        return "0"
    if isinstance(t, One):
        return "1"
    if isinstance(t, Var):
        return _name(t.name, style)
    if isinstance(t, RatConst):
        s = str(t.value)
        if style is _LATEX and t.value.denominator != 1:
            s = rf"\frac{{{t.value.numerator}}}{{{t.value.denominator}}}"
        return f"({s})" if prec > 0 and (t.value < 0 or t.value.denominator != 1) else s
    if isinstance(t, Exp):
        return f"E({_render_term(t.arg, style)})"
    if isinstance(t, Neg):
        s = style["neg"] + _render_term(t.arg, style, 3)
        return f"({s})" if prec > 1 else s
    if isinstance(t, Add):
        s = f"{_render_term(t.left, style, 1)} + {_render_term(t.right, style, 2)}"
        return f"({s})" if prec > 1 else s
    if isinstance(t, Mul):
        s = f"{_render_term(t.left, style, 2)}{style['mul']}{_render_term(t.right, style, 3)}"
        return f"({s})" if prec > 2 else s
    raise TypeError(t)


def _render(f: Formula, style: dict) -> str:
    if isinstance(f, Eq):
        return f"{_render_term(f.left, style)} = {_render_term(f.right, style)}"
    if isinstance(f, Pred):
        name = rf"\mathrm{{{f.name}}}" if style is _LATEX else f.name
        return f"{name}({', '.join(_render_term(a, style) for a in f.args)})"
    if isinstance(f, Not):
        return f"{style['not']}({_render(f.arg, style)})"
    if isinstance(f, Quantifier):
        q = style["forall"] if isinstance(f, Forall) else style["exists"]
        gap = r"\," if style is _LATEX else " "
        return f"{q}{_name(f.var, style)}{gap}({_render(f.body, style)})"
    if isinstance(f, (And, Or)):
        sep = style["and"] if isinstance(f, And) else style["or"]
        return sep.join(_wrap(a, style, (Or, Implies, And) if isinstance(f, And) else (And, Implies, Or))
                        for a in f.args)
    if isinstance(f, Implies):
        return f"{_wrap(f.left, style, (And, Or, Implies))}{style['implies']}{_wrap(f.right, style, (And, Or, Implies))}"
    raise TypeError(f)


def _wrap(f: Formula, style: dict, kinds) -> str:
    s = _render(f, style)
    return f"({s})" if isinstance(f, kinds) else s


def render(f: Formula, fmt: str = "text") -> str:
    if fmt == "text":
        return _render(f, _TEXT)
    if fmt == "latex":
        return _render(f, _LATEX)
    if fmt == "sexpr":
        return to_sexpr(f)
    raise ValueError(f"unknown format {fmt!r}")


# -- s-expressions -----------------------------------------------------
#
#   formula := (= term term) | (and formula*) | (or formula*) | (not formula)
#            | (implies formula formula) | (exists NAME formula)
#            | (forall NAME formula) | (pred NAME term*)
#   term    := 0 | 1 | NAME | RATIONAL | (- term) | (+ term term)
#            | (* term term) | (E term)
#
# A RATIONAL such as 3/4 or -2 is a rational literal; 0 and 1 are the
# constants of the language.

KEYWORDS = {"and", "or", "not", "implies", "exists", "forall", "pred", "E"}


def term_to_sexpr(t: Term) -> str:
    if isinstance(t, Zero):
        return "0"
    if isinstance(t, One):
        return "1"
    if isinstance(t, Var):
        return t.name
    if isinstance(t, RatConst):
        return str(t.value)
    if isinstance(t, Neg):
        return f"(- {term_to_sexpr(t.arg)})"
    if isinstance(t, Add):
        return f"(+ {term_to_sexpr(t.left)} {term_to_sexpr(t.right)})"
    if isinstance(t, Mul):
        return f"(* {term_to_sexpr(t.left)} {term_to_sexpr(t.right)})"
    if isinstance(t, Exp):
        return f"(E {term_to_sexpr(t.arg)})"
    raise TypeError(t)


def to_sexpr(f: Formula) -> str:
    if isinstance(f, Eq):
        return f"(= {term_to_sexpr(f.left)} {term_to_sexpr(f.right)})"
    if isinstance(f, (And, Or)):
        head = "and" if isinstance(f, And) else "or"
        return f"({head} {' '.join(to_sexpr(a) for a in f.args)})"
    if isinstance(f, Not):
        return f"(not {to_sexpr(f.arg)})"
    if isinstance(f, Implies):
        return f"(implies {to_sexpr(f.left)} {to_sexpr(f.right)})"
    if isinstance(f, Quantifier):
        head = "forall" if isinstance(f, Forall) else "exists"
        return f"({head} {f.var} {to_sexpr(f.body)})"
    if isinstance(f, Pred):
        return f"(pred {f.name}{''.join(' ' + term_to_sexpr(a) for a in f.args)})"
    raise TypeError(f)


class SexprError(ValueError):
    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} at position {pos}")
        self.pos = pos


_SX_TOKEN = re.compile(r"\s*(\(|\)|[^\s()]+)")
_NAME = re.compile(r"[A-Za-z_][A-Za-z_0-9]*")
_RATIONAL = re.compile(r"-?\d+(/\d+)?")


def _sx_read(src: str):
    tokens = []
    pos = 0
    while True:
        m = _SX_TOKEN.match(src, pos)
        if not m:
            if src[pos:].strip():
                raise SexprError("unreadable input", pos)
            break
        tokens.append((m.group(1), m.start(1)))
        pos = m.end()
    stack: list[list] = [[]]
    for tok, p in tokens:
        if tok == "(":
            stack.append([p])
        elif tok == ")":
            if len(stack) == 1:
                raise SexprError("unbalanced ')'", p)
            done = stack.pop()
            stack[-1].append(("list", done[0], done[1:]))
        else:
            stack[-1].append(("atom", p, tok))
    if len(stack) != 1:
        raise SexprError("missing ')'", len(src))
    if len(stack[0]) != 1:
        raise SexprError("expected exactly one expression", 0)
    return stack[0][0]


def _sx_term(node) -> Term:
    kind, pos, body = node
    if kind == "atom":
        if body == "0":
            return Zero()
        if body == "1":
            return One()
        if _RATIONAL.fullmatch(body):
            return RatConst(Fraction(body))
        if _NAME.fullmatch(body) and body not in KEYWORDS:
            return Var(body)
        raise SexprError(f"bad term {body!r}", pos)
    if not body or body[0][0] != "atom":
        raise SexprError("term list must start with an operator", pos)
    head, args = body[0][2], body[1:]
    arity = {"-": 1, "+": 2, "*": 2, "E": 1}
    if head not in arity or len(args) != arity[head]:
        raise SexprError(f"bad term operator {head!r} with {len(args)} arguments", pos)
    ts = [_sx_term(a) for a in args]
    return {"-": lambda: Neg(ts[0]), "+": lambda: Add(*ts), "*": lambda: Mul(*ts), "E": lambda: Exp(ts[0])}[head]()


def _sx_formula(node) -> Formula:
    kind, pos, body = node
    if kind != "list" or not body or body[0][0] != "atom":
        raise SexprError("expected a formula list", pos)
    head, args = body[0][2], body[1:]
    if head == "=":
        if len(args) != 2:
            raise SexprError("= takes two terms", pos)
        return Eq(_sx_term(args[0]), _sx_term(args[1]))
    if head in ("and", "or"):
        parts = tuple(_sx_formula(a) for a in args)
        if len(parts) < 2:
            raise SexprError(f"{head} needs at least two arguments", pos)
        return And(parts) if head == "and" else Or(parts)
    if head == "not":
        if len(args) != 1:
            raise SexprError("not takes one formula", pos)
        return Not(_sx_formula(args[0]))
    if head == "implies":
        if len(args) != 2:
            raise SexprError("implies takes two formulas", pos)
        return Implies(_sx_formula(args[0]), _sx_formula(args[1]))
    if head in ("exists", "forall"):
        if len(args) != 2 or args[0][0] != "atom" or not _NAME.fullmatch(args[0][2]):
            raise SexprError(f"{head} takes a variable and a formula", pos)
        cls = Exists if head == "exists" else Forall
        return cls(args[0][2], _sx_formula(args[1]))
    if head == "pred":
        if not args or args[0][0] != "atom":
            raise SexprError("pred needs a name", pos)
        return Pred(args[0][2], tuple(_sx_term(a) for a in args[1:]))
    raise SexprError(f"unknown connective {head!r}", pos)


def parse_sexpr(src: str) -> Formula:
    return _sx_formula(_sx_read(src))


def parse_sexpr_term(src: str) -> Term:
    return _sx_term(_sx_read(src))
