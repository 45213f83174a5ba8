"""Evaluation of formulas in exact and numeric models.

Existentially acting quantifiers take their value from a witness plan;
universally acting ones are checked on a finite probe set, so a passing
universal block means "probe-verified", never "proved". In the exact SK
model every verdict comes from exact identities; the numeric model works
with rigorous intervals and may answer unknown.
"""

from __future__ import annotations

import enum
from contextlib import contextmanager, nullcontext
from dataclasses import dataclass, field
from fractions import Fraction

from mpmath import mp
from mpmath.libmp import to_rational

from . import expr as ex
from .cyclotomic import numeric_eval, zeta
from .definitions import WitnessPlan
from .formula import (
    Add, And, Eq, Exists, Exp, Forall, Formula, Implies, Mul, Neg, Not, One, Or, Pred, RatConst, Term,
    Var, Zero, atoms, desugar, expand_with_hints, free_vars, quantifier_blocks, render,
)
from .numeric import iv_precision, iv_rational, magnitude_lower, magnitude_upper
from .skmodel import TAU, EDomainError, SKElement, sk_E


class Truth(enum.Enum):
    TRUE = "true"
    FALSE = "false"
    UNKNOWN = "unknown"

    def __invert__(self) -> Truth:
        return {Truth.TRUE: Truth.FALSE, Truth.FALSE: Truth.TRUE}.get(self, Truth.UNKNOWN)

    def __and__(self, other: Truth) -> Truth:
        if Truth.FALSE in (self, other):
            return Truth.FALSE
        if Truth.UNKNOWN in (self, other):
            return Truth.UNKNOWN
        return Truth.TRUE

    def __or__(self, other: Truth) -> Truth:
        if Truth.TRUE in (self, other):
            return Truth.TRUE
        if Truth.UNKNOWN in (self, other):
            return Truth.UNKNOWN
        return Truth.FALSE


class NumericOnlyError(Exception):
    """A recipe needs an object the exact model does not contain."""


class WitnessError(Exception):
    """A recipe could not produce a value."""


class PlanGap(Exception):
    """The plan has no recipe for a variable that needs one."""


# -- models ------------------------------------------------------------

class Model:
    name = "abstract"
    exact = False

    def session(self):
        return nullcontext()

    def zero(self):
        return self.const(Fraction(0))

    def one(self):
        return self.const(Fraction(1))

    def const(self, q: Fraction):
        raise NotImplementedError

    def zeta(self, n: int):
        raise NotImplementedError

    def tau(self):
        raise NotImplementedError

    def E(self, x):
        raise NotImplementedError

    def eq(self, a, b) -> tuple[Truth, object]:
        """Truth value and residual of a = b."""
        raise NotImplementedError

    def call(self, fn: str, x):
        if fn == "E":
            return self.E(x)
        if fn == "log":
            return self.log(x)
        if fn in ("numer", "denom"):
            q = self.rational_value(x)
            return self.const(Fraction(q.numerator if fn == "numer" else q.denominator))
        raise WitnessError(f"unknown function {fn}")

    def log(self, x):
        raise NumericOnlyError("log() needs a numeric model")

    def rational_value(self, x) -> Fraction:
        raise NotImplementedError

    def describe(self, x) -> str:
        return str(x)

    def default_probes(self) -> list:
        values = []
        for q in _DEFAULT_PROBE_RATIONALS:
            values.append(self.const(q) * self.tau())
        return values

    def evaluate_recipe(self, recipe: str | ex.Node, env: dict):
        node = ex.parse_expr(recipe) if isinstance(recipe, str) else recipe
        ops = ex.Ops(const=self.const, zeta=self.zeta, tau=self.tau, call=self.call, env=env)
        return ex.evaluate(node, ops)


def _probe_rationals() -> list[Fraction]:
    out: list[Fraction] = []
    for k in range(-3, 4):
        out.append(Fraction(k))
    for m in (2, 3, 4):
        for k in range(-2, 3):
            out.append(Fraction(k, m))
    return list(dict.fromkeys(out))


_DEFAULT_PROBE_RATIONALS = _probe_rationals()


class SKModel(Model):
    """Exact model: SK elements, E defined on Q*tau only."""

    name = "sk"
    exact = True

    def const(self, q):
        return SKElement.const(q)

    def zeta(self, n: int):
        return SKElement.const(zeta(n))

    def tau(self):
        return TAU

    def E(self, x):
        return SKElement.const(sk_E(x))

    def eq(self, a, b):
        return (Truth.TRUE if a == b else Truth.FALSE), None

    def rational_value(self, x) -> Fraction:
        if isinstance(x, SKElement) and x.is_constant() and x.constant().is_rational():
            return x.constant().to_rational()
        raise WitnessError(f"{x} is not rational")


class NumericModel(Model):
    """Complex numbers as rigorous interval boxes; tau is 2*pi*i and E is exp."""

    name = "numeric"

    def __init__(self, precision_bits: int = 256):
        if precision_bits < 64:
            raise ValueError("precision_bits must be at least 64")
        self.precision_bits = precision_bits
        self.tolerance = mp.mpf(2) ** (-(precision_bits // 2))
        self._iv = None

    @contextmanager
    def session(self):
        with iv_precision(self.precision_bits) as iv:
            self._iv = iv
            try:
                yield self
            finally:
                self._iv = None

    @property
    def iv(self):
        if self._iv is None:
            raise RuntimeError("numeric model used outside a session")
        return self._iv

    def const(self, q):
        q = Fraction(q)
        return self.iv.mpc(iv_rational(q), 0)

    def zeta(self, n: int):
        z = numeric_eval(zeta(n), self.precision_bits)
        return self.iv.mpc(z.real, z.imag)

    def tau(self):
        return self.iv.mpc(0, 2 * self.iv.pi)

    def E(self, x):
        return self.iv.exp(x)

    def eq(self, a, b):
        d = a - b
        upper = magnitude_upper(d)
        if upper < self.tolerance:
            return Truth.TRUE, upper
        if magnitude_lower(d) > self.tolerance:
            return Truth.FALSE, upper
        return Truth.UNKNOWN, upper

    def _real(self, x):
        if magnitude_upper(self.iv.mpc(0, x.imag)) > self.tolerance:
            raise WitnessError(f"{self.describe(x)} is not real")
        return x.real

    def log(self, x):
        re = self._real(x)
        if not re.a > 0:
            raise WitnessError("log of a nonpositive number")
        return self.iv.mpc(self.iv.log(re), 0)

    def rational_value(self, x) -> Fraction:
        re = self._real(x)
        with mp.workprec(self.precision_bits):
            exact = Fraction(*to_rational(mp.mpf(re.mid)._mpf_))
        return exact.limit_denominator(2 ** (self.precision_bits // 4))

    def describe(self, x) -> str:
        with mp.workprec(self.precision_bits):
            z = mp.mpc(x.real.mid, x.imag.mid)
            if abs(z.imag) < self.tolerance:
                return mp.nstr(z.real, 30)
            return mp.nstr(z, 30)


# -- terms and matrices ------------------------------------------------

def eval_term(model: Model, t: Term, env: dict):
    """Value of ``t``; E outside the model's domain raises EDomainError."""
    if isinstance(t, Var):
        try:
            return env[t.name]
        except KeyError:
            raise ValueError(f"unbound variable {t.name}") from None
    if isinstance(t, Zero):
        return model.zero()
    if isinstance(t, One):
        return model.one()
    if isinstance(t, RatConst):
        return model.const(t.value)
    if isinstance(t, Neg):
        return -eval_term(model, t.arg, env)
    if isinstance(t, Add):
        return eval_term(model, t.left, env) + eval_term(model, t.right, env)
    if isinstance(t, Mul):
        return eval_term(model, t.left, env) * eval_term(model, t.right, env)
    if isinstance(t, Exp):
        return model.E(eval_term(model, t.arg, env))
    raise TypeError(t)


@dataclass
class _Trace:
    identities: list[str] = field(default_factory=list)
    seen: set[str] = field(default_factory=set)
    partiality: list[str] = field(default_factory=list)
    witness_failures: list[str] = field(default_factory=list)
    witnesses: dict[str, list[str]] = field(default_factory=dict)
    probe_counts: dict[str, int] = field(default_factory=dict)
    max_residual: object = None
    atoms_checked: int = 0


def _atom(model: Model, f: Eq, env: dict, trace: _Trace) -> tuple[Truth, str | None]:
    trace.atoms_checked += 1
    try:
        left = eval_term(model, f.left, env)
        right = eval_term(model, f.right, env)
    except EDomainError as exc:
        note = f"{render(f)}: {exc}"
        if note not in trace.partiality:
            trace.partiality.append(note)
        return Truth.FALSE, f"{render(f)} (partiality: {exc})"
    except ZeroDivisionError as exc:
        return Truth.FALSE, f"{render(f)} ({exc})"
    value, residual = model.eq(left, right)
    if value is Truth.TRUE:
        if residual is not None and (trace.max_residual is None or residual > trace.max_residual):
            trace.max_residual = residual
        if model.exact:
            line = f"{render(f)}: {model.describe(left)} = {model.describe(right)}"
            if line not in trace.seen:
                trace.seen.add(line)
                trace.identities.append(line)
        return value, None
    return value, f"{render(f)}: {model.describe(left)} vs {model.describe(right)}"


def check_matrix(model: Model, f: Formula, env: dict) -> Truth:
    """Three-valued truth of a quantifier-free formula."""
    with model.session():
        return _matrix(model, f, env, _Trace())[0]


def _matrix(model, f, env, trace):
    if isinstance(f, Eq):
        return _atom(model, f, env, trace)
    if isinstance(f, Not):
        value, _ = _matrix(model, f.arg, env, trace)
        return ~value, None if value is Truth.FALSE else f"not: {render(f.arg)}"
    if isinstance(f, (And, Or, Implies)):
        parts = (Not(f.left), f.right) if isinstance(f, Implies) else f.args
        return _junction(model, parts, isinstance(f, And), env, trace, _matrix)
    raise ValueError(f"not quantifier-free: {render(f)}")


def _junction(model, parts, is_and: bool, env, trace, walk):
    acc = Truth.TRUE if is_and else Truth.FALSE
    blame = None
    for part in parts:
        value, why = walk(model, part, env, trace)
        acc = (acc & value) if is_and else (acc | value)
        if value is not (Truth.TRUE if is_and else Truth.FALSE) and blame is None:
            blame = why
        if acc is (Truth.FALSE if is_and else Truth.TRUE):
            return acc, (why if is_and else None)
    return acc, (None if acc is Truth.TRUE else blame)


# -- witness checking --------------------------------------------------

@dataclass
class CheckReport:
    verdict: str
    model: str
    precision_bits: int | None = None
    reason: str | None = None
    witnesses: dict[str, list[str]] = field(default_factory=dict)
    blocks: list[dict] = field(default_factory=list)
    max_residual: str | None = None
    identities: list[str] = field(default_factory=list)
    first_failure: str | None = None
    partiality: list[str] = field(default_factory=list)
    witness_failures: list[str] = field(default_factory=list)
    probe_counts: dict[str, int] = field(default_factory=dict)
    atoms_checked: int = 0
    items: list[dict] = field(default_factory=list)
    residual_value: object = field(default=None, repr=False)

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict,
            "model": self.model,
            "precision_bits": self.precision_bits,
            "reason": self.reason,
            "witnesses": self.witnesses,
            "blocks": self.blocks,
            "max_residual": self.max_residual,
            "identities": self.identities,
            "first_failure": self.first_failure,
            "partiality": self.partiality,
            "witness_failures": self.witness_failures,
            "probe_counts": self.probe_counts,
            "atoms_checked": self.atoms_checked,
            "items": self.items,
        }


class _Checker:
    def __init__(self, model: Model, plan: WitnessPlan, extra_probes: dict[str, list]):
        self.model = model
        self.plan = plan
        self.recipes = {k: ex.parse_expr(r) for k, r in plan.assignments.items()}
        self.probe_recipes = {k: [ex.parse_expr(r) for r in rs] for k, rs in plan.probes.items()}
        self.extra_probes = extra_probes
        self.trace = _Trace()
        self.defaults = model.default_probes()

    def witness(self, var: str, env: dict):
        if var not in self.recipes:
            raise PlanGap(f"no witness recipe for {var}")
        if self.model.exact and var in self.plan.numeric_only:
            raise NumericOnlyError(f"witness for {var} exists only numerically ({self.plan.assignments[var]})")
        value = self.model.evaluate_recipe(self.recipes[var], env)
        seen = self.trace.witnesses.setdefault(var, [])
        desc = self.model.describe(value)
        if desc not in seen and len(seen) < 8:
            seen.append(desc)
        return value

    def probes(self, var: str, env: dict) -> list:
        values = []
        for node in self.probe_recipes.get(var, []):
            try:
                values.append(self.model.evaluate_recipe(node, env))
            except (EDomainError, WitnessError, ZeroDivisionError):
                continue
        values += self.extra_probes.get(var, [])
        values += self.defaults
        values += list(env.values())
        if self.model.exact:
            values = list(dict.fromkeys(values))
        self.trace.probe_counts[var] = max(self.trace.probe_counts.get(var, 0), len(values))
        return values

    def walk(self, model, f: Formula, env: dict, trace, positive: bool = True):
        if isinstance(f, Eq):
            return _atom(model, f, env, self.trace)
        if isinstance(f, Not):
            value, why = self.walk(model, f.arg, env, trace, not positive)
            return ~value, None if value is Truth.FALSE else (why or f"not: {render(f.arg)}")
        if isinstance(f, Implies):
            left, why_l = self.walk(model, f.left, env, trace, not positive)
            if left is Truth.FALSE:
                return Truth.TRUE, None
            right, why_r = self.walk(model, f.right, env, trace, positive)
            value = ~left | right
            return value, None if value is Truth.TRUE else why_r
        if isinstance(f, (And, Or)):
            return _junction(model, f.args, isinstance(f, And), env, trace,
                             lambda m, p, e, t: self.walk(m, p, e, t, positive))
        if isinstance(f, (Exists, Forall)):
            existential = isinstance(f, Exists) == positive
            if existential and f.var in self.recipes:
                try:
                    value = self.witness(f.var, env)
                except (EDomainError, WitnessError, ZeroDivisionError, ValueError) as exc:
                    msg = f"witness for {f.var} unavailable: {exc}"
                    if msg not in self.trace.witness_failures:
                        self.trace.witness_failures.append(msg)
                    return (Truth.FALSE if positive else Truth.TRUE), msg
                inner, why = self.walk(model, f.body, {**env, f.var: value}, trace, positive)
                if why is not None:
                    why = f"{f.var} := {model.describe(value)}; {why}"
                return inner, why
            if existential and isinstance(f, Exists):
                raise PlanGap(f"no witness recipe for {f.var}")
            # universal reading: conjunction over probes for Forall, disjunction for a negated Exists
            is_and = isinstance(f, Forall)
            acc = Truth.TRUE if is_and else Truth.FALSE
            blame = None
            for value in self.probes(f.var, env):
                inner, why = self.walk(model, f.body, {**env, f.var: value}, trace, positive)
                acc = (acc & inner) if is_and else (acc | inner)
                if inner is not (Truth.TRUE if is_and else Truth.FALSE) and blame is None:
                    blame = f"{f.var} := {model.describe(value)}; {why}"
                if acc is (Truth.FALSE if is_and else Truth.TRUE):
                    break
            return acc, (None if acc is Truth.TRUE else blame)
        if isinstance(f, Pred):
            raise ValueError("expand macros before checking")
        raise TypeError(f)


def check_with_witnesses(model: Model, f: Formula, plan: WitnessPlan, bindings: dict | None = None,
                         probes: dict[str, list] | None = None) -> CheckReport:
    """Check ``f`` with existential witnesses from ``plan`` and probe-checked universals.

    Free variables take their values from ``bindings`` (model elements) or,
    failing that, from the plan's recipes.
    """
    if any(isinstance(a, Pred) for a in atoms(f)):
        expansion = expand_with_hints(f)
        merged = dict(expansion.hints)
        merged.update(plan.assignments)
        probes_hint = dict(expansion.probe_hints)
        probes_hint.update(plan.probes)
        plan = WitnessPlan(merged, probes_hint, plan.numeric_only | expansion.numeric_only)
        f = expansion.formula
    f = desugar(f)
    precision = getattr(model, "precision_bits", None)
    report = CheckReport("unknown", model.name, precision)
    blocks = quantifier_blocks(f)
    with model.session():
        checker = _Checker(model, plan, probes or {})
        env = {}
        try:
            for var in sorted(free_vars(f)):
                if bindings and var in bindings:
                    env[var] = bindings[var]
                else:
                    env[var] = checker.witness(var, env)
            value, why = checker.walk(model, f, env, checker.trace)
        except NumericOnlyError as exc:
            report.verdict = "inapplicable"
            report.reason = f"inapplicable plan: {exc}"
            value, why = None, None
        except PlanGap as exc:
            report.verdict = "inapplicable"
            report.reason = f"plan gap: {exc}"
            value, why = None, None
        except (EDomainError, WitnessError, ZeroDivisionError) as exc:
            value, why = Truth.FALSE, f"free variable value unavailable: {exc}"
        trace = checker.trace
        if value is not None:
            report.verdict = {Truth.TRUE: "pass", Truth.FALSE: "fail", Truth.UNKNOWN: "unknown"}[value]
            report.first_failure = why
            if value is Truth.FALSE and trace.witness_failures and why and why.startswith("witness"):
                report.reason = "witness-plan failure"
        report.witnesses = {k: v for k, v in trace.witnesses.items()}
        for k, val in env.items():
            report.witnesses.setdefault(k, [model.describe(val)])
        if trace.max_residual is not None:
            report.max_residual = mp.nstr(trace.max_residual, 5)
            report.residual_value = trace.max_residual
    report.identities = trace.identities if model.exact and report.verdict == "pass" else []
    report.partiality = trace.partiality
    report.witness_failures = trace.witness_failures
    report.probe_counts = trace.probe_counts
    report.atoms_checked = trace.atoms_checked
    status = {"pass": {"∃": "witnessed", "∀": "probe-verified"}}
    report.blocks = [
        {"quantifier": q, "variables": xs,
         "status": status.get(report.verdict, {}).get(q, "not established")}
        for q, xs in blocks
    ]
    return report


# -- exact lemma arithmetic --------------------------------------------

def exact_theta_check(x) -> bool:
    """Is 2**x rational, for rational x = m/n in lowest terms?

    A rational n-th root r of 2**|m| is an integer (rational root theorem),
    and unique factorization forces r = 2**k with n*k = |m|. So the answer
    is n | m, which in lowest terms means n = 1.
    """
    q = Fraction(x)
    m, n = abs(q.numerator), q.denominator
    if m % n:
        return False
    k = m // n
    assert (2**k) ** n == 2**m
    return True


# -- trigonometric identities ------------------------------------------

def _trig(model: Model, j, x):
    plus = model.E(j * x)
    minus = model.E(-(j * x))
    two = model.const(Fraction(2))
    return (plus + minus) / two, (plus - minus) / (two * j)


def default_trig_probes() -> list[Fraction]:
    out = []
    for m in (1, 2, 3, 4, 8):
        for k in range(-4, 5):
            out.append(Fraction(k, m))
    return list(dict.fromkeys(out))


def verify_trig_identities(model: Model, j, probes: list[Fraction] | None = None) -> CheckReport:
    """Check parity, the zero sets of sin and cos, and the sign choice for sin(alpha/4j).

    Probes are rationals c standing for x = c*tau/j; ``j`` may be a model
    element or a recipe string such as "z(4)^3".
    """
    probes = probes if probes is not None else default_trig_probes()
    report = CheckReport("pass", model.name, getattr(model, "precision_bits", None))
    overall = Truth.TRUE
    with model.session():
        jv = model.evaluate_recipe(j, {}) if isinstance(j, str) else j
        sq, _ = model.eq(jv * jv, -model.one())
        if sq is not Truth.TRUE:
            raise ValueError("j must satisfy j*j = -1")
        tau = model.tau()
        zero = model.zero()
        one = model.one()

        residuals = []
        plain_eq = model.eq

        def eq(a, b):
            value, residual = plain_eq(a, b)
            if residual is not None and value is Truth.TRUE:
                residuals.append(residual)
            return value, residual

        def record(item: str, probe, value: Truth, detail: str):
            nonlocal overall
            overall = overall & value
            report.items.append({"item": item, "probe": probe, "result": value.value, "detail": detail})
            if value is not Truth.TRUE and report.first_failure is None:
                report.first_failure = f"{item} at {probe}: {detail}"

        def in_ker(v) -> Truth:
            try:
                return eq(model.E(v), one)[0]
            except EDomainError:
                return Truth.FALSE

        for c in probes:
            x = model.const(c) * tau / jv
            label = f"{c}*tau/j"
            cx, sx = _trig(model, jv, x)
            cmx, smx = _trig(model, jv, -x)
            record("cos(-x) = cos(x)", label, eq(cmx, cx)[0], model.describe(cx))
            record("sin(-x) = -sin(x)", label, eq(smx, -sx)[0], model.describe(sx))
            two_jx = model.const(Fraction(2)) * jv * x
            four_jx = model.const(Fraction(4)) * jv * x
            sin_zero = eq(sx, zero)[0]
            member = in_ker(two_jx)
            agree = Truth.TRUE if sin_zero == member else (
                Truth.UNKNOWN if Truth.UNKNOWN in (sin_zero, member) else Truth.FALSE)
            record("sin(x) = 0 iff x in (1/2j)Ker", label, agree,
                   f"sin(x)={model.describe(sx)}, 2jx in Ker: {member.value}")
            if in_ker(four_jx) is Truth.TRUE and member is Truth.FALSE:
                record("cos vanishes on (1/4j)Ker minus (1/2j)Ker", label, eq(cx, zero)[0],
                       f"cos(x)={model.describe(cx)}")
        for k in range(-3, 4):
            alpha = model.const(Fraction(k)) * tau
            if in_ker(alpha) is not Truth.TRUE or in_ker(alpha / model.const(Fraction(2))) is not Truth.FALSE:
                continue
            four_j = model.const(Fraction(4)) * jv
            _, s_plus = _trig(model, jv, alpha / four_j)
            _, s_minus = _trig(model, jv, -alpha / four_j)
            a, b = eq(s_plus, one)[0], eq(s_minus, one)[0]
            if Truth.UNKNOWN in (a, b):
                exactly_one = Truth.UNKNOWN
            else:
                exactly_one = Truth.TRUE if (a is Truth.TRUE) != (b is Truth.TRUE) else Truth.FALSE
            record("exactly one of sin(alpha/4j), sin(-alpha/4j) is 1", f"alpha={k}*tau", exactly_one,
                   f"{model.describe(s_plus)}, {model.describe(s_minus)}")
        if residuals and not model.exact:
            worst = max(residuals)
            report.max_residual = mp.nstr(worst, 5)
            report.residual_value = worst
    report.atoms_checked = len(report.items)
    report.verdict = {Truth.TRUE: "pass", Truth.FALSE: "fail", Truth.UNKNOWN: "unknown"}[overall]
    return report
