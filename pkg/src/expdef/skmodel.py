"""The standard-kernel partial exponential field SK = Q^ab(tau).

tau is a formal transcendental standing for 2*pi*i. Elements are reduced
rational functions in tau with cyclotomic coefficients; E is defined only on
the rational multiples of tau, where it returns a root of unity.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from math import lcm

from .cyclotomic import CycNum, as_cyc, galois_orbit, root_of_unity, sigma0
from .lattice import hnf, integer_kernel, rational_kernel
from .poly import Poly, as_rat, format_rat, poly_divrem, poly_gcd
from .rab import is_real_abelian


class EDomainError(ValueError):
    """E was applied outside its domain Q*tau."""


def _cyc_poly(p: Poly) -> Poly:
    return Poly([as_cyc(c) for c in p.coeffs])


ONE_CYC = CycNum.rational(1)


class SKElement:
    """``num(tau) / den(tau)`` in lowest terms with monic denominator."""

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num, den=None):
        num = _cyc_poly(num if isinstance(num, Poly) else Poly([as_cyc(num)]))
        den = _cyc_poly(den) if den is not None else Poly([ONE_CYC])
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if num.is_zero():
            self.num, self.den = Poly(), Poly([ONE_CYC])
        else:
            if den.degree > 0:
                g = poly_gcd(num, den)
                if g.degree > 0:
                    num = poly_divrem(num, g)[0]
                    den = poly_divrem(den, g)[0]
            lead = den.lc
            if lead != 1:
                inv = lead.inverse()
                num, den = num.scale(inv), den.scale(inv)
            self.num, self.den = _cyc_poly(num), _cyc_poly(den)
        self._hash = None

    # -- constructors -------------------------------------------------
    @classmethod
    def tau(cls) -> SKElement:
        return cls(Poly([CycNum.rational(0), ONE_CYC]))

    @classmethod
    def const(cls, c) -> SKElement:
        return cls(Poly([as_cyc(c)]))

    @classmethod
    def kernel_multiple(cls, q) -> SKElement:
        return cls(Poly([CycNum.rational(0), CycNum.rational(as_rat(q))]))

    # -- predicates ---------------------------------------------------
    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_constant(self) -> bool:
        return self.den.degree == 0 and self.num.degree <= 0

    def constant(self) -> CycNum:
        if not self.is_constant():
            raise ValueError(f"{self} is not a constant of Q^ab")
        return self.num.coeffs[0] if self.num.coeffs else CycNum.rational(0)

    def kernel_coefficient(self) -> Fraction | None:
        """q when this element equals q*tau with q rational, else None."""
        if self.is_zero():
            return Fraction(0)
        if self.den.degree != 0 or self.num.degree != 1 or self.num.coeffs[0] != 0:
            return None
        c = self.num.coeffs[1]
        return c.to_rational() if c.is_rational() else None

    # -- field operations ---------------------------------------------
    def __add__(self, other) -> SKElement:
        other = _as_sk(other)
        if other is NotImplemented:
            return other
        if self.den == other.den:
            return SKElement(self.num + other.num, self.den)
        return SKElement(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self) -> SKElement:
        out = object.__new__(SKElement)
        out.num, out.den, out._hash = -self.num, self.den, None
        return out

    def __sub__(self, other) -> SKElement:
        other = _as_sk(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other) -> SKElement:
        return _as_sk(other) - self

    def __mul__(self, other) -> SKElement:
        other = _as_sk(other)
        if other is NotImplemented:
            return other
        return SKElement(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def inverse(self) -> SKElement:
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in SK")
        return SKElement(self.den, self.num)

    def __truediv__(self, other) -> SKElement:
        other = _as_sk(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other) -> SKElement:
        return _as_sk(other) * self.inverse()

    def __pow__(self, k: int) -> SKElement:
        if k < 0:
            return self.inverse() ** (-k)
        return SKElement(self.num**k, self.den**k)

    def __eq__(self, other) -> bool:
        other = _as_sk(other)
        if other is NotImplemented:
            return False
        return self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.num, self.den))
        return self._hash

    def __repr__(self) -> str:
        return f"SKElement({self})"

    def __str__(self) -> str:
        num = _poly_expr(self.num)
        if self.den.degree == 0:
            return num
        return f"({num})/({_poly_expr(self.den)})"

    def to_expr(self) -> str:
        return str(self)

    def to_json(self) -> dict:
        return {
            "num": [c.to_json() for c in self.num.coeffs],
            "den": [c.to_json() for c in self.den.coeffs],
        }

    @classmethod
    def from_json(cls, data: dict) -> SKElement:
        return cls(Poly([CycNum.from_json(c) for c in data["num"]]),
                   Poly([CycNum.from_json(c) for c in data["den"]]))


def _poly_expr(p: Poly) -> str:
    if p.is_zero():
        return "0"
    parts = []
    for k in range(p.degree, -1, -1):
        c = p.coeffs[k]
        if c == 0:
            continue
        mono = "" if k == 0 else ("tau" if k == 1 else f"tau^{k}")
        if not mono:
            parts.append(c.to_expr())
        elif c == 1:
            parts.append(mono)
        elif c == -1:
            parts.append(f"-{mono}")
        elif c.is_rational() or len(c.to_expr().split()) == 1:
            parts.append(f"{c.to_expr()}*{mono}")
        else:
            parts.append(f"({c.to_expr()})*{mono}")
    return " + ".join(parts).replace("+ -", "- ")


def _as_sk(x):
    if isinstance(x, SKElement):
        return x
    if isinstance(x, (int, Fraction, CycNum)):
        return SKElement.const(x)
    return NotImplemented


TAU = SKElement.tau()


@dataclass(frozen=True)
class KernelMultiple:
    """The element q*tau of D(SK)."""

    q: Fraction

    def __post_init__(self):
        object.__setattr__(self, "q", as_rat(self.q))

    def element(self) -> SKElement:
        return SKElement.kernel_multiple(self.q)

    def __str__(self) -> str:
        return f"{format_rat(self.q)}*tau"


def _kernel_q(x) -> Fraction:
    if isinstance(x, KernelMultiple):
        return x.q
    if isinstance(x, SKElement):
        q = x.kernel_coefficient()
        if q is None:
            raise EDomainError(f"E is undefined at {x}: not in Q*tau")
        return q
    return as_rat(x)


def sk_E(x) -> CycNum:
    """E(q*tau) = exp(2*pi*i*q), a root of unity; any other argument is a domain error."""
    return root_of_unity(_kernel_q(x))


def in_domain(x: SKElement) -> bool:
    return x.kernel_coefficient() is not None


def sigma1(x) -> SKElement:
    """tau -> -tau with sigma0 applied to every coefficient."""
    if isinstance(x, (int, Fraction, CycNum)):
        x = SKElement.const(x)

    def flip(p: Poly) -> Poly:
        return Poly([sigma0(c) if k % 2 == 0 else -sigma0(c) for k, c in enumerate(p.coeffs)])

    # the denominator stays monic up to a sign, which the constructor absorbs
    return SKElement(flip(x.num), flip(x.den))


def delta_SK(X) -> int:
    """Predimension trans.deg(X, E(X)/Q) - lin.dim_Q(X) for finite X inside Q*tau.

    Both terms equal 1 when X has a nonzero element and 0 otherwise: the
    span of X is Q*tau, tau is transcendental and every E-value is algebraic.
    """
    qs = [_kernel_q(x) for x in X]
    lin_dim = len(qs) - len(additive_dependencies(qs))
    # tau is transcendental while E(X) consists of roots of unity
    trans_deg = 1 if any(q != 0 for q in qs) else 0
    return trans_deg - lin_dim


def root_of_unity_exponent(a: CycNum) -> tuple[int, int]:
    """Return (k, N) with a = exp(2*pi*i*k/N), N the exact order."""
    a = as_cyc(a)
    n = a.level
    n2 = n if n % 2 == 0 else 2 * n
    # a root of unity in Q(zeta_n) has order dividing lcm(2, n)
    for k in range(n2):
        if root_of_unity(Fraction(k, n2)) == a:
            q = Fraction(k, n2)
            return q.numerator, q.denominator
    raise ValueError(f"{a} is not a root of unity")


def multiplicative_dependencies(roots) -> list[list[int]]:
    """HNF basis of {m in Z^n : prod(root_i ** m_i) = 1}."""
    exps = [root_of_unity_exponent(r) for r in roots]
    if not exps:
        return []
    N = lcm(*(d for _, d in exps))
    a = [k * (N // d) for k, d in exps]
    # kernel of (a_1 .. a_n, N) projects injectively onto the m-coordinates
    kernel = integer_kernel([a + [N]])
    return hnf([v[:-1] for v in kernel])


def additive_dependencies(X) -> list[list[int]]:
    """Basis of the Q-linear relations among the q_i*tau, as primitive integer vectors."""
    qs = [_kernel_q(x) for x in X]
    if not qs:
        return []
    return rational_kernel([qs], len(qs))


@dataclass(frozen=True)
class FreenessResult:
    free: bool
    certificate: tuple[int, ...] | None
    reason: str

    def __bool__(self) -> bool:
        return self.free

    def to_json(self) -> dict:
        return {"free": self.free, "certificate": None if self.certificate is None else list(self.certificate),
                "reason": self.reason}


def is_free_tuple(X) -> FreenessResult:
    """Free means no nonzero integer m with sum(m_i * q_i) in Z.

    Inside SK such an m always exists once X is nonempty: additive relations
    appear from length two on, and a single q*tau already has E(q*tau) of
    finite order.
    """
    qs = [_kernel_q(x) for x in X]
    if not qs:
        return FreenessResult(True, None, "empty tuple")
    add = additive_dependencies(qs)
    if add:
        return FreenessResult(False, tuple(add[0]), "additive dependency")
    mult = multiplicative_dependencies([sk_E(q) for q in qs])
    cert = next(v for v in mult if any(v))
    return FreenessResult(False, tuple(cert), "multiplicative dependency")


class CKVerdict(str, enum.Enum):
    INVOLUTION_EXTENDS = "InvolutionExtends"
    ONLY_TRIVIAL = "OnlyTrivialAutomorphism"


@dataclass(frozen=True)
class CKResult:
    verdict: CKVerdict
    description: str

    def to_json(self) -> dict:
        return {"verdict": self.verdict.value, "description": self.description}


def ck_tau_involution_test(t) -> CKResult:
    """Does sigma0 extend to an involution of the kernel-tau structure?

    Over Q^ab the minimal polynomial of t is x - t, so the test is
    sigma0(t) = -t.
    """
    if not isinstance(t, (CycNum, int, Fraction)):
        raise TypeError("t must be a cyclotomic number")
    t = as_cyc(t)
    if t.is_zero():
        raise ValueError("t must be nonzero")
    if sigma0(t) == -t:
        return CKResult(CKVerdict.INVOLUTION_EXTENDS,
                        "definable algebraic numbers are the fixed field of the extended involution")
    return CKResult(CKVerdict.ONLY_TRIVIAL, "definable algebraic numbers are precisely the elements of Q^ab(tau)")


def sigma0_orbit(a) -> list[CycNum]:
    a = as_cyc(a)
    orbit = [a]
    b = sigma0(a)
    if b != a:
        orbit.append(b)
    return orbit


def orbit_singleton(a) -> bool:
    """Orbit of a under the group generated by sigma0 has one element."""
    return len(sigma0_orbit(a)) == 1


__all__ = [
    "EDomainError", "SKElement", "TAU", "KernelMultiple", "sk_E", "in_domain", "sigma1", "delta_SK",
    "multiplicative_dependencies", "additive_dependencies", "is_free_tuple", "FreenessResult",
    "CKVerdict", "CKResult", "ck_tau_involution_test", "orbit_singleton", "sigma0_orbit",
    "root_of_unity_exponent", "galois_orbit", "is_real_abelian",
]
