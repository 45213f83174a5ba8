"""Real abelian numbers: the fixed field of sigma0 inside Q^ab.

Every real abelian number at conductor n is written uniquely in the basis
{1} + {cos(2*pi*j/n) : 1 <= j < phi(n)/2} of the real subfield of
Q(zeta_n); that is the decomposition handed to the formula compiler.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm

from .cyclotomic import CycNum, as_cyc, minpoly, root_of_unity, sigma0
from .poly import as_rat, euler_phi, format_rat, squarefree_part, sturm_count


class NotRealAbelian(ValueError):
    """Raised when an operation needs an element fixed by sigma0."""


@dataclass(frozen=True)
class CosDecomposition:
    """``constant + sum(r * cos(2*pi*s) for r, s in terms)`` with 0 < s <= 1/2."""

    constant: Fraction
    terms: tuple[tuple[Fraction, Fraction], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "constant", as_rat(self.constant))
        terms = tuple((as_rat(r), as_rat(s)) for r, s in self.terms)
        object.__setattr__(self, "terms", terms)
        self.validate()

    def validate(self) -> None:
        prev = Fraction(0)
        for r, s in self.terms:
            if r == 0:
                raise ValueError("decomposition terms must have nonzero coefficients")
            if not (0 < s <= Fraction(1, 2)):
                raise ValueError(f"cosine argument {s} outside (0, 1/2]")
            if s <= prev:
                raise ValueError("cosine arguments must be strictly increasing")
            prev = s

    def reconstruct(self) -> CycNum:
        """Exact value, using cos(2*pi*s) = (E(s*tau) + E(-s*tau)) / 2."""
        total = CycNum.rational(self.constant)
        for r, s in self.terms:
            total = total + r * (root_of_unity(s) + root_of_unity(-s)) / 2
        return total

    def denominator_lcm(self) -> int:
        return lcm(self.constant.denominator, *(r.denominator for r, _ in self.terms))

    def to_json(self) -> dict:
        return {
            "constant": format_rat(self.constant),
            "terms": [[format_rat(r), format_rat(s)] for r, s in self.terms],
        }

    @classmethod
    def from_json(cls, data: dict) -> CosDecomposition:
        return cls(as_rat(data["constant"]), tuple((as_rat(r), as_rat(s)) for r, s in data["terms"]))

    def __str__(self) -> str:
        parts = []
        if self.constant != 0 or not self.terms:
            parts.append(str(self.constant))
        for r, s in self.terms:
            parts.append(f"{r}·cos(2π·{s})")
        return " + ".join(parts)


def is_real_abelian(a: CycNum) -> bool:
    a = as_cyc(a)
    return sigma0(a) == a


def rab_projection(a: CycNum) -> CycNum:
    """(a + sigma0(a)) / 2."""
    a = as_cyc(a)
    return (a + sigma0(a)) / 2


def cos_decomposition(a: CycNum) -> CosDecomposition:
    a = as_cyc(a)
    if not is_real_abelian(a):
        raise NotRealAbelian(f"{a} is not fixed by sigma0")
    n = a.level
    if n == 1:
        return CosDecomposition(a.to_rational())
    half = euler_phi(n) // 2
    # basis: 1 and zeta^j + zeta^-j for 1 <= j < half, at level n
    columns = [[Fraction(1)] + [Fraction(0)] * (euler_phi(n) - 1)]
    for j in range(1, half):
        columns.append((root_of_unity(Fraction(j, n)) + root_of_unity(Fraction(-j, n))).at_level(n))
    sol = _solve_consistent(columns, list(a.coeffs))
    terms = []
    for j in range(1, half):
        # r * cos = r/2 * (zeta^j + zeta^-j)
        if sol[j] != 0:
            terms.append((2 * sol[j], Fraction(j, n)))
    decomposition = CosDecomposition(sol[0], tuple(terms))
    assert decomposition.reconstruct() == a
    return decomposition


def _solve_consistent(columns: list[list[Fraction]], target: list[Fraction]) -> list[Fraction]:
    """Solve an overdetermined consistent system given column vectors."""
    k = len(columns)
    rows = [[columns[c][r] for c in range(k)] + [target[r]] for r in range(len(target))]
    pivot_cols = []
    r0 = 0
    for c in range(k):
        piv = next((r for r in range(r0, len(rows)) if rows[r][c] != 0), None)
        if piv is None:
            continue
        rows[r0], rows[piv] = rows[piv], rows[r0]
        inv = 1 / rows[r0][c]
        rows[r0] = [x * inv for x in rows[r0]]
        for r in range(len(rows)):
            if r != r0 and rows[r][c] != 0:
                f = rows[r][c]
                rows[r] = [x - f * y for x, y in zip(rows[r], rows[r0])]
        pivot_cols.append(c)
        r0 += 1
    if any(row[k] != 0 for row in rows[r0:]):
        raise NotRealAbelian("element is not in the span of the cosine basis")
    sol = [Fraction(0)] * k
    for i, c in enumerate(pivot_cols):
        sol[c] = rows[i][k]
    return sol


def is_totally_real(a: CycNum) -> bool:
    """Exact certificate: every root of the minimal polynomial is real (Sturm count)."""
    f = squarefree_part(minpoly(as_cyc(a)))
    return sturm_count(f) == f.degree
