"""Find an exact cyclotomic representation of a root of a rational polynomial.

The search walks candidate levels m in increasing order. At each level an
integer relation between the selected root and the power basis of
Q(zeta_m) is sought numerically (PSLQ); any candidate it produces is
accepted only after exact verification in Q(zeta_m). A wrong numeric
guess therefore costs time, never soundness.
"""

from __future__ import annotations

import enum
from functools import lru_cache
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from mpmath import mp

from .cyclotomic import CycNum, minpoly, numeric_eval
from .numeric import contains_zero, magnitude_upper
from .poly import Poly, discriminant, euler_phi, is_squarefree, prime_factors, primitive_integer, sturm_count
from .rab import is_real_abelian

DEFAULT_HARD_MAX = 10**4
SMOOTHNESS_CAP = 10**6


class Verdict(str, enum.Enum):
    REAL_ABELIAN = "RealAbelian"
    ABELIAN_NOT_REAL = "AbelianNotReal"
    NOT_ABELIAN_UP_TO_BOUND = "NotAbelianUpToBound"


@dataclass
class RecognitionResult:
    verdict: Verdict
    witness: CycNum | None
    bound_used: int
    diagnostics: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict.value,
            "witness": None if self.witness is None else self.witness.to_json(),
            "witness_expr": None if self.witness is None else self.witness.to_expr(),
            "bound_used": self.bound_used,
            "diagnostics": self.diagnostics,
        }


def _small_prime_divisors(n: int, cap: int) -> list[int]:
    n = abs(n)
    out = []
    p = 2
    while p <= cap and p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1 if p == 2 else 2
    if 1 < n <= cap:
        out.append(n)
    return out


def default_level_bound(f: Poly, hard_max: int = DEFAULT_HARD_MAX, smoothness_cap: int = SMOOTHNESS_CAP) -> int:
    """Heuristic search ceiling 4*deg^2*prod(p | disc(f), p <= cap), clamped to ``hard_max``.

    A negative verdict under this bound is evidence, not proof.
    """
    if f.degree < 1:
        raise ValueError("polynomial must be nonconstant")
    if f.degree == 1:
        disc = Fraction(1)
    else:
        disc = discriminant(f)
    if disc == 0:
        raise ValueError("discriminant vanishes: polynomial is not squarefree")
    primes = set(_small_prime_divisors(disc.numerator, smoothness_cap))
    primes |= set(_small_prime_divisors(disc.denominator, smoothness_cap))
    bound = 4 * f.degree**2
    for p in primes:
        bound *= p
    return min(bound, hard_max)


def _ramification_modulus(f: Poly) -> int:
    """Integer divisible by every prime that can ramify in the field of a root of f."""
    g = primitive_integer(f)
    if g.degree == 1:
        return 1
    disc = discriminant(g)
    return abs(disc.numerator * disc.denominator * int(g.lc))


def sorted_roots(f: Poly, precision_bits: int) -> list:
    """Complex roots ordered by (real part, imaginary part) at working precision.

    Double-precision companion-matrix roots seed Newton refinement; if the
    refined roots are not clearly distinct, mpmath's Durand-Kerner solver is
    used instead.
    """
    with mp.workprec(precision_bits + 32):
        coeffs = [mp.mpf(c.numerator) / c.denominator for c in reversed(f.coeffs)]
        if f.degree == 1:
            roots = [mp.mpc(-coeffs[1] / coeffs[0])]
        else:
            roots = _seeded_roots(coeffs, precision_bits)
            if roots is None:
                roots = [mp.mpc(r) for r in mp.polyroots(coeffs, maxsteps=200, extraprec=precision_bits)]
        scale = mp.mpf(2) ** (precision_bits // 2)
        return sorted(roots, key=lambda r: (int(mp.nint(r.real * scale)), r.imag))


def _seeded_roots(coeffs, precision_bits: int):
    with np.errstate(all="ignore"):
        seeds = np.roots(np.array([float(c) for c in coeffs]))
    if len(seeds) != len(coeffs) - 1 or not np.all(np.isfinite(seeds)):
        return None
    degree = len(coeffs) - 1
    dcoeffs = [c * (degree - i) for i, c in enumerate(coeffs[:-1])]
    eps = mp.mpf(2) ** (-precision_bits - 16)
    roots = []
    for seed in seeds:
        r = mp.mpc(complex(seed))
        for _ in range(8 + precision_bits.bit_length()):
            d = mp.polyval(dcoeffs, r)
            if d == 0:
                return None
            step = mp.polyval(coeffs, r) / d
            r -= step
            if abs(step) <= eps * max(1, abs(r)):
                break
        else:
            return None
        roots.append(r)
    sep = mp.mpf(2) ** (-(precision_bits // 4))
    for i in range(degree):
        for j in range(i):
            if abs(roots[i] - roots[j]) < sep:
                return None
    return roots


def _candidate_levels(f: Poly, max_level: int):
    d = f.degree
    modulus = _ramification_modulus(f)
    for m in range(1, max_level + 1):
        if m % 4 == 2 or euler_phi(m) % d:
            continue
        if any(modulus % p for p in prime_factors(m)):
            continue
        yield m


def _integer_relation(target, basis, precision_bits: int) -> list[Fraction] | None:
    """Rational coefficients c with target = sum(c_j * basis_j), via PSLQ."""
    if abs(target) < mp.mpf(2) ** (-(precision_bits * 3 // 4)):
        return [Fraction(0)] * len(basis)
    rel = mp.pslq([target] + basis, maxcoeff=2 ** (precision_bits // 4), maxsteps=2000 * (len(basis) + 1))
    if rel is None or rel[0] == 0:
        return None
    return [Fraction(-c, rel[0]) for c in rel[1:]]


@lru_cache(maxsize=512)
def _trig_bases(m: int, precision_bits: int) -> tuple[list, list]:
    half = euler_phi(m) // 2
    with mp.workprec(precision_bits):
        two_pi = 2 * mp.pi
        cos_basis = [mp.mpf(1)] + [mp.cos(two_pi * j / m) for j in range(1, half)]
        sin_basis = [mp.sin(two_pi * j / m) for j in range(1, half + 1)]
    return cos_basis, sin_basis


def _candidate_at_level(z, m: int, precision_bits: int) -> list[Fraction] | None:
    """Power-basis coefficients (length m) of a candidate equal to ``z`` at level m.

    Complex conjugation acts on Q(zeta_m) as zeta -> zeta^-1, so the real part
    of ``z`` lies in the span of 1 and cos(2*pi*j/m) for 1 <= j < phi/2 and the
    imaginary part in the span of sin(2*pi*j/m) for 1 <= j <= phi/2. Each is a
    real integer-relation problem of half the dimension.
    """
    coeffs = [Fraction(0)] * m
    if m == 1:
        if abs(z.imag) > mp.mpf(2) ** (-(precision_bits // 2)):
            return None
        rel = _integer_relation(z.real, [mp.mpf(1)], precision_bits)
        if rel is None:
            return None
        coeffs[0] = rel[0]
        return coeffs
    cos_basis, sin_basis = _trig_bases(m, precision_bits)
    re = _integer_relation(z.real, cos_basis, precision_bits)
    if re is None:
        return None
    im = _integer_relation(z.imag, sin_basis, precision_bits)
    if im is None:
        return None
    half = euler_phi(m) // 2
    coeffs[0] = re[0]
    for j in range(1, half):
        # a*cos = a/2 (zeta^j + zeta^-j)
        coeffs[j] += re[j] / 2
        coeffs[m - j] += re[j] / 2
    for j in range(1, half + 1):
        # i*b*sin = b/2 (zeta^j - zeta^-j)
        coeffs[j] += im[j - 1] / 2
        coeffs[m - j] -= im[j - 1] / 2
    return coeffs


def recognize(
    f: Poly,
    root_index: int,
    max_level: int | None = None,
    precision_bits: int = 256,
) -> RecognitionResult:
    """Classify the selected root of ``f`` as real abelian, abelian, or not found."""
    if f.degree < 1:
        raise ValueError("polynomial must be nonconstant")
    if not is_squarefree(f):
        raise ValueError("polynomial must be squarefree")
    if max_level is None:
        max_level = default_level_bound(f)
    roots = sorted_roots(f, precision_bits)
    if not 0 <= root_index < len(roots):
        raise IndexError(f"root index {root_index} out of range 0..{len(roots) - 1}")
    z = roots[root_index]
    diagnostics = {"levels_tried": 0, "spurious_relations": 0, "search_exhausted": False}
    real_roots = sturm_count(f)
    if 0 < real_roots < f.degree:
        # abelian fields are totally real or totally imaginary, so a mixed
        # signature already rules out any cyclotomic root with minpoly f
        diagnostics["mixed_signature"] = True
        return RecognitionResult(Verdict.NOT_ABELIAN_UP_TO_BOUND, None, max_level, diagnostics)
    tol = mp.mpf(2) ** (-(precision_bits // 2))

    for m in _candidate_levels(f, max_level):
        diagnostics["levels_tried"] += 1
        with mp.workprec(precision_bits):
            coeffs = _candidate_at_level(z, m, precision_bits)
            if coeffs is None:
                continue
            approx = mp.fsum(c.numerator * mp.expjpi(mp.mpf(2 * j) / m) / c.denominator
                             for j, c in enumerate(coeffs) if c)
            if abs(approx - z) > tol:
                diagnostics["spurious_relations"] += 1
                continue
        candidate = CycNum(m, coeffs)
        if not _verify(f, candidate, z, precision_bits, tol):
            diagnostics["spurious_relations"] += 1
            continue
        verdict = Verdict.REAL_ABELIAN if is_real_abelian(candidate) else Verdict.ABELIAN_NOT_REAL
        diagnostics["level"] = candidate.level
        return RecognitionResult(verdict, candidate, max_level, diagnostics)

    diagnostics["search_exhausted"] = True
    return RecognitionResult(Verdict.NOT_ABELIAN_UP_TO_BOUND, None, max_level, diagnostics)


def _verify(f: Poly, candidate: CycNum, z, precision_bits: int, tol) -> bool:
    if f(candidate) != 0:
        return False
    if minpoly(candidate).degree != f.degree:
        return False
    box = numeric_eval(candidate, precision_bits)
    with mp.workprec(precision_bits):
        diff = box - mp.mpc(z)
    return contains_zero(diff) or magnitude_upper(diff) < tol

