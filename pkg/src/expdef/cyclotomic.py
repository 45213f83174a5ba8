"""Exact arithmetic in cyclotomic fields Q(zeta_n).

An element is stored at its conductor level n as a coefficient vector in
the power basis 1, zeta_n, ..., zeta_n^(phi(n)-1), reduced modulo Phi_n.
Because every public operation returns the element at its least level,
structural equality is mathematical equality.

The numeric embedding is the principal one, zeta_n -> exp(2*pi*i/n).
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm
from typing import Iterable, Sequence

from .numeric import iv_precision, iv_rational
from .poly import Poly, _cyclotomic_ints, as_rat, euler_phi, format_rat, prime_factors

__all__ = [
    "CycNum",
    "root_of_unity",
    "zeta",
    "galois",
    "sigma0",
    "minpoly",
    "numeric_eval",
    "reduce_level",
    "cyc_add",
    "cyc_mul",
    "cyc_inv",
    "units_mod",
]

_ZERO = Fraction(0)


# -- raw vector helpers ----------------------------------------------------
# Raw vectors are integer lists at a fixed level; an element is a pair
# (numerators, denominator) with the denominator shared by all entries.

@lru_cache(maxsize=None)
def _power_table(n: int) -> tuple[tuple[int, ...], ...]:
    """Row k holds x^k mod Phi_n for 0 <= k < n (integer entries)."""
    phi_coeffs = _cyclotomic_ints(n)
    d = len(phi_coeffs) - 1
    rows = []
    cur = [0] * d
    cur[0] = 1
    for _ in range(n):
        rows.append(tuple(cur))
        # multiply by x and reduce with the monic Phi_n
        top = cur[-1]
        nxt = [0] + cur[:-1]
        if top:
            for i in range(d):
                nxt[i] -= top * phi_coeffs[i]
        cur = nxt
    return tuple(rows)


@lru_cache(maxsize=None)
def _sparse_table(n: int) -> tuple[tuple[tuple[int, int], ...], ...]:
    return tuple(tuple((i, r) for i, r in enumerate(row) if r) for row in _power_table(n))


def _from_exponents(n: int, terms: Iterable[tuple[int, int]]) -> list[int]:
    table = _sparse_table(n)
    out = [0] * euler_phi(n)
    for e, c in terms:
        if c:
            for i, r in table[e % n]:
                out[i] += c * r
    return out


def _mul_raw(n: int, a: Sequence[int], b: Sequence[int]) -> list[int]:
    conv = [0] * (len(a) + len(b) - 1)
    nzb = [(j, y) for j, y in enumerate(b) if y]
    for i, x in enumerate(a):
        if x:
            for j, y in nzb:
                conv[i + j] += x * y
    return _from_exponents(n, enumerate(conv))


def _galois_raw(n: int, a: Sequence[int], k: int) -> list[int]:
    return _from_exponents(n, ((j * k, c) for j, c in enumerate(a)))


def _embed_raw(m: int, n: int, a: Sequence[int]) -> list[int]:
    step = n // m
    return _from_exponents(n, ((j * step, c) for j, c in enumerate(a)))


def units_mod(n: int) -> list[int]:
    return [k for k in range(1, n + 1) if gcd(k, n) == 1] if n > 1 else [1]


def _normalize(num: Sequence[int], den: int) -> tuple[tuple[int, ...], int]:
    g = den
    for c in num:
        if g == 1:
            break
        g = gcd(g, c)
    if den < 0:
        g = -g
    if g != 1:
        return tuple(c // g for c in num), den // g
    return tuple(num), den


def _solve_fraction_free(mat: list[list[int]], rhs: list[int]) -> tuple[list[int], int]:
    """Solve mat @ x = rhs over Q by Bareiss elimination; returns (numerators, denominator)."""
    size = len(mat)
    aug = [list(row) + [b] for row, b in zip(mat, rhs)]
    prev = 1
    for k in range(size):
        piv = next((r for r in range(k, size) if aug[r][k]), None)
        if piv is None:
            raise ZeroDivisionError("singular system")
        if piv != k:
            aug[k], aug[piv] = aug[piv], aug[k]
        pk = aug[k]
        akk = pk[k]
        for r in range(k + 1, size):
            row = aug[r]
            ark = row[k]
            for c in range(k + 1, size + 1):
                row[c] = (row[c] * akk - ark * pk[c]) // prev
            row[k] = 0
        prev = akk
    # back substitution in Fractions
    xs = [Fraction(0)] * size
    for r in range(size - 1, -1, -1):
        acc = Fraction(aug[r][size])
        for c in range(r + 1, size):
            if aug[r][c]:
                acc -= aug[r][c] * xs[c]
        xs[r] = acc / aug[r][r]
    den = lcm(*(x.denominator for x in xs))
    return [int(x * den) for x in xs], den


def _descend_raw(m: int, n: int, a: Sequence[int]) -> tuple[list[int], int]:
    """Coordinates at level m of an element of Q(zeta_m) given at level n = m*p, p prime."""
    p = n // m
    if m % p == 0:
        # {zeta_n^i : i < p} is a basis over Q(zeta_m), and zeta_n^p = zeta_m
        return _from_exponents(m, ((j // p, c) for j, c in enumerate(a) if j % p == 0)), 1
    # zeta_n^j = zeta_m^u * zeta_p^v; over Q(zeta_m) the powers zeta_p^v, v < p-1, are a basis
    # and zeta_p^(p-1) = -(1 + ... + zeta_p^(p-2)), so the Q(zeta_m) part is A_0 - A_(p-1)
    pinv, minv = pow(p, -1, m) if m > 1 else 0, pow(m, -1, p)
    terms = []
    for j, c in enumerate(a):
        if not c:
            continue
        v = j * minv % p
        if v == 0:
            terms.append((j * pinv % m if m > 1 else 0, c))
        elif v == p - 1:
            terms.append((j * pinv % m if m > 1 else 0, -c))
    return _from_exponents(m, terms), 1


def _fixed_by_subgroup(n: int, m: int, a: Sequence[int]) -> bool:
    a = list(a)
    for k in units_mod(n):
        if k != 1 and k % m == 1 % m:
            if _galois_raw(n, a, k) != a:
                return False
    return True


def _canonical(n: int, num: Sequence[int], den: int) -> tuple[int, tuple[int, ...], int]:
    if not any(num):
        return 1, (0,), 1
    num = list(num)
    changed = True
    while changed and n > 1:
        changed = False
        for p in prime_factors(n):
            m = n // p
            if _fixed_by_subgroup(n, m, num):
                num, extra = _descend_raw(m, n, num)
                den *= extra
                n = m
                changed = True
                break
    num, den = _normalize(num, den)
    return n, num, den


# -- the public type ---------------------------------------------------

class CycNum:
    """Element of Q^ab represented at its conductor level."""

    __slots__ = ("level", "_num", "_den", "_hash")

    def __init__(self, level: int, coeffs: Iterable = ()):
        if level < 1:
            raise ValueError("level must be positive")
        cs = [as_rat(c) for c in coeffs]
        den = lcm(*(c.denominator for c in cs)) if cs else 1
        num = [int(c * den) for c in cs]
        d = euler_phi(level)
        if len(num) > d:
            # accept length-n exponent vectors and reduce them mod Phi_n
            num = _from_exponents(level, enumerate(num))
        num = num + [0] * (d - len(num))
        self.level, self._num, self._den = _canonical(level, num, den)
        self._hash = None

    @classmethod
    def _make(cls, level: int, num: Sequence[int], den: int, canonical: bool = False) -> CycNum:
        obj = cls.__new__(cls)
        if canonical:
            obj.level = level
            obj._num, obj._den = _normalize(num, den)
        else:
            obj.level, obj._num, obj._den = _canonical(level, num, den)
        obj._hash = None
        return obj

    # -- constructors
    @classmethod
    def rational(cls, q) -> CycNum:
        q = as_rat(q)
        return cls._make(1, (q.numerator,), q.denominator, canonical=True)

    # -- predicates and views
    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(c, self._den) for c in self._num)

    def is_zero(self) -> bool:
        return self.level == 1 and self._num[0] == 0

    def is_rational(self) -> bool:
        return self.level == 1

    def to_rational(self) -> Fraction:
        if self.level != 1:
            raise ValueError(f"{self} is not rational")
        return Fraction(self._num[0], self._den)

    def at_level(self, n: int) -> list[Fraction]:
        """Coefficient vector of this element re-embedded at level ``n``."""
        return [Fraction(c, self._den) for c in self._raw_at(n)]

    def _raw_at(self, n: int) -> list[int]:
        if n % self.level:
            raise ValueError(f"level {self.level} does not divide {n}")
        if n == self.level:
            return list(self._num)
        return _embed_raw(self.level, n, self._num)

    def exponent_vector(self) -> list[Fraction]:
        """Length-``level`` coordinates: entry j multiplies zeta^j."""
        cs = list(self.coeffs)
        return cs + [Fraction(0)] * (self.level - len(cs))

    # -- equality
    def __eq__(self, other) -> bool:
        if isinstance(other, CycNum):
            return self.level == other.level and self._den == other._den and self._num == other._num
        if isinstance(other, (int, Fraction)):
            return self.level == 1 and Fraction(self._num[0], self._den) == other
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.level, self._num, self._den))
        return self._hash

    # -- arithmetic
    def __add__(self, other) -> CycNum:
        other = _coerce(other)
        if other is NotImplemented:
            return other
        n = lcm(self.level, other.level)
        a, b = self._raw_at(n), other._raw_at(n)
        da, db = self._den, other._den
        return CycNum._make(n, [x * db + y * da for x, y in zip(a, b)], da * db)

    __radd__ = __add__

    def __neg__(self) -> CycNum:
        return CycNum._make(self.level, [-c for c in self._num], self._den, canonical=True)

    def __sub__(self, other) -> CycNum:
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other) -> CycNum:
        return _coerce(other) - self

    def __mul__(self, other) -> CycNum:
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if other.level == 1:
            c, d = other._num[0], other._den
            if c == 0:
                return CycNum.rational(0)
            return CycNum._make(self.level, [c * x for x in self._num], self._den * d, canonical=True)
        if self.level == 1:
            return other * self
        n = lcm(self.level, other.level)
        return CycNum._make(n, _mul_raw(n, self._raw_at(n), other._raw_at(n)), self._den * other._den)

    __rmul__ = __mul__

    def inverse(self) -> CycNum:
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in Q(zeta_n)")
        if self.level == 1:
            return CycNum.rational(Fraction(self._den, self._num[0]))
        n = self.level
        d = len(self._num)
        # column j of the multiplication matrix is self * zeta^j
        cols = [_from_exponents(n, ((i + j, c) for i, c in enumerate(self._num))) for j in range(d)]
        mat = [[cols[j][i] for j in range(d)] for i in range(d)]
        xs, den = _solve_fraction_free(mat, [1] + [0] * (d - 1))
        return CycNum._make(n, [x * self._den for x in xs], den, canonical=True)

    def __truediv__(self, other) -> CycNum:
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other) -> CycNum:
        return _coerce(other) * self.inverse()

    def __pow__(self, k: int) -> CycNum:
        if k < 0:
            return self.inverse() ** (-k)
        result = CycNum.rational(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    # -- display and serialization
    def __repr__(self) -> str:
        return f"CycNum({self.level}, [{', '.join(str(c) for c in self.coeffs)}])"

    def __str__(self) -> str:
        return self.to_expr()

    def to_expr(self) -> str:
        """Render in the ``z(n)^k`` expression grammar."""
        n = self.level
        terms = []
        for j, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if j == 0:
                mono = None
            elif j == 1:
                mono = f"z({n})"
            else:
                mono = f"z({n})^{j}"
            neg = c < 0
            mag = -c if neg else c
            if mono is None:
                body = str(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{mag}*{mono}"
            terms.append((neg, body))
        if not terms:
            return "0"
        neg, body = terms[0]
        out = ("-" if neg else "") + body
        for neg, body in terms[1:]:
            out += (" - " if neg else " + ") + body
        return out

    def to_json(self) -> dict:
        return {"level": self.level, "coeffs": [format_rat(c) for c in self.coeffs]}

    @classmethod
    def from_json(cls, data: dict) -> CycNum:
        return cls(int(data["level"]), [as_rat(c) for c in data["coeffs"]])

    def to_complex(self) -> complex:
        z = numeric_eval(self, 64)
        return complex(float(z.real.mid), float(z.imag.mid))


def _coerce(x):
    if isinstance(x, CycNum):
        return x
    if isinstance(x, (int, Fraction)) and not isinstance(x, bool):
        return CycNum.rational(x)
    return NotImplemented


def as_cyc(x) -> CycNum:
    c = _coerce(x)
    if c is NotImplemented:
        raise TypeError(f"cannot interpret {x!r} as a cyclotomic number")
    return c


# -- operations ------------------------------------------------------------

def root_of_unity(q) -> CycNum:
    """E(q*tau): the root of unity exp(2*pi*i*q) as an exact element."""
    q = as_rat(q) % 1
    b, a = q.denominator, q.numerator
    return CycNum._make(b, _from_exponents(b, [(a, 1)]), 1)


def zeta(n: int, k: int = 1) -> CycNum:
    return root_of_unity(Fraction(k, n))


def cyc_add(a: CycNum, b: CycNum) -> CycNum:
    return a + b


def cyc_mul(a: CycNum, b: CycNum) -> CycNum:
    return a * b


def cyc_inv(a: CycNum) -> CycNum:
    return a.inverse()


def galois(k: int, a: CycNum) -> CycNum:
    """Apply the automorphism zeta_n -> zeta_n^k."""
    a = as_cyc(a)
    n = a.level
    if gcd(k, n) != 1:
        raise ValueError(f"k={k} is not coprime to the level {n}")
    if n == 1:
        return a
    return CycNum._make(n, _galois_raw(n, a._num, k % n), a._den, canonical=True)


def sigma0(a: CycNum) -> CycNum:
    """The involution inverting every root of unity (complex conjugation)."""
    return galois(-1, a)


def reduce_level(a: CycNum) -> CycNum:
    """Canonical representative at the least level; idempotent."""
    return CycNum._make(a.level, a._num, a._den)


def galois_orbit(a: CycNum) -> list[CycNum]:
    """Distinct Galois conjugates of ``a``, in order of first appearance over k."""
    a = as_cyc(a)
    n = a.level
    if n == 1:
        return [a]
    seen: dict[tuple[int, ...], None] = {}
    for k in units_mod(n):
        seen.setdefault(tuple(_galois_raw(n, a._num, k)), None)
    return [CycNum._make(n, v, a._den, canonical=True) for v in seen]


def minpoly(a: CycNum) -> Poly:
    """Minimal polynomial over Q as the product of (x - beta) over the Galois orbit."""
    a = as_cyc(a)
    n = a.level
    if n == 1:
        return Poly([-a.to_rational(), 1])
    orbit = {tuple(_galois_raw(n, a._num, k)) for k in units_mod(n)}
    d = euler_phi(n)
    # integer arithmetic on den * beta; rescale by den^k at the end
    prod: list[list[int]] = [[1] + [0] * (d - 1)]
    for beta in orbit:
        neg_beta = [-c for c in beta]
        nxt = [[0] * d for _ in range(len(prod) + 1)]
        for i, c in enumerate(prod):
            row = nxt[i + 1]
            for t in range(d):
                row[t] += c[t]
            term = _mul_raw(n, c, neg_beta)
            row = nxt[i]
            for t in range(d):
                row[t] += term[t]
        prod = nxt
    deg = len(orbit)
    coeffs = []
    for i, c in enumerate(prod):
        assert not any(c[1:]), "minpoly coefficient failed to descend to Q"
        # prod is prod_(x*den - den*beta) in the variable x*den
        coeffs.append(Fraction(c[0], a._den ** (deg - i)))
    f = Poly(coeffs)
    assert f.degree == deg and f.lc == 1
    return f


def numeric_eval(a: CycNum, precision_bits: int = 128):
    """Rigorous complex interval enclosing the principal embedding of ``a``."""
    if precision_bits < 64:
        raise ValueError("precision_bits must be at least 64")
    a = as_cyc(a)
    n = a.level
    with iv_precision(precision_bits + 20) as iv:
        re = iv.mpf(0)
        im = iv.mpf(0)
        for j, c in enumerate(a.coeffs):
            if c == 0:
                continue
            cc = iv_rational(c)
            if j == 0:
                re += cc
                continue
            ang = 2 * iv.pi * j / n
            re += cc * iv.cos(ang)
            im += cc * iv.sin(ang)
        return iv.mpc(re, im)
