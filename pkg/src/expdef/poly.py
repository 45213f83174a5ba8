"""Dense univariate polynomials with exact coefficients.

Coefficients are stored lowest degree first. Rational polynomials use
:class:`fractions.Fraction`; the same class also carries cyclotomic
coefficients (anything supporting field operators and ``== 0``), which is
how the standard-kernel model builds rational functions in tau.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm
from numbers import Rational
from typing import Iterable, Sequence

ZERO_DEGREE = -1
"""Degree reported for the zero polynomial."""


def as_rat(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"not a rational: {value!r}")


def format_rat(q: Fraction) -> str:
    """Serialize as ``"p/q"``, dropping the denominator when it is 1."""
    return str(as_rat(q))


def _coerce(c):
    if isinstance(c, bool):
        raise TypeError("bool is not a coefficient")
    if isinstance(c, (int, Rational)) and not isinstance(c, Fraction):
        return Fraction(c)
    return c


class Poly:
    """Immutable dense polynomial; ``coeffs[i]`` multiplies ``x**i``."""

    __slots__ = ("coeffs", "_hash")

    def __init__(self, coeffs: Iterable = ()):
        cs = [_coerce(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)
        self._hash = None

    # -- constructors -------------------------------------------------
    @classmethod
    def x(cls) -> Poly:
        return cls([0, 1])

    @classmethod
    def const(cls, c) -> Poly:
        return cls([c])

    @classmethod
    def monomial(cls, c, k: int) -> Poly:
        return cls([0] * k + [c])

    @classmethod
    def from_roots(cls, roots: Iterable, one=Fraction(1)) -> Poly:
        p = cls([one])
        for r in roots:
            p = p * cls([-r, one])
        return p

    # -- basic properties ---------------------------------------------
    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lc(self):
        if not self.coeffs:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def __getitem__(self, i: int):
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def __len__(self) -> int:
        return len(self.coeffs)

    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self == Poly([other])
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self.coeffs)
        return self._hash

    def __repr__(self) -> str:
        return f"Poly([{', '.join(str(c) for c in self.coeffs)}])"

    def __str__(self) -> str:
        return self.to_str()

    def to_str(self, var: str = "x") -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for k in range(self.degree, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
            if isinstance(c, Fraction):
                neg = c < 0
                mag = -c if neg else c
                if mono and mag == 1:
                    body = mono
                elif mono:
                    body = f"{mag}*{mono}"
                else:
                    body = str(mag)
                parts.append(("-" if neg else "+", body))
            else:
                body = f"({c})" + (f"*{mono}" if mono else "")
                parts.append(("+", body))
        sign, body = parts[0]
        out = ("-" if sign == "-" else "") + body
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    # -- ring operations ----------------------------------------------
    def __add__(self, other) -> Poly:
        other = _as_poly(other)
        if other is NotImplemented:
            return other
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = out[i] + c
        return Poly(out)

    __radd__ = __add__

    def __neg__(self) -> Poly:
        return Poly([-c for c in self.coeffs])

    def __sub__(self, other) -> Poly:
        other = _as_poly(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other) -> Poly:
        return _as_poly(other) - self

    def __mul__(self, other) -> Poly:
        other = _as_poly(other)
        if other is NotImplemented:
            return other
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Poly()
        out = [0] * (len(a) + len(b) - 1)
        for i, ca in enumerate(a):
            if ca == 0:
                continue
            for j, cb in enumerate(b):
                out[i + j] = out[i + j] + ca * cb
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> Poly:
        if k < 0:
            raise ValueError("negative power of a polynomial")
        result = Poly([self._one()])
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def scale(self, c) -> Poly:
        return Poly([c * a for a in self.coeffs])

    def _one(self):
        if self.coeffs:
            c = self.coeffs[-1]
            return c / c
        return Fraction(1)

    def __divmod__(self, other) -> tuple[Poly, Poly]:
        return poly_divrem(self, other)

    def __floordiv__(self, other) -> Poly:
        return poly_divrem(self, other)[0]

    def __mod__(self, other) -> Poly:
        return poly_divrem(self, other)[1]

    def __call__(self, x):
        """Horner evaluation; ``x`` may be any ring element."""
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def derivative(self) -> Poly:
        return Poly([k * self.coeffs[k] for k in range(1, len(self.coeffs))])

    def monic(self) -> Poly:
        if not self.coeffs:
            return self
        inv = 1 / self.lc
        return Poly([c * inv for c in self.coeffs])

    def map_coeffs(self, fn) -> Poly:
        return Poly([fn(c) for c in self.coeffs])

    def compose_power(self, k: int) -> Poly:
        """Return p(x**k)."""
        out = [0] * (k * self.degree + 1) if self.coeffs else []
        for i, c in enumerate(self.coeffs):
            out[i * k] = c
        return Poly(out)

    def to_json(self) -> list[str]:
        return [format_rat(c) for c in self.coeffs]

    @classmethod
    def from_json(cls, data: Sequence[str]) -> Poly:
        return cls([as_rat(c) for c in data])


def _as_poly(other):
    if isinstance(other, Poly):
        return other
    if isinstance(other, (int, Fraction)):
        return Poly([other])
    return NotImplemented


def poly_add(a: Poly, b: Poly) -> Poly:
    return a + b


def poly_mul(a: Poly, b: Poly) -> Poly:
    return a * b


def poly_divrem(a: Poly, b: Poly) -> tuple[Poly, Poly]:
    """Return ``(q, r)`` with ``a = q*b + r`` and ``deg r < deg b``."""
    if b.is_zero():
        raise ZeroDivisionError("polynomial division by zero")
    db = b.degree
    rem = list(a.coeffs)
    if len(rem) - 1 < db:
        return Poly(), a
    inv_lc = 1 / b.lc
    quot = [0] * (len(rem) - db)
    bc = b.coeffs
    for k in range(len(rem) - 1, db - 1, -1):
        c = rem[k]
        if c == 0:
            continue
        c = c * inv_lc
        quot[k - db] = c
        for i in range(db + 1):
            rem[k - db + i] = rem[k - db + i] - c * bc[i]
    return Poly(quot), Poly(rem[:db])


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic gcd; ``gcd(0, 0)`` is the zero polynomial."""
    while not b.is_zero():
        a, b = b, poly_divrem(a, b)[1]
    return a.monic()


def poly_xgcd(a: Poly, b: Poly) -> tuple[Poly, Poly, Poly]:
    """Return ``(g, s, t)`` with ``s*a + t*b = g`` and ``g`` monic."""
    one = Poly([a._one() if not a.is_zero() else b._one()])
    r0, r1 = a, b
    s0, s1 = one, Poly()
    t0, t1 = Poly(), one
    while not r1.is_zero():
        q, r = poly_divrem(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if r0.is_zero():
        return r0, s0, t0
    inv = 1 / r0.lc
    return r0.scale(inv), s0.scale(inv), t0.scale(inv)


def squarefree_part(f: Poly) -> Poly:
    if f.degree <= 0 or is_squarefree(f):
        return f
    return poly_divrem(f, poly_gcd(f, f.derivative()))[0]


def is_squarefree(f: Poly) -> bool:
    if f.is_zero():
        return False
    if f.degree <= 1:
        return True
    if _is_rational(f):
        return discriminant(f) != 0
    return poly_gcd(f, f.derivative()).degree == 0


def _is_rational(f: Poly) -> bool:
    return all(isinstance(c, Fraction) for c in f.coeffs)


# -- integer kernels on plain int lists, lowest degree first --

def _to_int(f: Poly) -> tuple[list[int], Fraction]:
    """Integer list g and scale with f = scale * g."""
    den = lcm(*(c.denominator for c in f.coeffs))
    return [int(c * den) for c in f.coeffs], Fraction(1, den)


def _content(a: list[int]) -> int:
    g = 0
    for c in a:
        g = gcd(g, c)
        if g == 1:
            break
    return g


def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _prem(a: list[int], b: list[int]) -> list[int]:
    """Pseudo-remainder lc(b)^(deg a - deg b + 1) * a mod b."""
    rem = list(a)
    db = len(b) - 1
    lb = b[-1]
    for k in range(len(rem) - 1, db - 1, -1):
        c = rem[k]
        rem = [x * lb for x in rem]
        off = k - db
        for i in range(db + 1):
            rem[off + i] -= c * b[i]
        rem.pop()
    return _trim(rem)


def _resultant_int(a: list[int], b: list[int]) -> int:
    """Resultant by the subresultant pseudo-remainder sequence."""
    ca, cb = _content(a), _content(b)
    a = [x // ca for x in a]
    b = [x // cb for x in b]
    t = ca ** (len(b) - 1) * cb ** (len(a) - 1)
    s = 1
    if len(a) < len(b):
        a, b = b, a
        if (len(a) - 1) * (len(b) - 1) % 2:
            s = -1
    if len(b) == 1:
        return s * t * b[0] ** (len(a) - 1)
    g = h = 1
    while True:
        da, db = len(a) - 1, len(b) - 1
        delta = da - db
        if da % 2 and db % 2:
            s = -s
        r = _prem(a, b)
        if not r:
            return 0
        a = b
        div = g * h**delta
        b = [x // div for x in r]
        g = a[-1]
        if delta:
            h = g**delta // h ** (delta - 1)
        if len(b) == 1:
            da = len(a) - 1
            return s * t * (b[0] ** da // h ** (da - 1))


def resultant(a: Poly, b: Poly):
    if a.is_zero() or b.is_zero():
        return Fraction(0)
    if _is_rational(a) and _is_rational(b):
        ai, sa = _to_int(a)
        bi, sb = _to_int(b)
        return Fraction(_resultant_int(ai, bi)) * sa**b.degree * sb**a.degree
    return _resultant_euclid(a, b)


def _resultant_euclid(a: Poly, b: Poly):
    """Resultant over a field via the Euclidean remainder sequence."""
    sign = 1
    acc = 1
    while True:
        da, db = a.degree, b.degree
        if db == 0:
            return sign * acc * b.lc ** da
        r = poly_divrem(a, b)[1]
        if r.is_zero():
            return 0
        if (da * db) % 2:
            sign = -sign
        acc = acc * b.lc ** (da - r.degree)
        a, b = b, r


def discriminant(f: Poly) -> Fraction:
    n = f.degree
    if n < 1:
        raise ValueError("discriminant of a constant polynomial")
    s = -1 if (n * (n - 1) // 2) % 2 else 1
    return s * resultant(f, f.derivative()) / f.lc


def primitive_integer(f: Poly) -> Poly:
    """Scale a rational polynomial to a primitive integer one, positive leading coefficient."""
    if f.is_zero():
        return f
    den = lcm(*(c.denominator for c in f.coeffs))
    ints = [int(c * den) for c in f.coeffs]
    g = 0
    for c in ints:
        g = gcd(g, c)
    if ints[-1] < 0:
        g = -g
    return Poly([c // g for c in ints])


# -- cyclotomic polynomials --------------------------------------------

def divisors(n: int) -> list[int]:
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def prime_factors(n: int) -> list[int]:
    n = abs(n)
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1 if p == 2 else 2
    if n > 1:
        out.append(n)
    return out


def euler_phi(n: int) -> int:
    result = n
    for p in prime_factors(n):
        result -= result // p
    return result


def mobius(n: int) -> int:
    ps = prime_factors(n)
    m = n
    for p in ps:
        m //= p
        if m % p == 0:
            return 0
    return -1 if len(ps) % 2 else 1


@lru_cache(maxsize=None)
def _cyclotomic_ints(n: int) -> tuple[int, ...]:
    if n < 1:
        raise ValueError("cyclotomic polynomial index must be positive")
    # Phi_n = prod over d | n of (x^d - 1)^mu(n/d); every step is a sparse integer update
    up = [d for d in divisors(n) if mobius(n // d) == 1]
    down = [d for d in divisors(n) if mobius(n // d) == -1]
    p = [1]
    for d in up:
        # multiply by x^d - 1
        q = [0] * (len(p) + d)
        for i, c in enumerate(p):
            q[i + d] += c
            q[i] -= c
        p = q
    for d in down:
        # divide exactly by x^d - 1: p = q*x^d - q, so q[i] = q[i-d] - p[i]
        q = [0] * (len(p) - d)
        for i in range(len(q)):
            q[i] = (q[i - d] if i >= d else 0) - p[i]
        p = q
    if n == 1:
        return (-1, 1)
    return tuple(p)


def cyclotomic_poly(n: int) -> Poly:
    """Phi_n, the quotient of x^n - 1 by Phi_d over the proper divisors d of n."""
    return Poly(_cyclotomic_ints(n))


# -- Sturm sequences ---------------------------------------------------

NEG_INF = float("-inf")
POS_INF = float("inf")


def sturm_sequence(f: Poly) -> list[Poly]:
    """Sturm chain; rational input is kept integral by positive rescaling."""
    if _is_rational(f):
        fi, _ = _to_int(f)
        chain = [fi, _trim([k * fi[k] for k in range(1, len(fi))])]
        while len(chain[-1]) > 1:
            a, b = chain[-2], chain[-1]
            r = _prem(a, b)
            if not r:
                break
            if b[-1] < 0 and (len(a) - len(b) + 1) % 2:
                r = [-x for x in r]
            c = _content(r)
            chain.append([-x // c for x in r])
        return [Poly(c) for c in chain]
    seq = [f, f.derivative()]
    while not seq[-1].is_zero():
        r = poly_divrem(seq[-2], seq[-1])[1]
        if r.is_zero():
            break
        seq.append(-r)
    return seq


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def _sign_at(p: Poly, point) -> int:
    if point == POS_INF:
        return _sign(p.lc)
    if point == NEG_INF:
        return _sign(p.lc) * (-1 if p.degree % 2 else 1)
    return _sign(p(point))


def _variations(seq: list[Poly], point) -> int:
    signs = [s for s in (_sign_at(p, point) for p in seq) if s != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def sturm_count(f: Poly, lo=NEG_INF, hi=POS_INF) -> int:
    """Number of distinct real roots of squarefree ``f`` in ``(lo, hi]``."""
    if f.is_zero():
        raise ValueError("zero polynomial has infinitely many roots")
    if not is_squarefree(f):
        raise ValueError("sturm_count requires a squarefree polynomial")
    if f.degree == 0:
        return 0
    if lo not in (NEG_INF, POS_INF):
        lo = as_rat(lo)
    if hi not in (NEG_INF, POS_INF):
        hi = as_rat(hi)
    seq = sturm_sequence(f)
    return _variations(seq, lo) - _variations(seq, hi)
