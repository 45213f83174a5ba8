from fractions import Fraction
from math import isqrt

import pytest
from hypothesis import given
from hypothesis import strategies as st

from expdef.poly import (
    NEG_INF, POS_INF, Poly, cyclotomic_poly, discriminant, divisors, euler_phi, is_squarefree,
    poly_divrem, poly_gcd, poly_xgcd, resultant, squarefree_part, sturm_count,
)

from conftest import small_rats

X = Poly.x()
polys = st.lists(small_rats, max_size=6).map(Poly)


def P(*cs):
    return Poly(cs)


def test_difference_of_squares():
    assert (X + 1) * (X - 1) == P(-1, 0, 1)


def test_divrem_examples():
    assert poly_divrem(X**3, X**2) == (X, Poly())
    with pytest.raises(ZeroDivisionError):
        poly_divrem(X, Poly())


def test_gcd_is_monic():
    assert poly_gcd(X**2 - 1, X**2 - 2 * X + 1) == X - 1
    assert poly_gcd(2 * X + 4, X**2 - 4) == X + 2


def test_zero_polynomial_sentinel():
    assert Poly().degree == -1
    assert P(0, 0).is_zero()


@given(polys, polys, polys)
def test_ring_laws(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + b == b + a


@given(polys, polys.filter(lambda p: not p.is_zero()))
def test_divrem_identity(a, b):
    q, r = poly_divrem(a, b)
    assert q * b + r == a
    assert r.degree < b.degree


@given(polys, polys)
def test_xgcd_bezout(a, b):
    g, s, t = poly_xgcd(a, b)
    assert s * a + t * b == g
    if not g.is_zero():
        assert poly_divrem(a, g)[1].is_zero() and poly_divrem(b, g)[1].is_zero()


@pytest.mark.parametrize("n, coeffs", [
    (1, [-1, 1]),
    (2, [1, 1]),
    (4, [1, 0, 1]),
    (12, [1, 0, -1, 0, 1]),
])
def test_cyclotomic_examples(n, coeffs):
    assert cyclotomic_poly(n) == Poly(coeffs)


def test_cyclotomic_product_and_degree():
    for n in range(1, 101):
        f = cyclotomic_poly(n)
        assert f.degree == euler_phi(n)
        assert all(c.denominator == 1 for c in f.coeffs)
        prod = Poly([1])
        for d in divisors(n):
            prod = prod * cyclotomic_poly(d)
        assert prod == X**n - 1


@pytest.mark.parametrize("f, count", [(X**2 - 2, 2), (X**2 + 1, 0), (X**3 - 2, 1)])
def test_sturm_examples(f, count):
    assert sturm_count(f, NEG_INF, POS_INF) == count


def test_sturm_half_open_interval():
    f = (X - 1) * (X - 2) * (X + 3)
    assert sturm_count(f, 1, 2) == 1
    assert sturm_count(f, Fraction(1, 2), 2) == 2
    assert sturm_count(f, -3, 0) == 0
    assert sturm_count(f, NEG_INF, 0) == 1


def test_sturm_rejects_repeated_roots():
    with pytest.raises(ValueError):
        sturm_count((X - 1) ** 2)


def _is_square(q: Fraction) -> bool:
    return q >= 0 and all(isqrt(v) ** 2 == v for v in (q.numerator, q.denominator))


def _constructed_real_roots(factors) -> int:
    # oracle: distinct real roots read off the factors, compared exactly;
    # an irrational conjugate pair (p +- sqrt(D))/2 is keyed by (p, D)
    rational: set[Fraction] = set()
    irrational: set[tuple[Fraction, Fraction]] = set()
    for quadratic, a, b in factors:
        if not quadratic:
            rational.add(Fraction(a, b))
            continue
        p, D = Fraction(a, 2), Fraction(a * a, 4) - b * b + 4
        if D < 0:
            continue
        if _is_square(D):
            r = Fraction(isqrt(D.numerator), isqrt(D.denominator))
            rational |= {(p + r) / 2, (p - r) / 2}
        else:
            irrational.add((p, D))
    return len(rational) + 2 * len(irrational)


@given(st.lists(st.tuples(st.booleans(), st.integers(-6, 6), st.integers(1, 4)), min_size=1, max_size=4,
                unique_by=lambda t: (t[0], t[1], t[2] if t[0] else 0)))
def test_sturm_counts_constructed_real_roots(factors):
    f = Poly([1])
    for quadratic, a, b in factors:
        if quadratic:
            # roots (a/2 +- sqrt(a^2/4 - b^2 + 4)) / 2
            f = f * (X**2 - Fraction(a, 2) * X + Fraction(b * b, 4) - 1)
        else:
            f = f * (X - Fraction(a, b))
    if not is_squarefree(f):
        f = squarefree_part(f)
    assert sturm_count(f) == _constructed_real_roots(factors)


def test_sturm_separates_close_roots():
    # roots -1/4 and (5 - sqrt(37))/4 ~ -0.27 are 0.02 apart
    f = (X - 1) * (X + Fraction(1, 4)) * (X - 3) * (X**2 - Fraction(5, 2) * X - Fraction(3, 4))
    assert sturm_count(f) == 5
    assert sturm_count(f, Fraction(-3, 10), Fraction(-1, 4)) == 2


def _sylvester_det(a: Poly, b: Poly) -> Fraction:
    m, n = a.degree, b.degree
    size = m + n
    rows = []
    for i in range(n):
        rows.append([Fraction(0)] * i + list(reversed(a.coeffs)) + [Fraction(0)] * (size - m - 1 - i))
    for i in range(m):
        rows.append([Fraction(0)] * i + list(reversed(b.coeffs)) + [Fraction(0)] * (size - n - 1 - i))
    det = Fraction(1)
    for col in range(size):
        piv = next((r for r in range(col, size) if rows[r][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            rows[col], rows[piv] = rows[piv], rows[col]
            det = -det
        det *= rows[col][col]
        for r in range(col + 1, size):
            f = rows[r][col] / rows[col][col]
            rows[r] = [x - f * y for x, y in zip(rows[r], rows[col])]
    return det


nonconst = st.lists(small_rats, min_size=2, max_size=5).map(Poly).filter(lambda p: p.degree >= 1)


@given(nonconst, nonconst)
def test_resultant_matches_sylvester(a, b):
    assert resultant(a, b) == _sylvester_det(a, b)


def test_discriminant_examples():
    assert discriminant(X**2 - 2) == 8
    assert discriminant(X**2 + X + 1) == -3
    assert discriminant((X - 1) ** 2) == 0


def test_json_round_trip():
    f = P(Fraction(-1, 2), 0, 3)
    assert f.to_json() == ["-1/2", "0", "3"]
    assert Poly.from_json(f.to_json()) == f
