import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from expdef.cyclotomic import CycNum, root_of_unity, sigma0, zeta
from expdef.lattice import in_lattice_span
from expdef.poly import Poly
from expdef.rab import is_real_abelian
from expdef.skmodel import (
    TAU, CKVerdict, EDomainError, KernelMultiple, SKElement, additive_dependencies, ck_tau_involution_test,
    delta_SK, in_domain, is_free_tuple, multiplicative_dependencies, orbit_singleton, root_of_unity_exponent,
    sigma0_orbit, sigma1, sk_E,
)

from conftest import cycnums, small_rats

rats = st.fractions(min_value=-5, max_value=5, max_denominator=24)


@st.composite
def sk_elements(draw, level: int | None = None):
    n = level or draw(st.sampled_from([1, 3, 4, 5, 8, 12]))

    def coeff():
        return sum((zeta(n, draw(st.integers(0, n - 1))) * draw(small_rats) for _ in range(draw(st.integers(0, 2)))),
                   CycNum.rational(0))

    num = Poly([coeff() for _ in range(draw(st.integers(1, 3)))])
    den = Poly([coeff() for _ in range(draw(st.integers(0, 2)))] + [CycNum.rational(1)])
    if num.is_zero():
        num = Poly([CycNum.rational(draw(small_rats))])
    return SKElement(num, den)


def test_arithmetic_examples():
    assert TAU * TAU.inverse() == 1
    i = SKElement.const(zeta(4))
    assert (i * TAU + 1) + (-i * TAU) == 1
    canon = (TAU**2 - 1).inverse() * (TAU - 1)
    assert canon == (TAU + 1).inverse()
    assert canon.num == Poly([CycNum.rational(1)]) and canon.den == Poly([CycNum.rational(1)] * 2)


def test_canonical_form_has_monic_denominator():
    x = SKElement(Poly([zeta(3), zeta(4)]), Poly([CycNum.rational(2), CycNum.rational(6)]))
    assert x.den.lc == 1
    assert str(x) == "(1/6*z(4)*tau + 1/6*z(3))/(tau + 1/3)"


@given(sk_elements(), sk_elements())
def test_field_laws(a, b):
    assert a + b == b + a
    assert a * b == b * a
    assert (a - b) + b == a
    if not b.is_zero():
        assert (a / b) * b == a


def test_E_examples():
    assert sk_E(KernelMultiple(0)) == 1
    assert sk_E(KernelMultiple(1)) == 1
    assert sk_E(KernelMultiple(Fraction(1, 3))) == zeta(3)
    assert sk_E(TAU / 3) == zeta(3)
    with pytest.raises(EDomainError):
        sk_E(TAU * TAU)
    with pytest.raises(EDomainError):
        sk_E(SKElement.const(zeta(4)) * TAU)
    assert not in_domain(TAU + 1) and in_domain(TAU * Fraction(-2, 7))


@given(rats, rats)
def test_E_is_a_homomorphism(p, q):
    assert sk_E(KernelMultiple(p + q)) == sk_E(KernelMultiple(p)) * sk_E(KernelMultiple(q))


def test_sigma1_examples():
    assert sigma1(TAU) == -TAU
    assert sigma1(SKElement.const(zeta(4))) == SKElement.const(zeta(4, 3))
    x = SKElement.const(zeta(8)) * TAU**2 + Fraction(1, 2)
    assert sigma1(x) == SKElement.const(zeta(8, 7)) * TAU**2 + Fraction(1, 2)


@given(sk_elements(), sk_elements(), small_rats, rats)
def test_sigma1_is_an_E_automorphism(a, b, r, q):
    assert sigma1(sigma1(a)) == a
    assert sigma1(a + b) == sigma1(a) + sigma1(b)
    assert sigma1(a * b) == sigma1(a) * sigma1(b)
    assert sigma1(SKElement.const(r)) == r
    x = SKElement.kernel_multiple(q)
    assert sk_E(sigma1(x)) == sigma0(sk_E(x)) == sk_E(KernelMultiple(-q))


def test_delta_examples():
    assert delta_SK([]) == 0
    assert delta_SK([KernelMultiple(1)]) == 0
    assert delta_SK([KernelMultiple(Fraction(1, 2)), KernelMultiple(Fraction(1, 3))]) == 0
    assert delta_SK([KernelMultiple(0)]) == 0
    with pytest.raises(EDomainError):
        delta_SK([TAU * TAU])


def test_root_of_unity_exponent():
    assert root_of_unity_exponent(zeta(12, 8)) == (2, 3)
    assert root_of_unity_exponent(CycNum.rational(-1)) == (1, 2)
    assert root_of_unity_exponent(-zeta(3)) == (5, 6)
    with pytest.raises(ValueError):
        root_of_unity_exponent(CycNum.rational(2))


def _same_lattice(a, b):
    return all(in_lattice_span(a, v) for v in b) and all(in_lattice_span(b, v) for v in a)


def test_multiplicative_examples():
    assert _same_lattice(multiplicative_dependencies([zeta(4), zeta(4)]), [[1, -1], [4, 0]])
    assert _same_lattice(multiplicative_dependencies([zeta(2), zeta(3)]), [[2, 0], [0, 3]])
    assert multiplicative_dependencies([CycNum.rational(1)]) == [[1]]


def test_additive_examples():
    half, third = KernelMultiple(Fraction(1, 2)), KernelMultiple(Fraction(1, 3))
    assert additive_dependencies([half, third]) == [[2, -3]]
    assert additive_dependencies([KernelMultiple(1)]) == []
    assert additive_dependencies([KernelMultiple(0)]) == [[1]]


def test_freeness_examples():
    r = is_free_tuple([KernelMultiple(Fraction(1, 2))])
    assert not r.free and r.certificate == (2,)
    assert is_free_tuple([]).free
    r = is_free_tuple([KernelMultiple(Fraction(1, 7)), KernelMultiple(Fraction(2, 9))])
    assert not r.free
    m = r.certificate
    assert any(m) and (m[0] * Fraction(1, 7) + m[1] * Fraction(2, 9)).denominator == 1


@given(st.lists(rats, min_size=1, max_size=4))
def test_freeness_certificates_are_relations(qs):
    r = is_free_tuple([KernelMultiple(q) for q in qs])
    assert not r.free
    assert any(r.certificate)
    assert sum(m * q for m, q in zip(r.certificate, qs)).denominator == 1


def test_ck_dichotomy():
    assert ck_tau_involution_test(zeta(4)).verdict is CKVerdict.INVOLUTION_EXTENDS
    assert ck_tau_involution_test(CycNum.rational(1)).verdict is CKVerdict.ONLY_TRIVIAL
    assert ck_tau_involution_test(zeta(3)).verdict is CKVerdict.ONLY_TRIVIAL
    assert ck_tau_involution_test(zeta(8) - zeta(8, 7)).verdict is CKVerdict.INVOLUTION_EXTENDS
    with pytest.raises(ValueError):
        ck_tau_involution_test(CycNum.rational(0))
    with pytest.raises(TypeError):
        ck_tau_involution_test(1.5)


def test_orbit_examples():
    assert not orbit_singleton(zeta(4))
    assert orbit_singleton(zeta(8) + zeta(8, 7))
    assert orbit_singleton(CycNum.rational(5))
    assert sigma0_orbit(zeta(4)) == [zeta(4), zeta(4, 3)]


@given(cycnums())
def test_orbit_criterion(a):
    assert orbit_singleton(a) == is_real_abelian(a)


def test_json_round_trip():
    x = (SKElement.const(zeta(5)) * TAU + 2) / (TAU**2 + SKElement.const(zeta(3)))
    assert SKElement.from_json(x.to_json()) == x
    assert str(x) == "(z(5)*tau + 2)/(tau^2 + z(3))"
