import itertools
from fractions import Fraction

from hypothesis import given
from hypothesis import strategies as st

from expdef.lattice import hnf, in_lattice_span, integer_kernel, primitive, rational_kernel

int_rows = st.lists(st.lists(st.integers(-6, 6), min_size=3, max_size=3), min_size=1, max_size=4)


def test_hnf_shape():
    assert hnf([[4, 6], [6, 9]]) == [[2, 3]]
    assert hnf([[2, 0], [0, 3], [0, 0]]) == [[2, 0], [0, 3]]
    assert hnf([[0, 0]]) == []
    assert hnf([[-1, 3], [0, 4]]) == [[1, 1], [0, 4]]


@given(int_rows)
def test_hnf_spans_the_same_lattice(rows):
    h = hnf(rows)
    for r in rows:
        assert in_lattice_span(h, r)
    for r in h:
        assert in_lattice_span(rows, r)
    # echelon form with positive pivots and reduced entries above them
    cols = [next(j for j, x in enumerate(r) if x) for r in h]
    assert cols == sorted(cols) and len(set(cols)) == len(cols)
    for i, (r, c) in enumerate(zip(h, cols)):
        assert r[c] > 0
        for above in h[:i]:
            assert 0 <= above[c] < r[c]


@given(int_rows)
def test_integer_kernel(rows):
    basis = integer_kernel(rows)
    for v in basis:
        assert all(sum(a * b for a, b in zip(r, v)) == 0 for r in rows)
    for v in itertools.product(range(-3, 4), repeat=3):
        if all(sum(a * b for a, b in zip(r, v)) == 0 for r in rows):
            assert in_lattice_span(basis, v)


def test_rational_kernel_examples():
    assert rational_kernel([[Fraction(1, 2), Fraction(1, 3)]], 2) == [[2, -3]]
    assert rational_kernel([[Fraction(0)]], 1) == [[1]]
    assert rational_kernel([[Fraction(1)]], 1) == []


def test_primitive():
    assert primitive([Fraction(-1, 2), Fraction(1, 3)]) == [3, -2]
    assert primitive([0, 4, 6]) == [0, 2, 3]
