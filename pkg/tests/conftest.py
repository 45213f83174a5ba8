from fractions import Fraction

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from expdef.cyclotomic import CycNum, zeta

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

small_rats = st.builds(Fraction, st.integers(-10, 10), st.integers(1, 10))


def _at_level(draw, n: int, max_terms: int) -> CycNum:
    total = CycNum.rational(0)
    for _ in range(draw(st.integers(1, max_terms))):
        total = total + zeta(n, draw(st.integers(0, n - 1))) * CycNum.rational(draw(small_rats))
    return total


@st.composite
def cycnums(draw, max_level: int = 60, max_terms: int = 4):
    return _at_level(draw, draw(st.integers(1, max_level)), max_terms)


@st.composite
def cyc_tuples(draw, size: int = 2, max_level: int = 60, max_terms: int = 4):
    """Elements sharing one ambient level n <= max_level."""
    n = draw(st.integers(1, max_level))
    return tuple(_at_level(draw, n, max_terms) for _ in range(size))
