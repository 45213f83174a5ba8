"""Helpers around mpmath's interval context.

``mpmath.iv`` keeps its working precision in global state, so every
precision change goes through :func:`iv_precision`, which serializes
access with a lock.
"""

from __future__ import annotations

import threading
from contextlib import contextmanager
from fractions import Fraction

from mpmath import iv, mp, mpf

_LOCK = threading.RLock()


@contextmanager
def iv_precision(bits: int):
    with _LOCK:
        saved = iv.prec
        iv.prec = bits
        try:
            yield iv
        finally:
            iv.prec = saved


def iv_rational(q: Fraction):
    return iv.mpf(q.numerator) / q.denominator


def radius(z) -> mpf:
    """Half of the larger side of a complex interval box."""
    return max(z.real.delta, z.imag.delta) / 2


def magnitude_upper(z) -> mpf:
    """Upper bound on |w| over the box."""
    re = max(abs(z.real.a), abs(z.real.b))
    im = max(abs(z.imag.a), abs(z.imag.b))
    # re + im bounds the modulus without a rounded square root
    return (mp.mpf(re) + mp.mpf(im)) * _ROUND_UP


_ROUND_UP = mp.mpf(1) + mp.mpf(2) ** -40
_ROUND_DOWN = mp.mpf(1) - mp.mpf(2) ** -40


def contains_zero(z) -> bool:
    return z.real.a <= 0 <= z.real.b and z.imag.a <= 0 <= z.imag.b


def midpoint(z) -> complex:
    return mp.mpc(z.real.mid, z.imag.mid)


def magnitude_lower(z) -> mpf:
    """Lower bound on |w| over the box."""
    def gap(x):
        if x.a <= 0 <= x.b:
            return mp.mpf(0)
        return mp.mpf(min(abs(x.a), abs(x.b))) * _ROUND_DOWN

    return max(gap(z.real), gap(z.imag))


def endpoints(x) -> tuple[mpf, mpf]:
    """Exact endpoints of a real interval, independent of the current precision."""
    lo, hi = x._mpi_
    return mp.make_mpf(lo), mp.make_mpf(hi)


def encloses(z, w) -> bool:
    """Does the complex box ``z`` contain the point ``w``?"""
    w = mp.mpc(w)
    (ra, rb), (ia, ib) = endpoints(z.real), endpoints(z.imag)
    return ra <= w.real <= rb and ia <= w.imag <= ib
