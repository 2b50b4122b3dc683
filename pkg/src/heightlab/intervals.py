"""Helpers around mpmath's interval context.

Certified reals throughout the package are ``mpmath.iv`` intervals with
outward rounding.  Exact rationals (``fractions.Fraction``) are accepted
wherever a certified real is, and are only converted at the last moment.
"""

from __future__ import annotations

from contextlib import contextmanager
from fractions import Fraction

import mpmath
from mpmath import iv, mp
from mpmath.libmp import from_man_exp, mpf_add, mpf_sub, round_ceiling

NEG_INF = iv.mpf("-inf")


def lo(x) -> mpmath.mpf:
    """Lower endpoint of an interval as a plain mpf."""
    return mp.make_mpf(x._mpi_[0])


def hi(x) -> mpmath.mpf:
    """Upper endpoint of an interval as a plain mpf."""
    return mp.make_mpf(x._mpi_[1])


def interval(a, b=None):
    """Build an interval from endpoints (mpf, int or string)."""
    if b is None:
        b = a
    return iv.mpf([a, b])


def from_fraction(q: Fraction):
    """Enclose an exact rational.  Exact when the denominator is a power of two."""
    q = Fraction(q)
    return iv.mpf(q.numerator) / q.denominator


def dyadic(man: int, exp: int):
    """The exact interval [man * 2**exp, man * 2**exp]."""
    v = mp.make_mpf(from_man_exp(man, exp))
    return iv.mpf([v, v])


def as_interval(x):
    """Coerce ints, Fractions and intervals to an interval."""
    if isinstance(x, Fraction):
        return from_fraction(x)
    if isinstance(x, int):
        return iv.mpf(x)
    return x


def is_neg_inf(x) -> bool:
    return not isinstance(x, (int, Fraction)) and hi(as_interval(x)) == mpmath.mpf("-inf")


def mid_rad(x, prec: int):
    """Midpoint and an upper bound on the half-width of ``x``.

    The midpoint is rounded to ``prec`` bits; the radius is rounded up so
    that [mid - rad, mid + rad] always contains ``x``.
    """
    a, b = x._mpi_
    with mp.workprec(prec):
        m = mp.make_mpf(mpf_add(a, b, prec)) / 2
    m_raw = m._mpf_
    r1 = mpf_sub(b, m_raw, 64, round_ceiling)
    r2 = mpf_sub(m_raw, a, 64, round_ceiling)
    r = max(mp.make_mpf(r1), mp.make_mpf(r2), mpmath.mpf(0))
    return m, r


def widen(x, r):
    """Return x + [-r, r]."""
    return x + iv.mpf([-r, r])


def clip_below(x, floor=0):
    """Intersect the lower side with ``floor`` (used for quantities known to be >= floor)."""
    a = max(lo(x), mpmath.mpf(floor))
    b = max(hi(x), mpmath.mpf(floor))
    return iv.mpf([a, b])


def fmt(x, digits: int = 17) -> str:
    """Decimal string of an mpf (nearest rounding)."""
    if mpmath.isinf(x):
        return "-inf" if x < 0 else "inf"
    return mpmath.nstr(x, digits, min_fixed=-4, max_fixed=digits)


def fmt_up(x, digits: int = 6) -> str:
    """Decimal string that is >= ``x`` (for radii)."""
    x = mpmath.mpf(x)
    if x == 0:
        return "0"
    return mpmath.nstr(x * (1 + mpmath.mpf(10) ** (1 - digits)), digits)


@contextmanager
def ivprec(bits: int):
    """Temporarily set the working precision of the interval context."""
    saved = iv.prec
    iv.prec = bits
    try:
        yield
    finally:
        iv.prec = saved
