"""Certified isolation of all complex roots of an integer polynomial.

Roots are approximated with Aberth-Ehrlich iteration in mpmath (seeded by
numpy's companion-matrix roots when those are finite), polished by Newton
steps, then certified in exact integer arithmetic:

Centers are rounded to Gaussian dyadics z_i = w_i / 2^E.  With the
Weierstrass corrections W_i = p(z_i) / (a_n prod_{j != i} (z_i - z_j)),
every root lies in the union of the disks D(z_i - W_i, (n-1)|W_i|), and a
connected component made of k of those disks holds exactly k roots.  Each of
these disks sits inside D(z_i, n|W_i|), so if the latter are pairwise
disjoint then each holds exactly one root.  All of |W_i|, the radii and the
disjointness test are evaluated with integers, so nothing rests on
floating-point rounding.
"""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, cmp_to_key

import mpmath
from mpmath import iv, mp
from mpmath.libmp import from_man_exp

from .errors import DomainError, PrecisionExhausted
from .intervals import ivprec
from .poly import IntPoly, discriminant

START_BITS = 128
MAX_BITS = 8192
RADIUS_GUARD_BITS = 64


def _exact_mpf(man: int, exp: int) -> mpmath.mpf:
    return mp.make_mpf(from_man_exp(man, exp))


@dataclass(frozen=True)
class Disk:
    """Closed disk with center (re + i*im) * 2^exp and radius rad * 2^rad_exp, all exact."""

    re: int
    im: int
    exp: int
    rad: int
    rad_exp: int

    @property
    def center(self) -> mpmath.mpc:
        bits = max(abs(self.re).bit_length(), abs(self.im).bit_length(), 1) + 8
        with mp.workprec(bits):
            return mp.mpc(_exact_mpf(self.re, self.exp), _exact_mpf(self.im, self.exp))

    @property
    def radius(self) -> mpmath.mpf:
        return _exact_mpf(self.rad, self.rad_exp)

    @property
    def is_real(self) -> bool:
        return self.im == 0

    def abs_interval(self, prec: int = 256):
        """Interval containing |beta| for the root beta inside this disk."""
        q = self.re * self.re + self.im * self.im
        with ivprec(prec):
            c = iv.sqrt(iv.mpf(q)) * iv.mpf(_exact_mpf(1, self.exp))
            r = iv.mpf(self.radius)
            lo = max(mpmath.mpf(0), mp.make_mpf((c - r)._mpi_[0]))
            hi = mp.make_mpf((c + r)._mpi_[1])
            return iv.mpf([lo, hi])

    def contains_zero(self) -> bool:
        # |c|^2 <= r^2 with c = w 2^exp, r = s 2^rad_exp
        q = self.re * self.re + self.im * self.im
        d = self.rad_exp - self.exp
        s2 = self.rad * self.rad
        if d >= 0:
            return q <= s2 << (2 * d)
        return q << (-2 * d) <= s2

    def contains_disk(self, other: Disk) -> bool:
        """Whether ``other`` lies inside this disk: |c' - c| + r' <= r, decided exactly."""
        e = min(self.exp, other.exp, self.rad_exp, other.rad_exp)
        dre = (other.re << (other.exp - e)) - (self.re << (self.exp - e))
        dim = (other.im << (other.exp - e)) - (self.im << (self.exp - e))
        room = (self.rad << (self.rad_exp - e)) - (other.rad << (other.rad_exp - e))
        return room >= 0 and dre * dre + dim * dim <= room * room


@dataclass(frozen=True)
class ConjugateSet:
    """Certified enclosures of all roots of ``source``, in canonical order.

    Centers share the scale 2^-E (``center_exp == -E``), which lets orbit
    sums of conjugates be formed exactly in integers.
    """

    enclosures: tuple[Disk, ...]
    precision_bits: int
    source: IntPoly

    @property
    def n(self) -> int:
        return len(self.enclosures)

    @cached_property
    def center_exp(self) -> int:
        return min(d.exp for d in self.enclosures)

    @cached_property
    def fixed_centers(self) -> tuple[tuple[int, int], ...]:
        """Centers as Gaussian integers at the common scale 2^center_exp."""
        e = self.center_exp
        return tuple((d.re << (d.exp - e), d.im << (d.exp - e)) for d in self.enclosures)

    @property
    def centers(self) -> list[mpmath.mpc]:
        return [d.center for d in self.enclosures]

    @property
    def radii(self) -> list[mpmath.mpf]:
        return [d.radius for d in self.enclosures]

    @property
    def max_radius(self) -> mpmath.mpf:
        return max(self.radii)

    def to_json(self) -> dict:
        digits = int(self.precision_bits * math.log10(2)) + 6
        roots = []
        for d in self.enclosures:
            with mp.workprec(self.precision_bits + 64):
                c = d.center
                # decimal rounding moves the center by at most ~|c| 10^(1-digits)
                slack = (abs(c) + 1) * mpmath.mpf(10) ** (1 - digits)
                r = d.radius + 2 * slack
            roots.append(
                {
                    "re": mpmath.nstr(c.real, digits, min_fixed=-mpmath.inf, max_fixed=mpmath.inf),
                    "im": mpmath.nstr(c.imag, digits, min_fixed=-mpmath.inf, max_fixed=mpmath.inf),
                    "radius": mpmath.nstr(r * (1 + mpmath.mpf(2) ** -20), 12),
                }
            )
        return {
            "polynomial": [str(c) for c in self.source.coeffs],
            "precision_bits": self.precision_bits,
            "roots": roots,
        }

    @classmethod
    def from_json(cls, data: dict | str) -> ConjugateSet:
        """Rebuild from ``to_json`` output.  Centers are rounded to dyadics and the
        radii inflated to keep every disk covering the serialized one."""
        if isinstance(data, str):
            data = json.loads(data)
        prec = int(data["precision_bits"])
        e = prec + RADIUS_GUARD_BITS
        disks = []
        for root in data["roots"]:
            re = Fraction(root["re"])
            im = Fraction(root["im"])
            rad = Fraction(root["radius"])
            wre = round(re * 2**e)
            wim = round(im * 2**e)
            # rounding each coordinate moves the center by at most 2^-e / sqrt(2) < 2^-e
            s = math.ceil((rad + Fraction(1, 2**e)) * 2**e)
            disks.append(Disk(wre, wim, -e, s, -e))
        return cls(tuple(disks), prec, IntPoly([int(c) for c in data["polynomial"]]))


# --- floating approximation ---------------------------------------------


def _eval_with_derivative(coeffs, z):
    p = coeffs[-1]
    dp = mp.mpc(0)
    for c in reversed(coeffs[:-1]):
        dp = dp * z + p
        p = p * z + c
    return p, dp


def _initial_guesses(p: IntPoly) -> list[complex]:
    n = p.degree
    try:
        import numpy as np

        guesses = np.roots([float(c) for c in reversed(p.coeffs)])
        if len(guesses) == n and np.all(np.isfinite(guesses)):
            out = [complex(g) for g in guesses]
            # separate exact duplicates so the Aberth sums stay finite
            for i in range(n):
                for j in range(i):
                    if out[i] == out[j]:
                        out[i] += 1e-8 * (1 + abs(out[i])) * cmath.exp(1j * (i + 0.5))
            return out
    except (OverflowError, ValueError):
        pass
    bound = 1 + max(abs(Fraction(c, p.leading)) for c in p.coeffs[:-1])
    radius = float(min(bound, Fraction(10**300)))
    return [radius / 2 * cmath.exp(2j * math.pi * k / n + 0.4j) for k in range(n)]


def _aberth(p: IntPoly, start, prec: int, max_iter: int = 400) -> list[mpmath.mpc]:
    n = p.degree
    with mp.workprec(prec + 16):
        coeffs = [mp.mpf(c) for c in p.coeffs]
        z = [mp.mpc(s) for s in start]
        tol = mp.mpf(2) ** (-prec + 8)
        for _ in range(max_iter):
            worst = mp.mpf(0)
            for i in range(n):
                pv, dpv = _eval_with_derivative(coeffs, z[i])
                if pv == 0:
                    continue
                ratio = pv / dpv if dpv != 0 else mp.mpc(tol)
                acc = mp.mpc(0)
                for j in range(n):
                    if j != i:
                        diff = z[i] - z[j]
                        if diff != 0:
                            acc += 1 / diff
                denom = 1 - ratio * acc
                step = ratio / denom if denom != 0 else ratio
                z[i] -= step
                worst = max(worst, abs(step) / max(1, abs(z[i])))
            if worst < tol:
                break
        # Newton polish
        for _ in range(2):
            for i in range(n):
                pv, dpv = _eval_with_derivative(coeffs, z[i])
                if dpv != 0:
                    z[i] -= pv / dpv
        return z


def _symmetrize(z: list[mpmath.mpc], prec: int) -> list[mpmath.mpc]:
    """Snap near-real roots onto the real axis and make conjugate pairs exact."""
    with mp.workprec(prec + 16):
        cut = mp.mpf(2) ** (-(prec // 2))
        out = []
        for c in z:
            if abs(c.imag) <= cut * max(1, abs(c)):
                c = mp.mpc(c.real, 0)
            out.append(c)
        used = set()
        for i, c in enumerate(out):
            if c.imag <= 0 or i in used:
                continue
            cands = [j for j, d in enumerate(out) if d.imag < 0 and j not in used]
            if not cands:
                continue
            j = min(cands, key=lambda j: abs(out[j] - mp.conj(c)))
            used.add(j)
            used.add(i)
            out[j] = mp.conj(c)
        return out


# --- exact certification --------------------------------------------------


def _gmul(a, b):
    return (a[0] * b[0] - a[1] * b[1], a[0] * b[1] + a[1] * b[0])


def _ceil_sqrt_ratio(num: int, den: int) -> int:
    """Smallest integer s with s >= sqrt(num / den)."""
    t = -(-num // den)
    s = math.isqrt(t)
    return s if s * s >= t else s + 1


def _certify(p: IntPoly, z: list[mpmath.mpc], prec: int, target_bits: int):
    """Return certified disks or None when this precision is not enough."""
    n = p.degree
    e = prec
    f = e + RADIUS_GUARD_BITS
    scale = 2**e
    with mp.workprec(prec + 16):
        w = [(int(mp.nint(c.real * scale)), int(mp.nint(c.imag * scale))) for c in z]
    if len(set(w)) < n:
        return None
    an = p.leading
    # P_i = 2^(nE) p(z_i) by homogeneous Horner
    pows = [1] * (n + 1)
    for k in range(1, n + 1):
        pows[k] = pows[k - 1] * scale
    s = []
    for i in range(n):
        acc = (p.coeffs[n], 0)
        for k in range(n - 1, -1, -1):
            acc = _gmul(acc, w[i])
            acc = (acc[0] + p.coeffs[k] * pows[n - k], acc[1])
        d = (1, 0)
        for j in range(n):
            if j != i:
                d = _gmul(d, (w[i][0] - w[j][0], w[i][1] - w[j][1]))
        p2 = acc[0] ** 2 + acc[1] ** 2
        d2 = d[0] ** 2 + d[1] ** 2
        # (n |W_i| 2^F)^2 = n^2 |P_i|^2 4^(F-E) / (a_n^2 |D_i|^2)
        s.append(_ceil_sqrt_ratio(n * n * p2 << (2 * (f - e)), an * an * d2))
    for i in range(n):
        q = w[i][0] ** 2 + w[i][1] ** 2
        # s_i 2^-F <= 2^-target max(1, |z_i|)
        if (s[i] * s[i] << (2 * target_bits + 2 * e)) > (max(1 << (2 * e), q) << (2 * f)):
            return None
        for j in range(i):
            dist2 = (w[i][0] - w[j][0]) ** 2 + (w[i][1] - w[j][1]) ** 2
            if dist2 << (2 * (f - e)) <= (s[i] + s[j]) ** 2:
                return None
    return [Disk(w[i][0], w[i][1], -e, s[i], -f) for i in range(n)]


def _common(vals_exps):
    e = min(x for _, x in vals_exps)
    return [v << (x - e) for v, x in vals_exps]


def _canonical_order(disks: list[Disk]) -> list[Disk]:
    """Sort by (real part, imaginary part); real parts count as equal when the
    disks cannot separate them, and remaining ties go to the smaller radius."""

    def cmp(a: Disk, b: Disk) -> int:
        ra, rb, ia, ib, sa, sb = _common(
            [(a.re, a.exp), (b.re, b.exp), (a.im, a.exp), (b.im, b.exp), (a.rad, a.rad_exp), (b.rad, b.rad_exp)]
        )
        if abs(ra - rb) > sa + sb:
            return -1 if ra < rb else 1
        if ia != ib:
            return -1 if ia < ib else 1
        return (sa > sb) - (sa < sb)

    return sorted(disks, key=cmp_to_key(cmp))


def _check_input(p: IntPoly):
    if p.is_zero:
        raise DomainError("cannot isolate roots of the zero polynomial")
    if p.degree < 1:
        raise DomainError("polynomial must have degree >= 1")
    if p.degree >= 2 and discriminant(p) == 0:
        raise DomainError(
            "polynomial is not squarefree: it shares a factor with its derivative "
            "(repeated root), so roots cannot be isolated"
        )


def _ladder(first: int):
    bits = first
    while bits <= MAX_BITS:
        yield bits
        bits *= 2


def find_roots(p: IntPoly, target_bits: int = 60) -> ConjugateSet:
    """Certified disks around every root of the squarefree polynomial p.

    Radii satisfy r_i <= 2^-target_bits * max(1, |center_i|).  Working
    precision starts at 128 bits and doubles (levels that cannot reach the
    target are skipped) up to 8192, after which PrecisionExhausted is raised.
    """
    _check_input(p)
    first = START_BITS
    while first < target_bits + 32:
        first *= 2
    start = _initial_guesses(p)
    for bits in _ladder(first):
        z = _aberth(p, start, bits)
        z = _symmetrize(z, bits)
        disks = _certify(p, z, bits, target_bits)
        if disks is not None:
            return ConjugateSet(tuple(_canonical_order(disks)), bits, p)
        start = z
    raise PrecisionExhausted(
        f"root certification failed up to {MAX_BITS} bits (target {target_bits} bits)", MAX_BITS
    )


def refine(cs: ConjugateSet, extra_bits: int) -> ConjugateSet:
    """Shrink every radius by at least 2^extra_bits, keeping root indices.

    Each new disk is required to lie inside the old one, which pins the
    index of every root.  With extra_bits <= 0 the input is returned.
    """
    if extra_bits <= 0:
        return cs
    p = cs.source
    old = cs.enclosures
    first = max(2 * cs.precision_bits, cs.precision_bits + extra_bits + 64)
    start = [d.center for d in old]
    for bits in _ladder(first):
        z = _aberth(p, start, bits)
        z = _symmetrize(z, bits)
        disks = _certify(p, z, bits, 0)
        if disks is not None and all(
            o.contains_disk(d) and _shrunk(d, o, extra_bits) for d, o in zip(disks, old)
        ):
            return ConjugateSet(tuple(disks), bits, p)
        start = z
    raise PrecisionExhausted(f"refinement by {extra_bits} bits failed below {MAX_BITS} bits", MAX_BITS)


def _shrunk(new: Disk, old: Disk, extra_bits: int) -> bool:
    # new.rad 2^new.rad_exp <= old.rad 2^(old.rad_exp - extra)
    e = min(new.rad_exp, old.rad_exp - extra_bits)
    return new.rad << (new.rad_exp - e) <= old.rad << (old.rad_exp - extra_bits - e)
