"""Mahler measures and Weil heights of beta and of combinations of its conjugates.

For alpha built from the conjugates beta_1..beta_n of beta and a Galois
group G acting on their indices, the conjugates of alpha are the orbit
values alpha_sigma (sigma in G), each repeated |Stab(alpha)| times.  So

    h(alpha) = (1/|G|) * sum_{sigma in G} log max(1, |alpha_sigma|)

whether or not alpha generates, and nothing of degree |G| is ever expanded.

Orbit sums are formed exactly in integers from the dyadic disk centers; the
error from the disk radii is then bounded once for the whole orbit, using
that each index sigma(j) runs uniformly over 1..n when sigma runs over a
transitive group.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import mpmath
from mpmath import iv, mp
from mpmath.libmp import from_int, from_man_exp, mpf_log, mpf_mul, round_ceiling, round_floor

from .errors import DomainError, PrecisionExhausted
from .intervals import as_interval, clip_below, fmt, fmt_up, hi, ivprec, lo, mid_rad
from .perms import GroupTag, group_order, group_tuples, stabilizer_of_vector
from .poly import IntPoly, norm_of_root
from .roots import ConjugateSet, refine
from .snfun import CenteredVector

FIXED_POINT_GUARD = 32


@dataclass(frozen=True)
class HeightValue:
    """A certified real: the true value lies in [value - error_radius, value + error_radius]."""

    value: mpmath.mpf
    error_radius: mpmath.mpf
    precision_bits: int

    @classmethod
    def from_interval(cls, x, precision_bits: int) -> HeightValue:
        m, r = mid_rad(as_interval(x), precision_bits)
        return cls(m, r, precision_bits)

    @property
    def interval(self):
        with ivprec(self.precision_bits + 16):
            return iv.mpf([self.value, self.value]) + iv.mpf([-self.error_radius, self.error_radius])

    @property
    def lower(self) -> mpmath.mpf:
        return lo(self.interval)

    @property
    def upper(self) -> mpmath.mpf:
        return hi(self.interval)

    def to_json(self) -> dict:
        return {
            "value": fmt(self.value, 30),
            "error_radius": fmt_up(self.error_radius),
            "precision_bits": self.precision_bits,
        }


def _height(x, prec: int) -> HeightValue:
    """Package a quantity known to be >= 0 (heights, log-Mahler measures)."""
    return HeightValue.from_interval(clip_below(x), prec)


def _work_bits(cs: ConjugateSet) -> int:
    return cs.precision_bits + FIXED_POINT_GUARD


def _log_ints(q: int, prec: int):
    """Interval enclosing log(q) for an integer q > 0."""
    x = from_int(q)
    return iv.mpf([mp.make_mpf(mpf_log(x, prec, round_floor)), mp.make_mpf(mpf_log(x, prec, round_ceiling))])


def _log_product(qs, prec: int):
    """Interval enclosing sum(log q) for positive integers q.

    Multiplies with directed rounding (one product rounded down, one up)
    and takes two logarithms at the end instead of one per term.
    """
    low = high = from_int(1)
    for q in qs:
        x = from_int(q)
        low = mpf_mul(low, x, prec, round_floor)
        high = mpf_mul(high, x, prec, round_ceiling)
    return iv.mpf([mp.make_mpf(mpf_log(low, prec, round_floor)), mp.make_mpf(mpf_log(high, prec, round_ceiling))])


def _check_vector(cs: ConjugateSet, a: Sequence[int]):
    if len(a) != cs.n:
        raise DomainError(f"exponent vector has length {len(a)}, polynomial has degree {cs.n}")


def _with_tolerance(compute, cs: ConjugateSet, tol):
    """Run compute(cs); if the error radius exceeds tol, refine once and retry."""
    result = compute(cs)
    if tol is None or result.error_radius <= tol:
        return result
    finer = refine(cs, max(cs.precision_bits, int(-mpmath.log(tol, 2)) + 32))
    result = compute(finer)
    if result.error_radius > tol:
        raise PrecisionExhausted(
            f"error radius {fmt_up(result.error_radius)} still above tolerance {tol} "
            f"after refining to {finer.precision_bits} bits",
            finer.precision_bits,
        )
    return result


# --- single algebraic number --------------------------------------------


def mahler_from_poly(p: IntPoly, cs: ConjugateSet, tol=None) -> HeightValue:
    """log M(p) = log|a_n| + sum log max(1, |beta_i|), certified.

    Disks straddling the unit circle contribute [0, log(|c| + r)].
    """
    if cs.source != p:
        raise DomainError("conjugate set was not computed from this polynomial")

    def compute(cs):
        prec = _work_bits(cs)
        with ivprec(prec):
            total = _log_ints(abs(p.leading), prec)
            for d in cs.enclosures:
                m = d.abs_interval(prec)
                if hi(m) > 1:
                    upper = hi(iv.log(iv.mpf(hi(m))))
                    lower = lo(iv.log(iv.mpf(lo(m)))) if lo(m) > 1 else mpmath.mpf(0)
                    total += iv.mpf([max(lower, 0), upper])
            return _height(total, prec)

    return _with_tolerance(compute, cs, tol)


def log_embedding(cs: ConjugateSet) -> CenteredVector:
    """x_i = log|beta_i| as intervals (certified mode CenteredVector).

    The exact zero sum only holds for units; the caller can inspect
    ``total`` / ``is_balanced`` on the result.
    """
    prec = _work_bits(cs)
    out = []
    for i, d in enumerate(cs.enclosures):
        if d.contains_zero():
            raise DomainError(f"enclosure {i} contains 0; log|beta_{i + 1}| is unbounded below")
        with ivprec(prec):
            out.append(iv.log(d.abs_interval(prec)))
    return CenteredVector.certified(out)


def _fixed_point_logs(cs: ConjugateSet) -> tuple[list[int], int, mpmath.mpf]:
    """Integers X_i and F with |log|beta_i| - X_i 2^-F| <= err_i; returns (X, F, mean err)."""
    x = log_embedding(cs)
    f = cs.precision_bits
    prec = _work_bits(cs)
    xs, errs = [], []
    with mp.workprec(prec):
        unit = mp.mpf(2) ** -f
        for e in x.entries:
            m, r = mid_rad(e, prec)
            xs.append(int(mp.floor(m * 2**f)))
            errs.append(r + unit)
        mean_err = mp.fsum(errs) / len(errs)
    return xs, f, mean_err


def _orbit_abs_sum(xs: Sequence[int], a: Sequence[int], g: GroupTag) -> int:
    """sum over sigma in G of |sum_j a_j xs[sigma(j)]|, exactly."""
    total = 0
    pairs = [(j, aj) for j, aj in enumerate(a) if aj]
    for sigma in group_tuples(len(a), g):
        total += abs(sum(aj * xs[sigma[j]] for j, aj in pairs))
    return total


def height_multiplicative(cs: ConjugateSet, a: Sequence[int], g: GroupTag, tol=None) -> HeightValue:
    """h(alpha) for alpha = prod_j beta_{j}^{a_j}, beta a unit.

    h(alpha) = (1/(2|G|)) sum_{sigma in G} |sum_j a_j log|beta_{sigma(j)}||,
    which uses the zero-sum property of the log embedding of a unit.
    """
    _check_vector(cs, a)
    if norm_of_root(cs.source) != 1:
        raise DomainError(
            "height_multiplicative needs a unit beta (|N(beta)| = 1); "
            "for non-units use the norm lower bound (thm12_bound)"
        )

    def compute(cs):
        xs, f, mean_err = _fixed_point_logs(cs)
        order = group_order(cs.n, g)
        total = _orbit_abs_sum(xs, a, g)
        prec = _work_bits(cs)
        with mp.workprec(prec):
            err = sum(abs(v) for v in a) * mean_err / 2
        with ivprec(prec):
            val = iv.mpf(total) / (2 * order) * iv.mpf(mp.make_mpf(from_man_exp(1, -f)))
            return _height(val + iv.mpf([-err, err]), prec)

    return _with_tolerance(compute, cs, tol)


def _orbit_values_additive(cs: ConjugateSet, a: Sequence[int], g: GroupTag):
    """Yield |S_sigma|^2 (as an integer at scale 4^E) for S_sigma = sum_i a_i c_{sigma(i)}."""
    w = cs.fixed_centers
    pairs = [(i, ai) for i, ai in enumerate(a) if ai]
    for sigma in group_tuples(len(a), g):
        re = sum(ai * w[sigma[i]][0] for i, ai in pairs)
        im = sum(ai * w[sigma[i]][1] for i, ai in pairs)
        yield re * re + im * im


def _additive_radius_bound(cs: ConjugateSet, a: Sequence[int], prec: int) -> mpmath.mpf:
    with mp.workprec(prec):
        return sum(abs(v) for v in a) * mp.fsum(cs.radii) / cs.n


def height_additive(cs: ConjugateSet, a: Sequence[int], g: GroupTag, tol=None) -> HeightValue:
    """h(alpha) for alpha = sum_i a_i beta_i with beta an algebraic integer.

    Each orbit value is centered at the exact Gaussian dyadic sum of disk
    centers; log max(1, |.|) is 1-Lipschitz, so the mean displacement
    sum|a_i| * mean(r) bounds the total error.
    """
    _check_vector(cs, a)
    if not cs.source.is_monic:
        raise DomainError("height_additive needs a monic polynomial (beta an algebraic integer)")

    def compute(cs):
        prec = _work_bits(cs)
        e = -cs.center_exp
        one = 1 << (2 * e)
        order = group_order(cs.n, g)
        above = [q for q in _orbit_values_additive(cs, a, g) if q > one]
        with ivprec(prec):
            ln2 = iv.log(iv.mpf(2))
            total = _log_product(above, prec) / 2 - len(above) * e * ln2
            err = _additive_radius_bound(cs, a, prec)
            return _height(total / order + iv.mpf([-err, err]), prec)

    return _with_tolerance(compute, cs, tol)


def norm_of_combination(
    cs: ConjugateSet, a: Sequence[int], g: GroupTag, mode: str = "multiplicative", tol=None
) -> HeightValue:
    """(1/|G|) log|prod_{sigma in G} alpha_sigma|, accumulated in log space.

    In multiplicative mode beta need not be a unit: log|alpha_sigma| =
    sum_j a_j log|beta_{sigma(j)}| is finite whenever no disk contains 0.
    Additive mode needs a monic source and every orbit value bounded away
    from 0; otherwise a DomainError is raised.
    """
    _check_vector(cs, a)
    if mode not in ("multiplicative", "additive"):
        raise DomainError(f"mode must be 'multiplicative' or 'additive', got {mode!r}")
    order = group_order(cs.n, g)

    def compute_mult(cs):
        xs, f, mean_err = _fixed_point_logs(cs)
        total = 0
        pairs = [(j, aj) for j, aj in enumerate(a) if aj]
        for sigma in group_tuples(cs.n, g):
            total += sum(aj * xs[sigma[j]] for j, aj in pairs)
        prec = _work_bits(cs)
        with mp.workprec(prec):
            err = sum(abs(v) for v in a) * mean_err
        with ivprec(prec):
            val = iv.mpf(total) / order * iv.mpf(mp.make_mpf(from_man_exp(1, -f)))
            return HeightValue.from_interval(val + iv.mpf([-err, err]), prec)

    def compute_add(cs):
        if not cs.source.is_monic:
            raise DomainError("additive norm needs a monic polynomial")
        prec = _work_bits(cs)
        e = -cs.center_exp
        with mp.workprec(prec):
            big_r = sum(abs(v) for v in a) * max(cs.radii)
            big_r_fixed = big_r * mp.mpf(2) ** e
        qs = list(_orbit_values_additive(cs, a, g))
        with mp.workprec(prec):
            nearest = mp.sqrt(mp.mpf(min(qs)))
            if nearest <= big_r_fixed * (1 + mp.mpf(2) ** (-prec + 8)):
                raise DomainError(
                    "an orbit value is not separated from 0 at this precision; "
                    "the norm cannot be certified"
                )
            # each term moves by at most -log(1 - R/|S_c|) <= R / (|S_c| - R)
            err = big_r_fixed / (nearest - big_r_fixed) * (1 + mp.mpf(2) ** (-prec + 8))
        with ivprec(prec):
            ln2 = iv.log(iv.mpf(2))
            total = (_log_product(qs, prec) / 2 - order * e * ln2) / order
            return HeightValue.from_interval(total + iv.mpf([-err, err]), prec)

    return _with_tolerance(compute_mult if mode == "multiplicative" else compute_add, cs, tol)


# --- synthetic embeddings and references --------------------------------


def orbit_log_mahler(x, a: Sequence[int], g: GroupTag = GroupTag.ALTERNATING) -> Fraction:
    """log M(alpha) = (1/2) sum_{sigma in G} |sum_j a_j x_{sigma(j)}| for a rational
    log embedding x (zero sum), by direct orbit enumeration."""
    x = x if isinstance(x, CenteredVector) else CenteredVector(tuple(x))
    if len(a) != x.n:
        raise DomainError(f"length mismatch: x has {x.n} entries, a has {len(a)}")
    d = 1
    for e in x.entries:
        d = d * e.denominator // math.gcd(d, e.denominator)
    xs = [int(e * d) for e in x.entries]
    return Fraction(_orbit_abs_sum(xs, a, g), 2 * d)


def combination_degree(a: Sequence[int], g: GroupTag) -> int:
    """[Q(alpha):Q] = |G| / |Stab_G(a)| for an additive combination.

    For a 2-transitive G (A_n with n >= 4, S_n) and irrational beta the only
    Q-linear relation among the conjugates is a multiple of their sum, so
    sigma fixes alpha exactly when it fixes the coefficient vector.
    """
    return group_order(len(a), g) // stabilizer_of_vector(a, g)


def log_mahler_additive(cs: ConjugateSet, a: Sequence[int], g: GroupTag, tol=None) -> HeightValue:
    """log M(alpha) = [Q(alpha):Q] * h(alpha) for alpha = sum_i a_i beta_i."""
    h = height_additive(cs, a, g, tol)
    deg = combination_degree(a, g)
    with mp.workprec(h.precision_bits):
        return HeightValue(h.value * deg, h.error_radius * deg, h.precision_bits)


@dataclass(frozen=True)
class ArchimedeanSplit:
    """Orbit averages of log|alpha_sigma|, log+|alpha_sigma| and log-|alpha_sigma|
    (log- x = max(0, -log x)) for a multiplicative combination, so that
    log_plus = log_norm + log_minus."""

    log_norm: HeightValue
    log_plus: HeightValue
    log_minus: HeightValue


def archimedean_split(cs: ConjugateSet, a: Sequence[int], g: GroupTag) -> ArchimedeanSplit:
    """Certified orbit averages for alpha = prod_j beta_j^{a_j}; beta need not be a unit.

    h(alpha) >= max(log_plus, log_minus) since h(alpha) = h(1/alpha) and the
    archimedean part of the height is a lower bound for it.
    """
    _check_vector(cs, a)
    xs, f, mean_err = _fixed_point_logs(cs)
    order = group_order(cs.n, g)
    pairs = [(j, aj) for j, aj in enumerate(a) if aj]
    signed = plus = minus = 0
    for sigma in group_tuples(cs.n, g):
        t = sum(aj * xs[sigma[j]] for j, aj in pairs)
        signed += t
        if t > 0:
            plus += t
        else:
            minus -= t
    prec = _work_bits(cs)
    with mp.workprec(prec):
        err = sum(abs(v) for v in a) * mean_err
    with ivprec(prec):
        unit = iv.mpf(mp.make_mpf(from_man_exp(1, -f))) / order
        slack = iv.mpf([-err, err])
        return ArchimedeanSplit(
            HeightValue.from_interval(iv.mpf(signed) * unit + slack, prec),
            _height(iv.mpf(plus) * unit + slack, prec),
            _height(iv.mpf(minus) * unit + slack, prec),
        )


def dobrowolski_voutier(d: int, ctx=mp):
    """(1/4) (log log d / log d)^3, the explicit lower bound for log M of a
    degree-d algebraic integer that is not a root of unity.  ``ctx`` may be
    ``mpmath.iv`` for an enclosure."""
    if d < 3:
        raise DomainError(f"dobrowolski_voutier needs d >= 3, got {d}")
    ld = ctx.log(ctx.mpf(d))
    return (ctx.log(ld) / ld) ** 3 / 4
