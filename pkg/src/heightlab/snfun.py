"""The averaged pairing s_n on the zero-sum hyperplane H_n, its closed forms, and c_n.

Everything here is exact rational arithmetic.  Floats only appear in the
asymptotic ratio c_n * sqrt(pi n / 2) and in the optional prefilter that
narrows the c_n scan for large n (candidates are then evaluated exactly).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Sequence

from .errors import DomainError
from .perms import GroupTag, group_array, group_order, group_tuples

BRUTEFORCE_MAX_N = 9
SUBSET_MAX_N = 22
EXHAUSTIVE_CN_MAX_N = 200


@dataclass(frozen=True)
class CenteredVector:
    """A point of H_n = {x : x_1 + ... + x_n = 0}.

    In rational mode (``exact=True``) the entries are Fractions and the
    zero sum is enforced.  Certified mode holds interval entries coming from
    root enclosures; the sum is then only known to lie near zero and is
    exposed through ``total`` and ``is_balanced``.
    """

    entries: tuple
    exact: bool = True

    def __post_init__(self):
        if self.exact:
            ents = tuple(Fraction(e) for e in self.entries)
            object.__setattr__(self, "entries", ents)
            if sum(ents) != 0:
                raise DomainError(f"entries sum to {sum(ents)}, not 0")

    @classmethod
    def certified(cls, entries) -> CenteredVector:
        return cls(tuple(entries), exact=False)

    @property
    def n(self) -> int:
        return len(self.entries)

    @property
    def total(self):
        return sum(self.entries[1:], self.entries[0])

    def is_balanced(self, tol) -> bool:
        """Whether |sum| <= tol holds for the whole enclosure of the sum."""
        if self.exact:
            return True
        t = self.total
        return abs(t).b <= tol

    def scaled(self, c) -> CenteredVector:
        return CenteredVector(tuple(c * e for e in self.entries), self.exact)

    def permuted(self, sigma: Sequence[int]) -> CenteredVector:
        """sigma(x) with sigma(x)_j = x_{sigma(j)}; sigma is 0-based one-line."""
        return CenteredVector(tuple(self.entries[s] for s in sigma), self.exact)

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)


def as_centered(x) -> CenteredVector:
    return x if isinstance(x, CenteredVector) else CenteredVector(tuple(x))


def l1_norm(x) -> Fraction:
    """|x|_1 = (1/n) * sum |x_j|."""
    x = as_centered(x)
    return sum((abs(e) for e in x.entries), Fraction(0)) / x.n


def center(a: Sequence[int]) -> CenteredVector:
    """y_j = a_j - (1/n) * sum a_i."""
    if len(a) < 1:
        raise DomainError("center needs a nonempty vector")
    mean = Fraction(sum(a), len(a))
    return CenteredVector(tuple(Fraction(v) - mean for v in a))


def _to_ints(entries: Sequence[Fraction]) -> tuple[list[int], int]:
    """Scale to integers: returns (ints, D) with entries == ints / D."""
    d = 1
    for e in entries:
        d = d * e.denominator // math.gcd(d, e.denominator)
    return [int(e * d) for e in entries], d


def abs_pairing_sum(xs: Sequence[int], ys: Sequence[int], g: GroupTag) -> int:
    """sum over sigma in G of |sum_j xs[sigma(j)] * ys[j]| for integer vectors."""
    n = len(xs)
    bound = max(map(abs, xs), default=0) * max(map(abs, ys), default=0) * n
    if n >= 4 and bound * group_order(n, g) < 2**62:
        import numpy as np

        idx = group_array(n, g)
        xa = np.asarray(xs, dtype=np.int64)
        ya = np.asarray(ys, dtype=np.int64)
        return int(np.abs(xa[idx] @ ya).sum())
    total = 0
    for sigma in group_tuples(n, g):
        total += abs(sum(xs[s] * y for s, y in zip(sigma, ys)))
    return total


def s_n_bruteforce(x, y, g: GroupTag = GroupTag.ALTERNATING) -> Fraction:
    """s_n(x, y) = (2/n!) * sum_{sigma in A_n} |(1/n) sum_j x_{sigma(j)} y_j|.

    With ``GroupTag.SYMMETRIC`` the sum runs over S_n with prefactor 1/n!.
    The two agree whenever x or y has a repeated entry (a transposition of
    equal slots maps the odd coset onto the even one), e.g. for z-vectors,
    but not in general.
    """
    x, y = as_centered(x), as_centered(y)
    n = x.n
    if y.n != n:
        raise DomainError(f"length mismatch: {x.n} vs {y.n}")
    if not 1 <= n <= BRUTEFORCE_MAX_N:
        raise DomainError(f"s_n_bruteforce needs n <= {BRUTEFORCE_MAX_N}, got {n}")
    xs, dx = _to_ints(x.entries)
    ys, dy = _to_ints(y.entries)
    total = abs_pairing_sum(xs, ys, g)
    return Fraction(total, group_order(n, g) * n * dx * dy)


def z_vector(n: int, h: int) -> CenteredVector:
    """n/(2h) on the first h slots, -n/(2(n-h)) on the rest."""
    if not 1 <= h <= n - 1:
        raise DomainError(f"need 1 <= h <= n-1, got n={n}, h={h}")
    hi = Fraction(n, 2 * h)
    lo = -Fraction(n, 2 * (n - h))
    return CenteredVector((hi,) * h + (lo,) * (n - h))


def s_n_closed_zy(n: int, h: int, y) -> Fraction:
    """s_n(z^(n,h), y) = n/(2h(n-h)) * C(n,h)^-1 * sum over h-subsets S of |sum_{j in S} y_j|."""
    y = as_centered(y)
    if y.n != n:
        raise DomainError(f"length mismatch: n={n}, len(y)={y.n}")
    if not 1 <= h <= n - 1:
        raise DomainError(f"need 1 <= h <= n-1, got n={n}, h={h}")
    if n > SUBSET_MAX_N:
        raise DomainError(f"subset enumeration needs n <= {SUBSET_MAX_N}, got {n}")
    ys, d = _to_ints(y.entries)
    total = sum(abs(sum(ys[j] for j in s)) for s in combinations(range(n), h))
    return Fraction(n * total, 2 * h * (n - h) * math.comb(n, h) * d)


def _zz_parts(n: int, h: int, k: int) -> tuple[int, int]:
    m = h * k // n
    num = n * n * (h - m) * (k - m) * math.comb(k, m) * math.comb(n - k, h - m)
    den = 2 * h * k * (n - h) * (n - k) * math.comb(n, h)
    return num, den


def s_n_closed_zz(n: int, h: int, k: int) -> Fraction:
    """s_n(z^(n,h), z^(n,k)) from the closed binomial formula, with m = floor(hk/n)."""
    if not (1 <= h <= n - 1 and 1 <= k <= n - 1):
        raise DomainError(f"need 1 <= h, k <= n-1, got n={n}, h={h}, k={k}")
    return Fraction(*_zz_parts(n, h, k))


@dataclass(frozen=True)
class CnResult:
    n: int
    value: Fraction
    argmin: tuple[int, int]

    @property
    def ratio(self) -> float:
        """c_n * sqrt(pi n / 2), which tends to 1."""
        import mpmath

        with mpmath.workprec(128):
            r = mpmath.mpf(self.value.numerator) / self.value.denominator
            return float(r * mpmath.sqrt(mpmath.pi * self.n / 2))

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "c_n": f"{self.value.numerator}/{self.value.denominator}",
            "ratio": self.ratio,
            "argmin": list(self.argmin),
        }


def _float_candidates(n: int, rel_margin: float = 1e-6) -> list[tuple[int, int]]:
    """(h, k) pairs whose float log-value is within rel_margin of the float minimum."""
    import numpy as np
    from scipy.special import gammaln

    lg = gammaln(np.arange(n + 1) + 1.0)
    h = np.arange(1, n)[:, None]
    k = np.arange(1, n)[None, :]
    m = (h * k) // n
    logv = (
        2 * np.log(n) + np.log(h - m) + np.log(k - m)
        + (lg[k] - lg[m] - lg[k - m])
        + (lg[n - k] - lg[h - m] - lg[n - k - h + m])
        - np.log(2.0 * h * k * (n - h) * (n - k))
        - (lg[n] - lg[h] - lg[n - h])
    )
    cutoff = logv.min() + math.log1p(rel_margin)
    return [(int(a) + 1, int(b) + 1) for a, b in np.argwhere(logv <= cutoff).tolist()]


def c_n(n: int, exhaustive: bool | None = None) -> CnResult:
    """c_n = min over 0 < h, k < n of s_n(z^(n,h), z^(n,k)), with the argmin.

    Ties go to the lexicographically smallest (h, k).  Up to n = 200 every
    pair is evaluated exactly.  Beyond that a float scan (log-gamma, relative
    error far below the 1e-6 margin) selects the near-minimal pairs and
    only those are evaluated exactly; pass ``exhaustive=True`` to force the
    full exact scan.
    """
    if n < 2:
        raise DomainError(f"c_n needs n >= 2, got {n}")
    if exhaustive is None:
        exhaustive = n <= EXHAUSTIVE_CN_MAX_N
    if exhaustive:
        pairs = ((h, k) for h in range(1, n) for k in range(1, n))
    else:
        pairs = iter(sorted(_float_candidates(n)))
    best = None
    for h, k in pairs:
        num, den = _zz_parts(n, h, k)
        # strict comparison keeps the first (lexicographically smallest) minimiser
        if best is None or num * best[1] < best[0] * den:
            best = (num, den, h, k)
    return CnResult(n, Fraction(best[0], best[1]), (best[2], best[3]))


@lru_cache(maxsize=None)
def _c_n_value(n: int) -> Fraction:
    return c_n(n).value


@dataclass(frozen=True)
class SandwichReport:
    n: int
    ratio: Fraction  # s_n(x, y) / (|x|_1 |y|_1)
    c_n: Fraction
    lower_margin: Fraction  # ratio - c_n
    upper_margin: Fraction  # 1 - ratio

    @property
    def holds(self) -> bool:
        return self.lower_margin >= 0 and self.upper_margin >= 0


def sandwich_check(x, y) -> SandwichReport:
    """Evaluate c_n <= s_n(x, y) / (|x|_1 |y|_1) <= 1 exactly."""
    x, y = as_centered(x), as_centered(y)
    nx, ny = l1_norm(x), l1_norm(y)
    if nx == 0 or ny == 0:
        raise DomainError("sandwich_check needs nonzero x and y")
    s = s_n_bruteforce(x, y)
    ratio = s / (nx * ny)
    c = _c_n_value(x.n)
    return SandwichReport(x.n, ratio, c, ratio - c, 1 - ratio)


def stabilizer_average(x, h: int) -> CenteredVector:
    """Average of sigma(x) over the sigma in A_n with sigma({1..h}) = {1..h}.

    Requires |x|_1 = 1, x_j >= 0 for j <= h and x_j < 0 for j > h.  The
    result is z^(n,h).  We need n >= 4: for n = 3 that subgroup of A_3 is
    trivial and the average is x itself.
    """
    x = as_centered(x)
    n = x.n
    if not 4 <= n <= 8:
        raise DomainError(f"stabilizer_average needs 4 <= n <= 8, got {n}")
    if not 1 <= h <= n - 1:
        raise DomainError(f"need 1 <= h <= n-1, got h={h}")
    if l1_norm(x) != 1:
        raise DomainError("stabilizer_average needs |x|_1 = 1")
    if any(e < 0 for e in x.entries[:h]) or any(e >= 0 for e in x.entries[h:]):
        raise DomainError(f"x must be >= 0 on the first {h} slots and < 0 after")
    acc = [Fraction(0)] * n
    count = 0
    for sigma in group_tuples(n, GroupTag.ALTERNATING):
        if all(s < h for s in sigma[:h]):
            count += 1
            for j, s in enumerate(sigma):
                acc[j] += x.entries[s]
    return CenteredVector(tuple(v / count for v in acc))


def _gaps_at_least_one(vals) -> bool:
    return all(b - a >= 1 for a, b in zip(vals, vals[1:]))


def lemma46_lower_bound(y, case: str) -> Fraction:
    """Lower bound for |y|_1 on integer-spaced vectors of H_n, n >= 5.

    ``strict``: y_{j+1} - y_j >= 1 for all j, bound (n-2)/4.
    ``tied``: y_{j+1} - y_j >= 1 for j <= n-2 and y_n repeats one of
    y_1..y_{n-1}, bound (n-3)/5.  The usual statement has y_n = y_{n-1};
    allowing the repeat anywhere covers every vector with exactly one
    coincidence once the distinct values are sorted.
    """
    y = as_centered(y)
    n = y.n
    if n < 5:
        raise DomainError(f"lemma46_lower_bound needs n >= 5, got {n}")
    e = y.entries
    if case == "strict":
        if not _gaps_at_least_one(e):
            raise DomainError("strict case needs consecutive gaps >= 1")
        return Fraction(n - 2, 4)
    if case == "tied":
        if not _gaps_at_least_one(e[:-1]) or e[-1] not in e[:-1]:
            raise DomainError("tied case needs gaps >= 1 on y_1..y_{n-1} and y_n equal to one of them")
        return Fraction(n - 3, 5)
    raise DomainError(f"case must be 'strict' or 'tied', got {case!r}")


def arrange_for_lemma46(a: Sequence[int]) -> tuple[CenteredVector, str]:
    """Reorder an integer vector with at least n-1 distinct entries into lemma46 shape."""
    distinct = sorted(set(a))
    if len(distinct) == len(a):
        return center(distinct), "strict"
    if len(distinct) == len(a) - 1:
        dup = next(v for v in distinct if list(a).count(v) == 2)
        return center(distinct + [dup]), "tied"
    raise DomainError("need at least n-1 distinct entries")
