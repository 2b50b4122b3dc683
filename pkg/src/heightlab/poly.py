"""Exact integer polynomials and the integer invariants built from them."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from .errors import DomainError


@dataclass(frozen=True)
class IntPoly:
    """Univariate polynomial with integer coefficients, constant term first.

    The zero polynomial is the tagged value ``IntPoly.zero()``: its
    ``coeffs`` are ``(0,)`` and ``is_zero`` is set; every other instance has
    a nonzero leading coefficient and ``degree == len(coeffs) - 1``.
    """

    coeffs: tuple[int, ...]
    is_zero: bool = field(default=False, compare=False)

    def __init__(self, coeffs: Sequence[int]):
        cs = [int(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs) if cs else (0,))
        object.__setattr__(self, "is_zero", not cs)

    @classmethod
    def zero(cls) -> IntPoly:
        return cls(())

    @classmethod
    def from_roots(cls, roots: Sequence[int]) -> IntPoly:
        p = cls((1,))
        for r in roots:
            p = p * cls((-r, 1))
        return p

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return -1 if self.is_zero else len(self.coeffs) - 1

    @property
    def leading(self) -> int:
        return self.coeffs[-1]

    @property
    def is_monic(self) -> bool:
        return not self.is_zero and self.leading == 1

    def __add__(self, other: IntPoly) -> IntPoly:
        return add(self, other)

    def __sub__(self, other: IntPoly) -> IntPoly:
        return add(self, IntPoly([-c for c in other.coeffs]))

    def __mul__(self, other: IntPoly) -> IntPoly:
        return mul(self, other)

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def derivative(self) -> IntPoly:
        return IntPoly([k * c for k, c in enumerate(self.coeffs)][1:])

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        terms = []
        for k in range(self.degree, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            mono = "" if k == 0 else ("x" if k == 1 else f"x^{k}")
            if mono and abs(c) == 1:
                coef = "-" if c < 0 else "+"
            else:
                coef = f"{c:+d}"
            terms.append(coef + mono)
        s = " ".join(terms)
        return s[1:] if s.startswith("+") else s

    def to_json(self) -> str:
        return json.dumps([str(c) for c in self.coeffs])

    @classmethod
    def from_json(cls, text: str) -> IntPoly:
        data = json.loads(text)
        if not isinstance(data, list):
            raise DomainError("polynomial JSON must be an array of decimal strings")
        return cls([int(str(c)) for c in data])


def add(p: IntPoly, q: IntPoly) -> IntPoly:
    n = max(len(p.coeffs), len(q.coeffs))
    a = p.coeffs + (0,) * (n - len(p.coeffs))
    b = q.coeffs + (0,) * (n - len(q.coeffs))
    return IntPoly([x + y for x, y in zip(a, b)])


def mul(p: IntPoly, q: IntPoly) -> IntPoly:
    if p.is_zero or q.is_zero:
        return IntPoly.zero()
    out = [0] * (len(p.coeffs) + len(q.coeffs) - 1)
    for i, a in enumerate(p.coeffs):
        if a:
            for j, b in enumerate(q.coeffs):
                out[i + j] += a * b
    return IntPoly(out)


def bareiss_det(matrix: list[list[int]]) -> int:
    """Determinant of an integer matrix by fraction-free elimination."""
    m = [row[:] for row in matrix]
    n = len(m)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for r in range(k + 1, n):
                if m[r][k] != 0:
                    m[k], m[r] = m[r], m[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = m[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * pivot - m[i][k] * m[k][j]) // prev
        prev = pivot
    return sign * m[n - 1][n - 1]


def sylvester_matrix(p: IntPoly, q: IntPoly) -> list[list[int]]:
    m, n = p.degree, q.degree
    size = m + n
    rows = []
    pc = list(reversed(p.coeffs))
    qc = list(reversed(q.coeffs))
    for i in range(n):
        rows.append([0] * i + pc + [0] * (size - m - 1 - i))
    for i in range(m):
        rows.append([0] * i + qc + [0] * (size - n - 1 - i))
    return rows


def resultant(p: IntPoly, q: IntPoly) -> int:
    if p.is_zero or q.is_zero:
        return 0
    if p.degree == 0:
        return p.leading ** q.degree
    if q.degree == 0:
        return q.leading ** p.degree
    return bareiss_det(sylvester_matrix(p, q))


def discriminant(p: IntPoly) -> int:
    """disc(p) = (-1)^(n(n-1)/2) Res(p, p') / a_n.

    For monic p this is prod_{i<j} (b_i - b_j)^2 over the roots.
    """
    n = p.degree
    if n < 2:
        raise DomainError(f"discriminant needs degree >= 2, got {n}")
    res = resultant(p, p.derivative())
    sign = -1 if (n * (n - 1) // 2) % 2 else 1
    q, r = divmod(sign * res, p.leading)
    assert r == 0
    return q


def vandermonde_product(a: Sequence[int]) -> int:
    """prod_{i<j} (a_j - a_i)."""
    if len(a) < 2:
        raise DomainError("vandermonde_product needs at least two entries")
    out = 1
    for i, j in combinations(range(len(a)), 2):
        out *= a[j] - a[i]
    return out


def is_perfect_square(m: int) -> bool:
    if m < 0:
        return False
    r = math.isqrt(m)
    return r * r == m


def norm_of_root(p: IntPoly) -> Fraction:
    """|N(b)| = |a_0 / a_n| for a root b of the irreducible polynomial p."""
    if p.degree < 1:
        raise DomainError("norm_of_root needs degree >= 1")
    return abs(Fraction(p.coeffs[0], p.leading))


# --- arithmetic over F_p, coefficient lists constant term first ---

def _trim(f):
    while f and f[-1] == 0:
        f.pop()
    return f


def _monic_p(f, p):
    inv = pow(f[-1], -1, p)
    return [(c * inv) % p for c in f]


def _divmod_p(f, g, p):
    f = f[:]
    dg = len(g) - 1
    inv = pow(g[-1], -1, p)
    q = [0] * max(len(f) - dg, 1)
    while len(f) - 1 >= dg and f:
        c = (f[-1] * inv) % p
        shift = len(f) - 1 - dg
        q[shift] = c
        for i, gc in enumerate(g):
            f[shift + i] = (f[shift + i] - c * gc) % p
        _trim(f)
    return _trim(q), f


def _mulmod_p(a, b, f, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _divmod_p(_trim(out), f, p)[1]


def _powmod_p(base, e, f, p):
    result = [1]
    while e:
        if e & 1:
            result = _mulmod_p(result, base, f, p)
        base = _mulmod_p(base, base, f, p)
        e >>= 1
    return result


def _gcd_p(a, b, p):
    a, b = _trim(a[:]), _trim(b[:])
    while b:
        a, b = b, _divmod_p(a, b, p)[1]
    return _monic_p(a, p) if a else a


def _sub_p(a, b, p):
    n = max(len(a), len(b))
    a = a + [0] * (n - len(a))
    b = b + [0] * (n - len(b))
    return _trim([(x - y) % p for x, y in zip(a, b)])


def factor_degrees_mod_p(f: IntPoly, p: int) -> list[int]:
    """Degrees of the irreducible factors of f mod p (distinct-degree factorization).

    f must be squarefree mod p and p must not divide the leading coefficient.
    """
    g = _monic_p([c % p for c in f.coeffs], p)
    degrees = []
    h = [0, 1]
    d = 0
    while len(g) - 1 >= 2 * (d + 1):
        d += 1
        h = _powmod_p(h, p, g, p)
        common = _gcd_p(g, _sub_p(h, [0, 1], p), p)
        k = len(common) - 1
        if k > 0:
            degrees += [d] * (k // d)
            g = _divmod_p(g, common, p)[0]
            g = _monic_p(g, p)
            h = _divmod_p(h, g, p)[1]
    if len(g) - 1 > 0:
        degrees.append(len(g) - 1)
    return sorted(degrees)


def _subset_sums(degrees: list[int]) -> set[int]:
    sums = {0}
    for d in degrees:
        sums |= {s + d for s in sums}
    return sums


def _primes():
    n = 2
    while True:
        if all(n % q for q in range(2, math.isqrt(n) + 1)):
            yield n
        n += 1


@dataclass
class IrreducibilityReport:
    verdict: str  # "PROVED_IRREDUCIBLE" or "INCONCLUSIVE"
    degree: int
    patterns: dict[int, list[int] | None]  # prime -> factor degrees; None when skipped
    achievable: list[int]

    @property
    def proved(self) -> bool:
        return self.verdict == "PROVED_IRREDUCIBLE"


def irreducibility_evidence(p: IntPoly, prime_budget: int = 20) -> IrreducibilityReport:
    """Try to prove p irreducible over Q from its factorization patterns mod small primes.

    Any factor over Z of degree d reduces to a product of factors whose
    degrees sum to d modulo every prime not dividing the leading
    coefficient, so d must be a subset sum of every observed pattern.
    Primes dividing the discriminant are skipped (but count toward the
    budget).  Irreducibility is proved if some pattern is a single factor
    or if only 0 and deg p survive the intersection.
    """
    n = p.degree
    if n < 1:
        raise DomainError("irreducibility_evidence needs degree >= 1")
    if n == 1:
        return IrreducibilityReport("PROVED_IRREDUCIBLE", 1, {}, [0, 1])
    disc = discriminant(p)
    if disc == 0:
        raise DomainError("polynomial is not squarefree (gcd(p, p') is nonconstant)")
    patterns: dict[int, list[int] | None] = {}
    achievable = set(range(n + 1))
    verdict = "INCONCLUSIVE"
    primes = (q for q in _primes() if p.leading % q)
    for _ in range(prime_budget):
        q = next(primes)
        if disc % q == 0:
            patterns[q] = None
            continue
        degs = factor_degrees_mod_p(p, q)
        patterns[q] = degs
        achievable &= _subset_sums(degs)
        if degs == [n] or achievable == {0, n}:
            verdict = "PROVED_IRREDUCIBLE"
            break
    return IrreducibilityReport(verdict, n, patterns, sorted(achievable))
