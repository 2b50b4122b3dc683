"""Permutations of {1..n}, the groups A_n and S_n, and the exact counts used by the bounds."""

from __future__ import annotations

import enum
import math
from collections import Counter, defaultdict
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from itertools import permutations, product
from typing import Iterator, Sequence

from .errors import DomainError

MAX_ENUM_N = 10


class GroupTag(enum.Enum):
    ALTERNATING = "an"
    SYMMETRIC = "sn"

    @classmethod
    def parse(cls, text: str) -> GroupTag:
        key = text.strip().lower()
        for tag in cls:
            if key in (tag.value, tag.name.lower()):
                return tag
        raise DomainError(f"unknown group tag {text!r} (use 'an' or 'sn')")


def group_order(n: int, g: GroupTag) -> int:
    f = math.factorial(n)
    return f // 2 if g is GroupTag.ALTERNATING and n >= 2 else f


def sign_of(images: Sequence[int]) -> int:
    """Sign of a 0-based permutation tuple, from its cycle count."""
    n = len(images)
    seen = [False] * n
    cycles = 0
    for i in range(n):
        if not seen[i]:
            cycles += 1
            j = i
            while not seen[j]:
                seen[j] = True
                j = images[j]
    return -1 if (n - cycles) % 2 else 1


@dataclass(frozen=True)
class Permutation:
    """A bijection of {1..n} in one-line notation: ``images[i-1] == sigma(i)``."""

    images: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.images) != list(range(1, len(self.images) + 1)):
            raise DomainError(f"{self.images} is not a permutation of 1..{len(self.images)}")

    @classmethod
    def identity(cls, n: int) -> Permutation:
        return cls(tuple(range(1, n + 1)))

    @classmethod
    def from_cycles(cls, n: int, *cycles: Sequence[int]) -> Permutation:
        img = list(range(1, n + 1))
        for cyc in cycles:
            for a, b in zip(cyc, cyc[1:] + type(cyc)(cyc[:1])):
                img[a - 1] = b
        return cls(tuple(img))

    @classmethod
    def from_zero_based(cls, t: Sequence[int]) -> Permutation:
        return cls(tuple(i + 1 for i in t))

    @property
    def n(self) -> int:
        return len(self.images)

    @cached_property
    def zero_based(self) -> tuple[int, ...]:
        return tuple(i - 1 for i in self.images)

    @cached_property
    def parity(self) -> str:
        inversions = sum(
            1 for i in range(self.n) for j in range(i + 1, self.n) if self.images[i] > self.images[j]
        )
        return "odd" if inversions % 2 else "even"

    def __call__(self, i: int) -> int:
        return self.images[i - 1]

    def __mul__(self, other: Permutation) -> Permutation:
        """Composition: (self * other)(i) == self(other(i))."""
        return Permutation(tuple(self(other(i)) for i in range(1, self.n + 1)))

    def inverse(self) -> Permutation:
        inv = [0] * self.n
        for i, v in enumerate(self.images, start=1):
            inv[v - 1] = i
        return Permutation(tuple(inv))

    @property
    def is_transposition(self) -> bool:
        moved = [i for i in range(1, self.n + 1) if self(i) != i]
        return len(moved) == 2

    def __str__(self) -> str:
        seen, parts = set(), []
        for i in range(1, self.n + 1):
            if i in seen or self(i) == i:
                continue
            cyc, j = [], i
            while j not in seen:
                seen.add(j)
                cyc.append(j)
                j = self(j)
            parts.append("(" + " ".join(map(str, cyc)) + ")")
        return "".join(parts) or "id"


def _check_guard(n: int, low: int = 2):
    if not low <= n <= MAX_ENUM_N:
        raise DomainError(f"enumeration needs {low} <= n <= {MAX_ENUM_N}, got n={n}")


def _iter_tuples(n: int, g: GroupTag) -> Iterator[tuple[int, ...]]:
    for t in permutations(range(n)):
        if g is GroupTag.SYMMETRIC or sign_of(t) == 1:
            yield t


@lru_cache(maxsize=None)
def _cached_tuples(n: int, g: GroupTag) -> tuple[tuple[int, ...], ...]:
    return tuple(_iter_tuples(n, g))


def group_tuples(n: int, g: GroupTag):
    """0-based one-line tuples of G in lexicographic order (cached for n <= 9)."""
    _check_guard(n, 1)
    if n <= 9:
        return _cached_tuples(n, g)
    return _iter_tuples(n, g)


def group_array(n: int, g: GroupTag):
    """The same elements as an (|G|, n) numpy index array."""
    import numpy as np

    return _group_array(n, g) if n <= 9 else np.array(list(group_tuples(n, g)), dtype=np.intp)


@lru_cache(maxsize=None)
def _group_array(n, g):
    import numpy as np

    arr = np.array(_cached_tuples(n, g), dtype=np.intp)
    arr.setflags(write=False)
    return arr


def enumerate_group(n: int, g: GroupTag) -> Iterator[Permutation]:
    """Yield each element of A_n or S_n exactly once, in lexicographic order."""
    _check_guard(n)
    for t in group_tuples(n, g):
        yield Permutation.from_zero_based(t)


def generator_criterion(a: Sequence[int], g: GroupTag) -> bool:
    """Whether the conjugate combination with exponents ``a`` generates the Galois closure.

    For A_n (n >= 5) this holds iff at most one pair of entries coincides,
    i.e. there are at least n-1 distinct values.  For S_n (n >= 3) all
    entries must be distinct.
    """
    n = len(a)
    if g is GroupTag.ALTERNATING:
        if n < 5:
            raise DomainError(f"the A_n generator criterion is proved for n >= 5, got n={n}")
        return len(set(a)) >= n - 1
    if n < 3:
        raise DomainError(f"the S_n generator criterion is proved for n >= 3, got n={n}")
    return len(set(a)) == n


def stabilizer_of_vector(a: Sequence[int], g: GroupTag) -> int:
    """Count sigma in G with a[sigma(i)] == a[i] for all i.

    Enumerates the permutations that only shuffle positions holding equal
    values, then filters by parity.
    """
    n = len(a)
    _check_guard(n, 1)
    classes = defaultdict(list)
    for i, v in enumerate(a):
        classes[v].append(i)
    blocks = list(classes.values())
    count = 0
    for choice in product(*(permutations(b) for b in blocks)):
        img = [0] * n
        for block, perm in zip(blocks, choice):
            for src, dst in zip(block, perm):
                img[src] = dst
        if g is GroupTag.SYMMETRIC or sign_of(img) == 1:
            count += 1
    return count


def derangement_count(n: int) -> int:
    """d_n via d_n = (n-1)(d_{n-1} + d_{n-2}), d_0 = 1, d_1 = 0."""
    if n < 0:
        raise DomainError("n must be >= 0")
    prev, cur = 1, 0
    if n == 0:
        return 1
    for m in range(2, n + 1):
        prev, cur = cur, (m - 1) * (cur + prev)
    return cur


def derangement_count_series(n: int) -> int:
    """d_n = n! * sum_{k=0}^{n} (-1)^k / k!, evaluated exactly."""
    total = sum(Fraction((-1) ** k, math.factorial(k)) for k in range(n + 1))
    value = math.factorial(n) * total
    assert value.denominator == 1
    return value.numerator


def _partitions_min(n: int, smallest: int):
    """Partitions of n into parts >= smallest, as non-decreasing lists."""
    if n == 0:
        yield []
        return
    for first in range(smallest, n + 1):
        for rest in _partitions_min(n - first, first):
            yield [first] + rest


def lambda_count(n: int) -> int:
    """Number of permutations of n letters all of whose cycles have length >= 3.

    Sums n! / (prod parts * prod multiplicity!) over partitions of n into
    parts >= 3.  Lambda_0 = 1 (the empty permutation); Lambda_1 = Lambda_2 = 0.
    """
    if n < 0:
        raise DomainError("n must be >= 0")
    total = 0
    for parts in _partitions_min(n, 3):
        denom = 1
        for part, mult in Counter(parts).items():
            denom *= part**mult * math.factorial(mult)
        total += math.factorial(n) // denom
    return total


def transposition_count(n: int) -> int:
    if n < 2:
        raise DomainError("transposition_count needs n >= 2")
    return n * (n - 1) // 2


def transitive_count_check(n: int, g: GroupTag, i: int, k: int) -> int:
    """Count sigma in G with sigma(k) == i (1-based); equals |G|/n for transitive G."""
    _check_guard(n)
    if not (1 <= i <= n and 1 <= k <= n):
        raise DomainError("indices must lie in 1..n")
    return sum(1 for t in group_tuples(n, g) if t[k - 1] == i - 1)
