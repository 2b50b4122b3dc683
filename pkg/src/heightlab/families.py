"""Concrete input families: the truncated exponential polynomials."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError
from .poly import IntPoly, IrreducibilityReport, discriminant, irreducibility_evidence, is_perfect_square


def laguerre_poly(n: int) -> IntPoly:
    """n! * (1 + x + x^2/2! + ... + x^n/n!), monic with x^j coefficient n!/j!."""
    if n < 1:
        raise DomainError(f"laguerre_poly needs n >= 1, got {n}")
    f = math.factorial(n)
    return IntPoly([f // math.factorial(j) for j in range(n + 1)])


def laguerre_norm(n: int) -> int:
    """|N(beta)| for a root beta of laguerre_poly(n): the constant term n!."""
    if n < 1:
        raise DomainError(f"laguerre_norm needs n >= 1, got {n}")
    return math.factorial(n)


@dataclass
class AnEvidence:
    """Necessary conditions for the Galois group to be A_n.  Never a proof of it."""

    squarefree: bool
    disc_is_square: bool
    discriminant: int
    irreducibility: IrreducibilityReport | None

    def to_json(self) -> dict:
        irr = self.irreducibility
        return {
            "squarefree": self.squarefree,
            "disc_is_square": self.disc_is_square,
            "discriminant": str(self.discriminant),
            "irreducibility": None if irr is None else irr.verdict,
            "irreducibility_patterns": None
            if irr is None
            else {str(q): degs for q, degs in irr.patterns.items()},
        }


def an_necessary_conditions(p: IntPoly, prime_budget: int = 20) -> AnEvidence:
    """Squarefreeness, square discriminant and mod-p irreducibility evidence for p."""
    if p.degree < 2:
        raise DomainError(f"an_necessary_conditions needs degree >= 2, got {p.degree}")
    disc = discriminant(p)
    squarefree = disc != 0
    irr = irreducibility_evidence(p, prime_budget) if squarefree else None
    return AnEvidence(squarefree, squarefree and is_perfect_square(disc), disc, irr)
