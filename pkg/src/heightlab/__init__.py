"""Heights and Mahler measures of combinations of conjugate algebraic numbers."""

from .errors import DomainError, PrecisionExhausted
from .perms import GroupTag
from .poly import IntPoly

__all__ = ["DomainError", "GroupTag", "IntPoly", "PrecisionExhausted"]
__version__ = "0.1.0"
