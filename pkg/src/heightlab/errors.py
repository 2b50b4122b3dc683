"""Exception types shared across heightlab."""


class DomainError(ValueError):
    """An input lies outside the domain where an operation is defined."""


class PrecisionExhausted(ArithmeticError):
    """Certification did not succeed before the working-precision cap."""

    def __init__(self, message, bits=None):
        super().__init__(message)
        self.bits = bits
