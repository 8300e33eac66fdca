"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain of an operation."""


class ImproperDivisorError(DomainError):
    """The exponent is not a proper divisor of q - 1."""


class ReducibleModulusError(DomainError):
    """A proposed extension-field modulus has a nontrivial factor."""

    def __init__(self, modulus, factor):
        self.modulus = tuple(modulus)
        self.factor = tuple(factor)
        super().__init__(f"modulus {list(self.modulus)} is reducible: factor {list(self.factor)}")


class OracleMismatch(ArithmeticError):
    """Two independent computations of the same quantity disagree."""


class ConstructionError(RuntimeError):
    """A code construction could not be completed."""
