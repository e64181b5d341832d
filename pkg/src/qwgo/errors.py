class DomainError(ValueError):
    """An argument lies outside the domain an operation accepts."""


class NumericalFailure(ArithmeticError):
    """A computation produced an unusable result (zero mass, overflow, non-finite values)."""
