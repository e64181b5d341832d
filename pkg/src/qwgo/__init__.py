"""Classical emulation of quantum-walk enhanced Grover search for 1-D global optimization."""

from qwgo.errors import DomainError, NumericalFailure

__all__ = ["DomainError", "NumericalFailure"]
__version__ = "0.1.0"
