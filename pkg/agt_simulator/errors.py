"""
errors.py — Exception hierarchy of the simulator

All errors raised by the library derive from `AgtError`, so callers (CLI, HTTP API)
can separate expected failures from programming errors. The CLI maps each class to
an exit code via `exit_code`.
"""


class AgtError(Exception):
    """Base class for every expected simulator failure."""
    exit_code = 1


class ParseError(AgtError):
    """
    Raised for malformed Pauli labels or circuit lines.

    Attributes:
        position (int | None): 1-based position of the offending character or line.
    """
    exit_code = 2

    def __init__(self, message: str, position: int | None = None):
        super().__init__(message)
        self.position = position


class StructuralError(AgtError):
    """Mismatched qubit counts, empty sums or incompatible dimensions."""


class QubitIndexError(StructuralError):
    """Qubit indices that coincide or fall outside the register."""


class DomainError(AgtError):
    """Numeric pre-condition violated (parameter range, Hermiticity, unitarity)."""
    exit_code = 3


class UnsupportedGateError(DomainError):
    """Gate outside the set a construction supports."""


class CompileError(AgtError):
    """Circuit cannot be compiled onto the requested layout."""
    exit_code = 2


class ResourceError(AgtError):
    """Simulation would exceed the qubit budget or the program is emission-only."""


class ConsistencyError(AgtError):
    """An internal numeric invariant was broken. Indicates a bug, not bad input."""
