"""
Exception hierarchy for qsgps.

Validation failures subclass ValueError as well as QsgpsError, so code that
already guards numerical input with ``except ValueError`` keeps working.
"""

from typing import Any, Optional


class QsgpsError(Exception):
    """Root of every error raised by the package."""


class DimensionMismatchError(QsgpsError, ValueError):
    """Operands act on registers of different sizes."""


class NotUnitaryError(QsgpsError, ValueError):
    """A custom gate matrix is not unitary."""


class NotHermitianError(QsgpsError, ValueError):
    """An observable or density matrix is not Hermitian."""


class NotDichotomicError(QsgpsError, ValueError):
    """An observable does not square to the identity."""


class NotAnticommutingError(QsgpsError, ValueError):
    """Two observables were expected to anticommute."""


class IncompleteChannelError(QsgpsError, ValueError):
    """Kraus operators do not satisfy the completeness relation."""


class OverlappingSupportError(QsgpsError, ValueError):
    """Observables meant for distinct parties share qubits."""


class NotNormalizedError(QsgpsError, ValueError):
    """State amplitudes do not have unit norm."""


class InvalidStateError(QsgpsError, ValueError):
    """A density matrix violates trace, Hermiticity or positivity."""


class AttackModelError(QsgpsError, ValueError):
    """Malformed attack description."""


class EnumerationLimitError(QsgpsError, ValueError):
    """Too many parties for exhaustive deterministic enumeration."""


class ConfigError(QsgpsError, ValueError):
    """A configuration or scenario file could not be interpreted."""


class SolverError(QsgpsError):
    """Positioning failed."""


class DegenerateGeometryError(SolverError):
    """The pseudorange Jacobian is singular or numerically rank deficient."""


class IdMismatchError(SolverError, ValueError):
    """Satellite ids of epochs and pseudoranges disagree."""


class ConvergenceError(SolverError):
    """Gauss-Newton did not converge within the iteration budget."""

    def __init__(self, message: str, fix: Optional[Any] = None):
        super().__init__(message)
        self.fix = fix
