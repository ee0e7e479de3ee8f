"""Exception hierarchy for the qnav package."""


class QnavError(Exception):
    """Base class for all qnav-specific errors."""


class DimensionError(QnavError):
    """Matrix or vector dimensions are incompatible with the operation."""


class NotHermitianError(QnavError):
    """Matrix deviates from Hermitian beyond the construction tolerance."""


class NotUnitaryError(QnavError):
    """Matrix deviates from unitary beyond tolerance."""


class WindTooStrongError(QnavError):
    """Background trace norm reaches or exceeds the control budget."""


class DegenerateTaskError(QnavError):
    """Initial and target states coincide; no control is needed."""


class NotInvariantError(QnavError):
    """Background Hamiltonian does not preserve the two-state subspace."""


class NoOpGateError(QnavError):
    """Gate relation is the identity on the chosen branch; the closed form is singular."""


class TaskFileError(QnavError):
    """Task file is missing, malformed, or inconsistent."""
