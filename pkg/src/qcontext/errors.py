"""Exception types shared across the toolkit.

The CLI maps these onto process exit codes, so solver code should raise
the most specific class that applies rather than a bare ValueError.
"""


class QContextError(Exception):
    """Base class for all toolkit errors."""


class DimensionError(QContextError):
    """Operands act on different qubit counts, or an index is out of range."""


class ContractViolation(QContextError):
    """A documented precondition was not met (non-Hermitian input, bad angle, ...)."""


class FixtureError(QContextError):
    """A fixture file failed schema or physics validation."""


class ConvergenceError(QContextError):
    """A variational solve failed to converge and strict mode was requested."""


class ResourceLimitError(QContextError):
    """A requested computation exceeds a configured size cap."""
