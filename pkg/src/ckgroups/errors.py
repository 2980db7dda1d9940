"""Exception types raised by the library."""


class CKError(Exception):
    """Base class for all library errors."""


class DomainError(CKError, ValueError):
    """Invalid argument: bad index range, non-finite input, shape mismatch."""


class PreconditionError(CKError, ValueError):
    """Input violates a stated precondition (e.g. matrix is not an isometry)."""


class DegeneracyError(CKError, ArithmeticError):
    """A factorization stage could not be resolved.

    Carries the stage (block index) at which the column direction was lost
    and could not be recovered from the quadratic tail.
    """

    def __init__(self, message, stage, indices=None):
        super().__init__(message)
        self.stage = stage
        self.indices = indices


class ConfigError(CKError, ValueError):
    """Inconsistent configuration (missing truncation, unsupported family...)."""


class UnsupportedOrbitError(CKError):
    """Operation requested for an orbit class it is not defined on."""
