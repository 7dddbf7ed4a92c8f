"""Exception types raised by the verifiers and constructors."""


class DilationError(Exception):
    """Base class for all errors raised by this package."""


class DimensionError(DilationError, ValueError):
    """Tensor factor dimensions do not match the matrix they annotate."""


class ValidationError(DilationError, ValueError):
    """An input violates a documented invariant (not Hermitian, not unitary, ...)."""


class DegeneracyError(DilationError):
    """An environment state has a degenerate spectrum where a non-degenerate one is required."""


class NotEquilibratingError(DilationError):
    """The dilation does not leave the equilibrium state invariant."""


class RankError(DilationError):
    """A state that must have full rank has a (numerically) vanishing eigenvalue."""


class NotThermalError(DilationError):
    """The unitary does not commute with the product of Gibbs states."""


class NotRobustError(DilationError):
    """The catalyst marginal is not preserved for every system input.

    ``witness`` holds the largest residual over the matrix-unit basis.
    """

    def __init__(self, message, witness):
        super().__init__(message)
        self.witness = witness


class NotCatalyticUnitaryError(DilationError):
    """The partial transpose of the unitary on the system factor is not unitary."""


class PreconditionError(DilationError):
    """A documented precondition of an operation does not hold."""


class ResourceError(DilationError):
    """The requested object would be too large to build densely."""


class InternalConsistencyError(DilationError):
    """A construction failed its own verification (a bug, not bad input)."""
