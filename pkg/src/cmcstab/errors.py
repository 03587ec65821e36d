"""Exception hierarchy shared by all modules."""


class CMCError(Exception):
    """Base class for every error raised by this package."""


class InvalidArgumentError(CMCError, ValueError):
    """An argument lies outside the domain of the operation."""


class NoSuchSphereError(CMCError, ValueError):
    """No rotational CMC sphere exists for the requested mean curvature."""

    def __init__(self, message, threshold=None):
        super().__init__(message)
        self.threshold = threshold


class NumericalError(CMCError, ArithmeticError):
    """A numerical procedure failed; ``diagnostics`` carries measured values."""

    def __init__(self, message, **diagnostics):
        super().__init__(message)
        self.diagnostics = diagnostics


class CertificationError(NumericalError):
    """The computed spectrum could not be certified (e.g. ``m_max`` too small)."""


class HypothesisViolationError(NumericalError):
    """A hypothesis of Koiso's criterion failed numerically."""
