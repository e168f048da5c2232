"""Exception types shared across the package."""


class AssumptionViolated(ValueError):
    """The game fails the strong-monotonicity condition (mu <= 0)."""

    def __init__(self, message, mu=None):
        super().__init__(message)
        self.mu = mu


class NotConverged(RuntimeError):
    """An iterative routine hit its iteration cap; ``residual`` is what it reached."""

    def __init__(self, message, residual=None, iterate=None):
        super().__init__(message)
        self.residual = residual
        self.iterate = iterate


class DegenerateDenominator(ZeroDivisionError):
    """A normalized gap would divide by a best-response cost too close to zero."""
