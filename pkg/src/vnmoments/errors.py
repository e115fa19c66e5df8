"""Exception types shared across the package."""


class DomainError(ValueError):
    """Argument outside the validity domain of a formula or identity."""


class DegenerateParameterError(ValueError):
    """A finite-sum term pairs a vanishing binomial with a divergent polygamma."""

    def __init__(self, message, k=None):
        super().__init__(message)
        self.k = k


class ConvergenceError(RuntimeError):
    """An iterative numerical procedure failed to reach its tolerance."""

    def __init__(self, message, estimate=None, error=None):
        super().__init__(message)
        self.estimate = estimate
        self.error = error
