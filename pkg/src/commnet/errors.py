class ConfigError(ValueError):
    """Raised for invalid configuration files, keys or values."""


class ConvergenceError(RuntimeError):
    """Raised when an iterative or adaptive routine cannot reach its tolerance.

    Carries the best available estimate so callers can still inspect it.
    """

    def __init__(self, message, estimate=None, error_bound=None, trace=None):
        super().__init__(message)
        self.estimate = estimate
        self.error_bound = error_bound
        self.trace = trace
