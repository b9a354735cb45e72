"""Exception types shared across the package."""


class EvaluationError(RuntimeError):
    """A special-function or quadrature evaluation failed to converge."""


class DivergenceError(RuntimeError):
    """The fixed-point sweep left the contraction regime."""

    def __init__(self, message: str, node: int | None = None, time: float | None = None):
        super().__init__(message)
        self.node = node
        self.time = time


class ConfigError(ValueError):
    """A run configuration failed to parse or violates a model constraint."""
