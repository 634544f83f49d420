"""Exception types shared across the package."""


class EvaluationError(Exception):
    """An objective (or declared bound function) returned a non-finite value.

    Carries the offending query point so callers can report where the
    black box broke down.
    """

    def __init__(self, message, point=None):
        super().__init__(message)
        self.point = point


class ConfigError(Exception):
    """An experiment configuration is malformed or inconsistent."""


class DivergenceError(Exception):
    """Every attempted run diverged, so no usable result exists."""
