"""
Exceptions raised by the allocplan library.

Every error a caller can fix by changing its input derives from
AllocplanError; the command-line tools map that family to exit code 2.
"""


class AllocplanError(ValueError):
    """Base class for input and precondition failures."""


class InvalidInputError(AllocplanError):
    """An argument violates a documented precondition."""


class UnboundedRiskError(AllocplanError):
    """A group with positive sigma2 received no samples."""


class ConvergenceError(AllocplanError):
    """A bisection search failed to bracket or converge."""

    def __init__(self, message, bracket=None):
        super().__init__(message)
        self.bracket = bracket


class FitError(AllocplanError):
    """Scaling-law fit data is insufficient or degenerate."""


class SamplingError(AllocplanError):
    """A per-group data generator failed or is missing."""

    def __init__(self, message, group=None):
        super().__init__(message)
        self.group = group


class EvaluatorError(AllocplanError):
    """A loss evaluator failed for a requested composition."""
