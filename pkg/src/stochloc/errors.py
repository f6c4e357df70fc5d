"""Shared exception types."""


class ValidationError(ValueError):
    """Raised when inputs fail a documented contract (bad table, bad shape, ...)."""


class InconsistentObservationError(ValueError):
    """Raised when an observation has zero likelihood under every support point."""


class ChainFailureError(RuntimeError):
    """Raised when a simulated chain produces a non-finite state.

    Carries the step index at which the failure was detected.
    """

    def __init__(self, message: str, step: int):
        super().__init__(f"{message} (step {step})")
        self.step = step
