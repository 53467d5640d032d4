"""Toolkit-specific error types."""


class SingularChannelError(ValueError):
    """Channel Gram matrix is (numerically) rank deficient."""


class DegenerateChannelError(ValueError):
    """A channel quantity required to be nonzero vanished (e.g. a zero column)."""


class CandidateBudgetError(ValueError):
    """Exhaustive enumeration would exceed the configured candidate cap."""

    def __init__(self, candidates: int, cap: int):
        self.candidates = candidates
        self.cap = cap
        super().__init__(
            f"exhaustive search needs {candidates} candidates, cap is {cap}"
        )


class ConfigError(ValueError):
    """Experiment configuration failed validation."""
