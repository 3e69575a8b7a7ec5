"""Exception and warning classes shared across the package."""


class InputError(ValueError):
    """Malformed or out-of-range input (bad shapes, indices, files)."""


class GuardError(RuntimeError):
    """A configured size guard refused the request (enumeration cap, 3^n guard)."""


class SamplerError(RuntimeError):
    """A conditional weight vector became numerically degenerate.

    ``stage`` is the 1-based stage at which every weight was zero.
    """

    def __init__(self, message, stage=None, attempts=None):
        super().__init__(message)
        self.stage = stage
        self.attempts = attempts


class OrthonormalityWarning(UserWarning):
    """Input matrix columns deviate from orthonormality by more than the tolerance."""


class UnderflowWarning(RuntimeWarning):
    """A stage's largest conditional weight fell below the underflow threshold."""
