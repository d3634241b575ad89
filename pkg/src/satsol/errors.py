"""Exception types shared across the solver modules.

Argument validation uses plain ValueError; the classes here mark failures
of the numerics themselves (non-convergence, lost brackets, regime refusals)
so callers can map them to distinct exit codes.
"""


class NumericsError(Exception):
    """Base class for numerical failures."""


class ConvergenceError(NumericsError):
    """An iteration exhausted its budget without meeting its tolerance.

    Carries the iteration trace (when available) in ``trace``.
    """

    def __init__(self, message, trace=None):
        super().__init__(message)
        self.trace = trace


class StepSizeError(NumericsError):
    """The flow diverged; retry with a smaller pseudo-time step."""


class BracketError(NumericsError):
    """A root/shooting bracket could not be established."""


class RegimeError(Exception):
    """Refusal on domain grounds: the requested coupling admits no ground state."""


class ResourceLimitError(Exception):
    """A computation would exceed a configured resource cap (e.g. grid extent)."""
