"""Exception hierarchy for peakwave.

Every error raised by the library derives from :class:`PeakwaveError`, so
callers (notably the CLI) can separate parameter-validation failures from
numerical failures.
"""


class PeakwaveError(Exception):
    """Base class for all peakwave errors."""


class RegimeError(PeakwaveError):
    """Parameters violate the admissible sign/inequality regime."""


class DomainError(PeakwaveError):
    """Argument outside the mathematical domain of an operation."""


class StepError(PeakwaveError):
    """A finite-difference or time step is inadmissible or inconsistent."""


class DegenerateError(PeakwaveError):
    """Quantity too close to a degeneracy (e.g. the slope threshold) to classify."""


class BracketError(PeakwaveError):
    """Root bracket endpoints do not straddle a sign change."""


class GridError(PeakwaveError):
    """Grid does not resolve or contain the structures being discretized."""


class InstabilityError(PeakwaveError):
    """A count or check changed under grid refinement."""


class ConvergenceError(PeakwaveError):
    """An iterative solver failed to reach its tolerance."""


class SolveError(PeakwaveError):
    """A linear system solve failed."""


class BlowupError(PeakwaveError):
    """Field amplitude exceeded the blow-up guard during time integration."""


class PreconditionError(PeakwaveError):
    """A spectral precondition required by a classification failed."""
