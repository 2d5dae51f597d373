"""Exception types shared across the package."""

from __future__ import annotations


class DomainError(ValueError):
    """An argument lies outside the domain where a formula is defined."""


class BracketError(ValueError):
    """The root-finding bracket does not enclose a sign change."""


class ConvergenceError(ArithmeticError):
    """An iterative routine stopped before meeting its tolerance.

    The best available estimate and its error bound are kept on the
    exception so callers can decide whether to use them anyway.
    """

    def __init__(self, message: str, estimate: float, error: float):
        super().__init__(message)
        self.estimate = estimate
        self.error = error


class DecompositionError(ArithmeticError):
    """The Schur decomposition failed to converge.

    ``partial`` holds whatever eigenvalues LAPACK managed to compute.
    """

    def __init__(self, message: str, partial=None):
        super().__init__(message)
        self.partial = partial


class TrialFailedError(RuntimeError):
    """A Monte Carlo trial failed twice in a row."""

    def __init__(self, trial: int, cause: BaseException | None = None):
        super().__init__(f"trial {trial} failed after one retry: {cause!r}")
        self.trial = trial
        self.cause = cause


class BranchPointError(ValueError):
    """A grid crosses a branch point of a piecewise formula without an explicit stitch."""

    def __init__(self, message: str, branch_point: float):
        super().__init__(message)
        self.branch_point = branch_point
