"""Equilibria of large random dynamical systems: theory and Monte Carlo checks.

Subpackages and modules:

* :mod:`eqatlas.numerics` special functions, quadrature, root finding
* :mod:`eqatlas.analytic` closed-form large-N predictions
* :mod:`eqatlas.ensemble` sampling and Monte Carlo estimators
* :mod:`eqatlas.experiments` validation scenarios and persisted runs
* :mod:`eqatlas.cli` command-line front end
"""

__version__ = "0.1.0"

from .analytic import ModelParams, PhaseRegion  # noqa: E402
from .errors import (  # noqa: E402
    BracketError,
    BranchPointError,
    ConvergenceError,
    DecompositionError,
    DomainError,
    TrialFailedError,
)

__all__ = [
    "ModelParams",
    "PhaseRegion",
    "BracketError",
    "BranchPointError",
    "ConvergenceError",
    "DecompositionError",
    "DomainError",
    "TrialFailedError",
    "__version__",
]
