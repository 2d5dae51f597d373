"""Monte Carlo side: sampling, spectra and estimators for the real elliptic ensemble."""

from .accumulate import Histogram, TrialAccumulator
from .energy import AtomicMeasure, elliptic_grid_measure, from_spectrum, j_tau
from .estimators import (
    CountEstimate,
    DEstimate,
    EmpiricalDensities,
    empirical_densities,
    estimate_D,
    estimate_N_counts,
    sample_xmax,
    xmax_exceedance,
)
from .parallel import run_trials_parallel
from .sampling import EllipticSamplerConfig, sample_elliptic, trial_generator
from .spectra import (
    Spectrum,
    conjugation_closed,
    kth_real_part,
    log_abs_char_poly,
    log_abs_det,
    mu_H,
    spectrum,
    x_max,
)

__all__ = [
    "AtomicMeasure",
    "CountEstimate",
    "DEstimate",
    "EllipticSamplerConfig",
    "EmpiricalDensities",
    "Histogram",
    "Spectrum",
    "TrialAccumulator",
    "conjugation_closed",
    "elliptic_grid_measure",
    "empirical_densities",
    "estimate_D",
    "estimate_N_counts",
    "from_spectrum",
    "j_tau",
    "kth_real_part",
    "log_abs_char_poly",
    "log_abs_det",
    "mu_H",
    "run_trials_parallel",
    "sample_elliptic",
    "sample_xmax",
    "spectrum",
    "trial_generator",
    "x_max",
    "xmax_exceedance",
]
