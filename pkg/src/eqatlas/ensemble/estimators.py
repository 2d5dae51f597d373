"""Monte Carlo estimators of determinant averages, equilibrium counts and spectral densities."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .. import analytic
from ..analytic import ModelParams
from ..errors import DomainError
from ..numerics import log_sum_exp, log_sum_exp_stream
from .accumulate import TrialAccumulator
from .parallel import run_trials_parallel
from .sampling import EllipticSamplerConfig, sample_elliptic
from .spectra import log_abs_det, mu_H, spectrum

MODES = ("unconstrained", "stable", "alpha_stable")
MIN_ACCEPTED = 30
GH_NODES = 21


def _check_mode(mode: str, alpha: float | None) -> float | None:
    if mode not in MODES:
        raise DomainError(f"mode must be one of {MODES}, got {mode!r}")
    if mode == "alpha_stable":
        if alpha is None or not 0 <= alpha <= 1:
            raise DomainError(f"alpha_stable mode needs alpha in [0, 1], got {alpha}")
        return float(alpha)
    return None


def _accepts(X: np.ndarray, xs: np.ndarray, mode: str, alpha: float | None) -> np.ndarray:
    """Theta factor of the Kac-Rice integrand at each shift in ``xs``."""
    if mode == "unconstrained":
        return np.ones(xs.shape, dtype=bool)
    s = spectrum(X)
    if mode == "stable":
        return s.x_max < xs
    # mu_N(H_x) <= alpha
    re = s.eigenvalues.real
    frac = np.array([np.count_nonzero(re >= x) for x in xs]) / s.n
    return frac <= alpha


def _group(trial: int, trials: int, groups: int) -> int:
    return trial * groups // trials


@dataclass(frozen=True)
class _DetTask:
    n: int
    tau: float
    base_seed: int
    xs: tuple
    mode: str
    alpha: float | None
    trials: int
    groups: int

    def __call__(self, trial: int, acc: TrialAccumulator) -> None:
        cfg = EllipticSamplerConfig(self.n, self.tau, self.base_seed)
        X = sample_elliptic(cfg, trial)
        xs = np.asarray(self.xs, dtype=float)
        ok = _accepts(X, xs, self.mode, self.alpha)
        ld = np.atleast_1d(log_abs_det(X, xs))
        g = _group(trial, self.trials, self.groups)
        for k in range(xs.size):
            if ok[k]:
                acc.add_log(f"{k}/{g}", float(ld[k]))
                acc.count(f"accepted/{k}")
            else:
                acc.count(f"rejected/{k}")


@dataclass(frozen=True)
class DEstimate:
    """Log-domain Monte Carlo estimate of ``<Theta |det(X - x)|>``."""

    log_value: float
    std_error: float
    accepted: int
    rejected: int

    @property
    def trials(self) -> int:
        return self.accepted + self.rejected

    @property
    def reliable(self) -> bool:
        return self.accepted >= MIN_ACCEPTED and math.isfinite(self.log_value)

    @property
    def diagnostic(self) -> str:
        if self.accepted == 0:
            return f"all {self.rejected} trials rejected by the constraint"
        if self.accepted < MIN_ACCEPTED:
            return f"only {self.accepted} accepted trials (< {MIN_ACCEPTED})"
        return "ok"


def _jackknife(group_logs: np.ndarray, group_sizes: np.ndarray, combine) -> tuple[float, float]:
    """Full estimate and delete-a-group jackknife standard error.

    ``group_logs[g]`` holds the log-sums of group ``g`` (one row per
    quantity) and ``combine(log_sums, n)`` maps summed logs over ``n``
    trials to the log-estimate.
    """
    G = group_logs.shape[0]
    n = int(group_sizes.sum())
    full = combine(np.array([log_sum_exp(col) for col in group_logs.T]), n)
    if G < 2:
        return full, math.inf
    thetas = np.empty(G)
    for g in range(G):
        rest = np.delete(group_logs, g, axis=0)
        thetas[g] = combine(np.array([log_sum_exp(col) for col in rest.T]), n - int(group_sizes[g]))
    if not np.all(np.isfinite(thetas)):
        return full, math.inf
    se = math.sqrt((G - 1) / G * float(np.sum((thetas - thetas.mean()) ** 2)))
    return full, se


def _group_sizes(trials: int, groups: int) -> np.ndarray:
    g = np.arange(trials) * groups // trials
    return np.bincount(g, minlength=groups)


def _run_det(params, xs, mode, alpha, trials, base_seed, workers, groups):
    if trials < 2:
        raise DomainError(f"trials must be >= 2, got {trials}")
    G = min(int(groups), trials)
    task = _DetTask(params.n, params.tau, int(base_seed), tuple(float(x) for x in xs), mode, alpha, trials, G)
    acc = run_trials_parallel(task, trials, workers)
    logs = np.full((G, len(xs)), -math.inf)
    for g in range(G):
        for k in range(len(xs)):
            logs[g, k] = acc.log_sums.get(f"{k}/{g}", -math.inf)
    return acc, logs, _group_sizes(trials, G)


def estimate_D(
    x: float,
    params: ModelParams,
    mode: str = "unconstrained",
    trials: int = 1000,
    base_seed: int = 0,
    workers: int = 1,
    alpha: float | None = None,
    groups: int = 100,
) -> DEstimate:
    """Monte Carlo mean of ``Theta * |det(X - x I)|`` over the elliptic ensemble.

    Modes: ``unconstrained`` (no Theta), ``stable`` (``x_max(X) < x``) and
    ``alpha_stable`` (``mu_N(H_x) <= alpha``). The mean is formed in the log
    domain. The standard error of the log-estimate comes from a
    delete-a-group jackknife over ``groups`` contiguous blocks of trials,
    which is the ordinary delete-one jackknife when ``trials <= groups``.
    """
    alpha = _check_mode(mode, alpha)
    x = float(x)
    if not math.isfinite(x):
        raise DomainError("x must be finite")
    acc, logs, sizes = _run_det(params, [x], mode, alpha, trials, base_seed, workers, groups)

    def combine(ls, n):
        return float(ls[0]) - math.log(n)

    # the headline value is a single streamed pass over the group sums
    value = log_sum_exp_stream(logs[:, 0]) - math.log(trials)
    _, se = _jackknife(logs, sizes, combine)
    accepted = acc.counters.get("accepted/0", 0)
    rejected = acc.counters.get("rejected/0", 0)
    if accepted == 0:
        value, se = -math.inf, math.inf
    return DEstimate(value, se, accepted, rejected)


def gauss_hermite_grid(params: ModelParams, nodes: int = GH_NODES) -> tuple[np.ndarray, np.ndarray]:
    """Abscissae and weights for ``int f(x) N(m, tau/N)(dx)``."""
    if params.tau <= 0:
        raise DomainError("the Gaussian weight needs tau > 0")
    if nodes < GH_NODES:
        raise DomainError(f"at least {GH_NODES} nodes are required, got {nodes}")
    t, w = np.polynomial.hermite.hermgauss(nodes)
    xs = params.m + math.sqrt(2.0 * params.tau / params.n) * t
    return xs, w / math.sqrt(math.pi)


@dataclass(frozen=True)
class CountEstimate:
    """``ln <N>`` with its jackknife error and per-node determinant estimates."""

    log_value: float
    std_error: float
    nodes: np.ndarray
    node_log_D: np.ndarray
    accepted: np.ndarray
    trials: int

    @property
    def reliable(self) -> bool:
        return bool(np.all(self.accepted >= MIN_ACCEPTED)) and math.isfinite(self.log_value)


def estimate_N_counts(
    params: ModelParams,
    mode: str = "unconstrained",
    trials: int = 1000,
    base_seed: int = 0,
    workers: int = 1,
    alpha: float | None = None,
    nodes: int = GH_NODES,
    groups: int = 100,
) -> CountEstimate:
    """Kac-Rice estimate of the mean number of (alpha-)stable equilibria.

    ``<N> = m^(-N) int D_N(x) exp(-N (x-m)^2 / (2 tau)) / sqrt(2 pi tau / N) dx``
    with the integral done by Gauss-Hermite quadrature matched to the
    Gaussian weight. All nodes share the same sampled matrices, which
    keeps the quadrature smooth and makes the jackknife see the joint error.
    """
    alpha = _check_mode(mode, alpha)
    xs, ws = gauss_hermite_grid(params, nodes)
    acc, logs, sizes = _run_det(params, xs, mode, alpha, trials, base_seed, workers, groups)
    lw = np.log(ws)
    shift = -params.n * math.log(params.m)

    def combine(ls, n):
        return log_sum_exp(lw + ls - math.log(n)) + shift

    value, se = _jackknife(logs, sizes, combine)
    node_logs = np.array([log_sum_exp(logs[:, k]) for k in range(len(xs))]) - math.log(trials)
    accepted = np.array([acc.counters.get(f"accepted/{k}", 0) for k in range(len(xs))])
    return CountEstimate(value, se, xs, node_logs, accepted, trials)


@dataclass(frozen=True)
class _DensityTask:
    n: int
    tau: float
    base_seed: int
    edges: tuple
    x_alpha: float
    window: float

    def __call__(self, trial: int, acc: TrialAccumulator) -> None:
        X = sample_elliptic(EllipticSamplerConfig(self.n, self.tau, self.base_seed), trial)
        s = spectrum(X)
        re = s.eigenvalues.real
        real = s.real_eigs
        acc.histogram("real", self.edges, real)
        acc.histogram("projection", self.edges, re)
        acc.histogram("complex_projection", self.edges, re[~s.is_real])
        acc.observe("n_real", float(real.size))
        acc.count("bulk_real", int(np.count_nonzero(np.abs(real) < self.window)))
        acc.record("x_max", trial, s.x_max)
        acc.record("mu_H", trial, mu_H(s, self.x_alpha))


@dataclass
class EmpiricalDensities:
    """Histogram densities per unit ``x``, scaled so that they integrate to counts."""

    edges: np.ndarray
    real: np.ndarray
    projection: np.ndarray
    complex_projection: np.ndarray
    mean_n_real: float
    bulk_real_density: float
    x_max: np.ndarray
    mu_H: np.ndarray
    x_alpha: float
    trials: int
    accumulator: TrialAccumulator

    @property
    def centers(self) -> np.ndarray:
        return 0.5 * (self.edges[1:] + self.edges[:-1])


def default_edges(tau: float, bins: int = 80) -> np.ndarray:
    edge = 1.0 + tau + 1.0
    return np.linspace(-edge, edge, bins + 1)


def empirical_densities(
    params: ModelParams,
    trials: int,
    base_seed: int = 0,
    workers: int = 1,
    edges=None,
    alpha: float = 0.25,
    bulk_window: float = 1.0,
) -> EmpiricalDensities:
    """Sample ``trials`` matrices and collect eigenvalue statistics.

    ``projection`` bins the real parts of all eigenvalues and
    ``complex_projection`` those of the complex ones only; ``real`` bins
    exactly real eigenvalues. ``bulk_real_density`` is the mean number of
    real eigenvalues in ``|x| < bulk_window`` per unit length.
    """
    if trials < 1:
        raise DomainError(f"trials must be >= 1, got {trials}")
    tau = params.tau
    edges = default_edges(tau) if edges is None else np.asarray(edges, dtype=float)
    span = 2.0 + tau
    if edges[0] > -span or edges[-1] < span or np.any(np.diff(edges) <= 0):
        raise DomainError(f"bin edges must increase and cover [{-span}, {span}]")
    xa = analytic.x_of_alpha(alpha, tau)
    task = _DensityTask(params.n, tau, int(base_seed), tuple(edges.tolist()), xa, float(bulk_window))
    acc = run_trials_parallel(task, trials, workers)
    width = np.diff(edges)

    def dens(key):
        return acc.histograms[key].counts / (trials * width)

    return EmpiricalDensities(
        edges=edges,
        real=dens("real"),
        projection=dens("projection"),
        complex_projection=dens("complex_projection"),
        mean_n_real=acc.mean("n_real"),
        bulk_real_density=acc.counters.get("bulk_real", 0) / (trials * 2.0 * bulk_window),
        x_max=acc.sample_array("x_max"),
        mu_H=acc.sample_array("mu_H"),
        x_alpha=xa,
        trials=trials,
        accumulator=acc,
    )


@dataclass(frozen=True)
class _XmaxTask:
    n: int
    tau: float
    base_seed: int

    def __call__(self, trial: int, acc: TrialAccumulator) -> None:
        X = sample_elliptic(EllipticSamplerConfig(self.n, self.tau, self.base_seed), trial)
        acc.record("x_max", trial, spectrum(X).x_max)


def sample_xmax(n: int, tau: float, trials: int, base_seed: int = 0, workers: int = 1) -> np.ndarray:
    """``x_max`` of ``trials`` independent matrices, in trial order."""
    acc = run_trials_parallel(_XmaxTask(int(n), float(tau), int(base_seed)), trials, workers)
    return acc.sample_array("x_max")


def xmax_exceedance(samples, x: float) -> tuple[float, int]:
    """Empirical ``P(x_max > x)`` and the number of exceedances."""
    samples = np.asarray(samples, dtype=float)
    k = int(np.count_nonzero(samples > x))
    return k / samples.size, k


__all__ = [
    "MODES",
    "DEstimate",
    "CountEstimate",
    "EmpiricalDensities",
    "estimate_D",
    "estimate_N_counts",
    "gauss_hermite_grid",
    "empirical_densities",
    "default_edges",
    "sample_xmax",
    "xmax_exceedance",
]
