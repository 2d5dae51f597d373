"""Named producers of predicted and measured values.

Scenarios refer to these by name, which keeps scenarios pure data. Each
producer is tagged with the side it belongs to: ``analytic`` producers only
call :mod:`eqatlas.analytic` and :mod:`eqatlas.numerics`; ``monte_carlo``
producers measure through :mod:`eqatlas.ensemble`.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .. import analytic as an
from ..analytic import ModelParams
from ..errors import DomainError
from ..numerics import QuadratureSpec, igamma_ratio, integrate
from ..ensemble import estimators as est
from ..ensemble import energy
from .laplace import laplace_sanity
from .model import Curve

_NU_QUAD = QuadratureSpec(abs_tol=1e-14, rel_tol=1e-12, max_subdivisions=400)


def derive_seed(seed: int, label: str) -> int:
    """64-bit sub-seed for one Monte Carlo experiment inside a run."""
    h = hashlib.blake2b(f"{int(seed)}:{label}".encode(), digest_size=8).digest()
    return int.from_bytes(h, "little")


@dataclass
class RunContext:
    """Seed, worker count, shared cache and collected curves of one scenario run."""

    seed: int
    workers: int = 1
    cache: dict = field(default_factory=dict)
    curves: dict = field(default_factory=dict)
    frame_requests: list = field(default_factory=list)

    def add_curve(self, curve: Curve) -> None:
        self.curves[curve.name] = curve

    def cached(self, key: tuple, fn: Callable):
        full = (self.seed,) + key
        if full not in self.cache:
            self.cache[full] = fn()
        return self.cache[full]

    def sub_seed(self, label: str) -> int:
        return derive_seed(self.seed, label)

    # -- shared Monte Carlo runs ------------------------------------------

    def densities(self, n: int, tau: float, trials: int, alpha: float = 0.25):
        label = f"densities/{n}/{tau!r}/{trials}/{alpha!r}"
        self.frame_requests.append((n, tau, trials, self.sub_seed(label)))
        return self.cached(
            ("densities", n, tau, trials, alpha),
            lambda: est.empirical_densities(
                ModelParams(1.0, tau, n), trials, self.sub_seed(label), self.workers, alpha=alpha
            ),
        )

    def xmax(self, n: int, tau: float, trials: int) -> np.ndarray:
        label = f"xmax/{n}/{tau!r}/{trials}"
        return self.cached(
            ("xmax", n, tau, trials),
            lambda: est.sample_xmax(n, tau, trials, self.sub_seed(label), self.workers),
        )

    def det(self, x: float, n: int, tau: float, mode: str, trials: int):
        label = f"det/{x!r}/{n}/{tau!r}/{mode}/{trials}"
        return self.cached(
            ("det", x, n, tau, mode, trials),
            lambda: est.estimate_D(x, ModelParams(1.0, tau, n), mode, trials, self.sub_seed(label), self.workers),
        )

    def counts(self, m: float, tau: float, n: int, mode: str, trials: int):
        label = f"counts/{m!r}/{tau!r}/{n}/{mode}/{trials}"
        return self.cached(
            ("counts", m, tau, n, mode, trials),
            lambda: est.estimate_N_counts(ModelParams(m, tau, n), mode, trials, self.sub_seed(label), self.workers),
        )


class SourceFailure(Exception):
    """A producer could not deliver a trustworthy number; ``reason`` is a short code."""

    def __init__(self, reason: str, value: float = math.nan):
        super().__init__(reason)
        self.reason = reason
        self.value = value


REGISTRY: dict[str, tuple[str, Callable]] = {}


def source(name: str, provenance: str):
    def deco(fn):
        REGISTRY[name] = (provenance, fn)
        return fn

    return deco


def evaluate(name: str, ctx: RunContext, args: dict) -> float:
    if name not in REGISTRY:
        raise DomainError(f"unknown value source {name!r}")
    _, fn = REGISTRY[name]
    return float(fn(ctx, **args))


def provenance_of(name: str) -> str:
    return REGISTRY[name][0]


# ---------------------------------------------------------------------------
# analytic side


@source("const", "analytic")
def _const(ctx, value):
    return value


@source("phi_edge_jump", "analytic")
def _phi_edge_jump(ctx, taus):
    # inside and outside branches evaluated at the same edge point
    worst = 0.0
    for t in taus:
        e = 1.0 + t
        inside = e * e / (2.0 * e) - 0.5
        outside = float(an._phi_outside(np.float64(e), t))
        worst = max(worst, abs(inside - outside), abs(an.phi_eq(e, t) - outside))
    return worst


@source("phi_edge_value_error", "analytic")
def _phi_edge_value_error(ctx, taus):
    return max(max(abs(an.phi_eq(s * (1.0 + t), t) - t / 2.0) for s in (1.0, -1.0)) for t in taus)


@source("psi_edge_value", "analytic")
def _psi_edge_value(ctx, taus):
    return max(abs(an.psi_r(1.0 + t, t)) for t in taus)


@source("psi_min_increment", "analytic")
def _psi_min_increment(ctx, taus, points, span):
    worst = math.inf
    for t in taus:
        x = np.linspace(1.0 + t, 1.0 + t + span, points)
        worst = min(worst, float(np.min(np.diff(an.psi_r(x, t)))))
    return worst


@source("sigma_st_form_gap", "analytic")
def _sigma_st_form_gap(ctx, taus, points):
    ms = np.linspace(0.01, 0.99, points)
    return max(
        abs(an.sigma_st(m, t, "bracket") - an.sigma_st(m, t, "difference")) for t in taus for m in ms
    )


@source("sigma_st_alpha0_gap", "analytic")
def _sigma_st_alpha0_gap(ctx, taus, points):
    ms = np.linspace(0.01, 0.99, points)
    return max(abs(an.sigma_st_alpha(m, t, 0.0) - an.sigma_st(m, t)) for t in taus for m in ms)


@source("m_alpha_endpoint_error", "analytic")
def _m_alpha_endpoint_error(ctx):
    return max(abs(an.m_alpha(a) - v) for a, v in ((0.0, 1.0), (0.5, 0.0), (1.0, -1.0)))


@source("alpha_roundtrip_error", "analytic")
def _alpha_roundtrip_error(ctx, points):
    return max(abs(an.alpha_m(an.m_alpha(a)) - a) for a in np.linspace(0.0, 1.0, points))


@source("nu_integral", "analytic")
def _nu_integral(ctx, m, tau, n):
    p = ModelParams(m, tau, n)
    peak = an.alpha_m(m)
    f = lambda a: float(an.nu_density(a, p))  # noqa: E731
    return integrate(f, 0.0, 1.0, _NU_QUAD, points=[peak])


@source("sqrt_2n_over_pi", "analytic")
def _sqrt_2n_over_pi(ctx, n):
    return math.sqrt(2.0 * n / math.pi)


@source("p_real_bulk", "analytic")
def _p_real_bulk(ctx, n, tau):
    return an.p_real_bulk(n, tau)


@source("psi_r", "analytic")
def _psi_r(ctx, x, tau):
    return an.psi_r(x, tau)


@source("phi_eq", "analytic")
def _phi_eq(ctx, x, tau):
    return an.phi_eq(x, tau)


@source("sigma_eq", "analytic")
def _sigma_eq(ctx, m):
    return an.sigma_eq(m)


@source("folded_normal_mean", "analytic")
def _folded_normal_mean(ctx, x, tau):
    # E|X - x| for X ~ N(0, 1 + tau)
    s = math.sqrt(1.0 + tau)
    ax = abs(x)
    return s * math.sqrt(2.0 / math.pi) * math.exp(-ax * ax / (2.0 * s * s)) + ax * math.erf(ax / (s * math.sqrt(2.0)))


@source("p_real_edge", "analytic")
def _p_real_edge(ctx, delta, n, tau):
    return an.p_real_edge(delta, n, tau)


@source("p_real_edge_tail_asymptote", "analytic")
def _p_real_edge_tail(ctx, delta, n, tau):
    return an.p_real_edge_tail_asymptote(delta, n, tau)


@source("p_complex_edge", "analytic")
def _p_complex_edge(ctx, delta, n, tau):
    return an.p_complex_edge(delta, n, tau)


@source("p_complex_edge_asymptote", "analytic")
def _p_complex_edge_asym(ctx, delta, n, tau):
    return an.p_complex_edge_asymptote(delta, n, tau)


@source("igamma_ratio", "analytic")
def _igamma(ctx, n, a):
    return igamma_ratio(n, a)


@source("laplace_rate", "analytic")
def _laplace_rate(ctx, a, c, p, q, eps, n):
    rows = laplace_sanity(a, c, p, q, eps, [n // 4, n // 2, n])
    ctx.add_curve(
        Curve(f"laplace_a{a}_c{c}_p{p}_q{q}", "N", [r.n for r in rows], "rate", [r.rate for r in rows], "analytic")
    )
    return rows[-1].rate


# ---------------------------------------------------------------------------
# Monte Carlo side


@source("j_tau_grid", "monte_carlo")
def _j_tau_grid(ctx, tau, grid, shift=0.0):
    def run():
        mu = energy.elliptic_grid_measure(tau, grid)
        if shift:
            mu = mu.translate(shift)
        return energy.j_tau(mu, tau)

    return ctx.cached(("j_tau", tau, grid, shift), run)


@source("j_tau_shift_gain", "monte_carlo")
def _j_tau_shift_gain(ctx, tau, grid, shift):
    return _j_tau_grid(ctx, tau, grid, shift) - _j_tau_grid(ctx, tau, grid, 0.0)


def _density_curves(ctx, d, n, tau, trials):
    c = d.centers
    tag = f"n{n}_tau{tau}_t{trials}"
    ctx.add_curve(Curve(f"real_density_{tag}", "x", c, "density", d.real, "monte_carlo"))
    ctx.add_curve(Curve(f"projection_density_{tag}", "x", c, "density", d.projection, "monte_carlo"))
    ctx.add_curve(
        Curve(f"complex_projection_density_{tag}", "x", c, "density", d.complex_projection, "monte_carlo")
    )
    if n > 0:
        ctx.add_curve(Curve(f"semicircle_{tag}", "x", c, "density", an.p_complex_bulk(c, n, tau), "analytic"))


@source("mean_real_count", "monte_carlo")
def _mean_real_count(ctx, n, tau, trials):
    d = ctx.densities(n, tau, trials)
    _density_curves(ctx, d, n, tau, trials)
    return d.mean_n_real


@source("bulk_real_density", "monte_carlo")
def _bulk_real_density(ctx, n, tau, trials, window=1.0):
    d = ctx.densities(n, tau, trials)
    _density_curves(ctx, d, n, tau, trials)
    return d.bulk_real_density


@source("projection_l1_over_n", "monte_carlo")
def _projection_l1(ctx, n, tau, trials, part="all"):
    """``int |empirical - semicircle| dx / N`` over the histogram range.

    ``part="all"`` uses the real parts of every eigenvalue, ``"complex"``
    only those of the non-real ones.
    """
    d = ctx.densities(n, tau, trials)
    _density_curves(ctx, d, n, tau, trials)
    emp = d.projection if part == "all" else d.complex_projection
    # exact cell averages of the semicircle, so binning adds no error of its own
    cdf = _semicircle_cdf(d.edges, n, tau)
    ref = np.diff(cdf) / np.diff(d.edges)
    return float(np.sum(np.abs(emp - ref) * np.diff(d.edges)) / n)


def _semicircle_cdf(x, n, tau):
    e = 1.0 + tau
    u = np.clip(np.asarray(x) / e, -1.0, 1.0)
    return n * (0.5 + (u * np.sqrt(1.0 - u * u) + np.arcsin(u)) / math.pi)


@source("mean_mu_h", "monte_carlo")
def _mean_mu_h(ctx, n, tau, trials, alpha):
    d = ctx.densities(n, tau, trials, alpha)
    return float(np.mean(d.mu_H))


@source("median_x_max", "monte_carlo")
def _median_x_max(ctx, n, tau, trials):
    return float(np.median(ctx.xmax(n, tau, trials)))


@source("xmax_tail_slope", "monte_carlo")
def _xmax_tail_slope(ctx, ns, tau, x, trials):
    rates = []
    for n in ns:
        p, k = est.xmax_exceedance(ctx.xmax(n, tau, trials), x)
        if k == 0:
            raise SourceFailure("no-exceedances")
        rates.append(-math.log(p))
    ctx.add_curve(Curve(f"xmax_neglogp_tau{tau}_x{x}", "N", ns, "-lnP", rates, "monte_carlo"))
    ctx.add_curve(
        Curve(f"xmax_rate_tau{tau}_x{x}", "N", ns, "N*psi_r", [n * an.psi_r(x, tau) for n in ns], "analytic")
    )
    slope, _ = np.polyfit(np.asarray(ns, float), np.asarray(rates), 1)
    return float(slope)


def _require_reliable(e):
    if not e.reliable:
        raise SourceFailure("unreliable-estimate", e.log_value)


@source("det_mean", "monte_carlo")
def _det_mean(ctx, x, n, tau, trials, mode="unconstrained"):
    e = ctx.det(x, n, tau, mode, trials)
    _require_reliable(e)
    return math.exp(e.log_value)


@source("det_rate", "monte_carlo")
def _det_rate(ctx, x, n, tau, trials, mode="unconstrained"):
    e = ctx.det(x, n, tau, mode, trials)
    _require_reliable(e)
    return e.log_value / n


@source("count_rate", "monte_carlo")
def _count_rate(ctx, m, tau, n, trials, mode="unconstrained"):
    e = ctx.counts(m, tau, n, mode, trials)
    if not e.reliable:
        raise SourceFailure("unreliable-estimate", e.log_value / n)
    return e.log_value / n


@source("count_mean", "monte_carlo")
def _count_mean(ctx, m, tau, n, trials, mode="unconstrained"):
    e = ctx.counts(m, tau, n, mode, trials)
    if not e.reliable:
        raise SourceFailure("unreliable-estimate", math.exp(e.log_value))
    return math.exp(e.log_value)
