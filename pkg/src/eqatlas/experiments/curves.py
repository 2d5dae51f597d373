"""Analytic curves shared by figure emission and the ``density`` command."""

from __future__ import annotations

import math

import numpy as np

from .. import analytic as an
from ..analytic import ModelParams
from ..errors import BranchPointError, DomainError
from .model import Curve

DENSITY_KINDS = ("index", "real_eig", "complex_proj", "xmax_tail")


def index_density_curve(m: float, tau: float, n: int, alphas) -> Curve:
    a = np.asarray(alphas, dtype=float)
    y = an.nu_density(a, ModelParams(m, tau, n))
    return Curve(f"nu_m{m:g}_tau{tau:g}_n{n}", "alpha", a, "nu", np.atleast_1d(y), "analytic",
                 ["nu_density"] * a.size)


def _pieces(x: np.ndarray, edge: float, stitch: bool, what: str) -> np.ndarray:
    """Boolean mask of points beyond the edge; refuses to mix pieces unless ``stitch``."""
    outside = np.abs(x) > edge
    if outside.any() and (~outside).any() and not stitch:
        raise BranchPointError(
            f"{what} grid straddles the branch point |x| = 1 + tau = {edge}; pass stitch to join the pieces",
            edge,
        )
    return outside


def real_eig_curve(tau: float, n: int, grid, variable: str = "delta", stitch: bool = False) -> Curve:
    """Real-eigenvalue density on a ``delta`` (edge scaling) or ``x`` grid."""
    g = np.asarray(grid, dtype=float)
    if variable == "delta":
        y = [an.p_real_edge(d, n, tau) for d in g]
        return Curve(f"real_eig_edge_tau{tau:g}_n{n}", "delta", g, "density", y, "analytic", ["p_real_edge"] * g.size)
    if variable != "x":
        raise DomainError(f"variable must be 'delta' or 'x', got {variable!r}")
    edge = 1.0 + tau
    out = _pieces(g, edge, stitch, "real_eig")
    y, f = [], []
    for xi, o in zip(g, out):
        if o:
            y.append(an.p_real_tail(abs(xi), n, tau))
            f.append("p_real_tail")
        else:
            y.append(an.p_real_bulk(n, tau))
            f.append("p_real_bulk")
    return Curve(f"real_eig_tau{tau:g}_n{n}", "x", g, "density", y, "analytic", f)


def complex_proj_curve(tau: float, n: int, grid, variable: str = "delta", stitch: bool = False) -> Curve:
    """Projected complex-eigenvalue density on a ``delta`` or ``x`` grid."""
    g = np.asarray(grid, dtype=float)
    if variable == "delta":
        y = [an.p_complex_edge(d, n, tau) for d in g]
        return Curve(f"complex_proj_edge_tau{tau:g}_n{n}", "delta", g, "density", y, "analytic",
                     ["p_complex_edge"] * g.size)
    if variable != "x":
        raise DomainError(f"variable must be 'delta' or 'x', got {variable!r}")
    edge = 1.0 + tau
    out = _pieces(g, edge, stitch, "complex_proj")
    y, f = [], []
    for xi, o in zip(g, out):
        if o:
            y.append(an.p_complex_tail(abs(xi), n, tau))
            f.append("p_complex_tail")
        else:
            y.append(an.p_complex_bulk(xi, n, tau))
            f.append("p_complex_bulk")
    return Curve(f"complex_proj_tau{tau:g}_n{n}", "x", g, "density", y, "analytic", f)


def xmax_tail_curve(tau: float, n: int, grid) -> Curve:
    """``ln`` of the density of ``x_max`` beyond the edge."""
    g = np.asarray(grid, dtype=float)
    edge = 1.0 + tau
    inside = g <= edge
    if inside.all():
        raise DomainError(f"xmax_tail needs x > 1 + tau = {edge}")
    if inside.any():
        raise BranchPointError(f"xmax_tail grid reaches the spectral edge x = {edge}", edge)
    y = np.log(an.q_r(g, tau, n)) - n * np.asarray(an.psi_r(g, tau))
    return Curve(f"xmax_tail_tau{tau:g}_n{n}", "x", g, "ln_density", np.atleast_1d(y), "analytic",
                 ["p_real_tail"] * g.size)


def sigma_eq_profile_curve(m: float = 0.3, tau: float = 0.5, xs=None) -> Curve:
    xs = np.linspace(-2.5, 2.5, 501) if xs is None else np.asarray(xs, dtype=float)
    y = an.sigma_eq_profile(xs, ModelParams(m, tau))
    return Curve(f"sigma_eq_profile_m{m:g}_tau{tau:g}", "x", xs, "sigma_eq", y, "analytic")


def m_alpha_curve(alphas=None) -> Curve:
    a = np.linspace(0.0, 1.0, 201) if alphas is None else np.asarray(alphas, dtype=float)
    return Curve("m_alpha", "alpha", a, "m_alpha", [an.m_alpha(v) for v in a], "analytic")


def tau0_alpha_curve(alpha: float, points: int = 400) -> Curve:
    ma = an.m_alpha(alpha)
    top = min(ma, 1.0)
    ms = np.linspace(0.0, top, points + 1)[1:]
    if ms[-1] >= 1.0:
        ms = ms[:-1]
    y = [an.tau0(m) if alpha == 0 else an.tau0_alpha(m, alpha) for m in ms]
    return Curve(f"tau0_alpha{alpha:g}", "m", ms, "tau0", y, "analytic")


def alpha_heat_map(ms, taus) -> list[tuple[float, float, float]]:
    return [(float(m), float(t), an.alpha_of_params(m, t)) for t in taus for m in ms]


def grid_csv(rows, header) -> str:
    lines = [",".join(header)]
    for r in rows:
        lines.append(",".join(v if isinstance(v, str) else repr(float(v)) for v in r))
    return "\n".join(lines) + "\n"


__all__ = [
    "DENSITY_KINDS",
    "index_density_curve",
    "real_eig_curve",
    "complex_proj_curve",
    "xmax_tail_curve",
    "sigma_eq_profile_curve",
    "m_alpha_curve",
    "tau0_alpha_curve",
    "alpha_heat_map",
    "grid_csv",
]
