"""Numerical check that ``(1/N) ln int_0^eps exp(-a N^2 t^p + c N t^q) dt`` decays to zero."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import optimize

from ..errors import DomainError
from ..numerics import QuadratureSpec, integrate

_SPEC = QuadratureSpec(abs_tol=0.0, rel_tol=1e-10, max_subdivisions=400)


@dataclass(frozen=True)
class LaplaceRow:
    n: int
    rate: float
    log_integral: float


def _log_integral(N: int, a: float, c: float, p: float, q: float, eps: float) -> float:
    # t = s * (a N^2)^(-1/p) puts the confining term at -s^p
    scale = (a * N * N) ** (-1.0 / p)
    kappa = c * N * scale**q
    upper = eps / scale

    def g(s):
        return -(s**p) + kappa * s**q

    # maximum of the exponent on [0, upper]
    grid = np.linspace(0.0, upper, 2049)
    i = int(np.argmax(g(grid)))
    lo, hi = grid[max(i - 1, 0)], grid[min(i + 1, grid.size - 1)]
    s_star = grid[i]
    if hi > lo:
        res = optimize.minimize_scalar(lambda s: -g(s), bounds=(lo, hi), method="bounded")
        if g(res.x) > g(s_star):
            s_star = float(res.x)
    top = g(s_star)
    pts = [s_star] if 0 < s_star < upper else None
    val = integrate(lambda s: math.exp(g(s) - top), 0.0, upper, _SPEC, pts)
    return math.log(scale) + top + math.log(val)


def laplace_sanity(a: float, c: float, p: float, q: float, eps: float, ns) -> list[LaplaceRow]:
    """Table of ``(N, (1/N) ln I(N))`` for ``I = int_0^eps exp(-a N^2 t^p + c N t^q) dt``.

    The integral is evaluated in the variable ``s = (a N^2)^(1/p) t`` with
    the maximum of the exponent factored out, so it stays finite for any N.
    """
    if not (a > 0 and p > 0 and q > 0 and eps > 0):
        raise DomainError("laplace_sanity needs a, p, q, eps > 0")
    rows = []
    for N in ns:
        N = int(N)
        if N < 1:
            raise DomainError(f"N must be >= 1, got {N}")
        li = _log_integral(N, float(a), float(c), float(p), float(q), float(eps))
        li = float(li)
        rows.append(LaplaceRow(N, li / N, li))
    return rows


__all__ = ["LaplaceRow", "laplace_sanity"]
