"""Discrete probability measures on the plane and the elliptic energy functional."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from ..errors import DomainError
from .spectra import Spectrum

_SUM_TOL = 1e-12


@dataclass(frozen=True)
class AtomicMeasure:
    """Finite sum of weighted point masses ``sum_i w_i delta(z - z_i)``."""

    points: np.ndarray
    weights: np.ndarray
    symmetric: bool = False

    def __post_init__(self):
        z = np.asarray(self.points, dtype=complex).ravel()
        w = np.asarray(self.weights, dtype=float).ravel()
        if z.shape != w.shape:
            raise DomainError("points and weights must have the same length")
        if np.any(w < 0) or not np.all(np.isfinite(w)) or not np.all(np.isfinite(z)):
            raise DomainError("weights must be finite and non-negative, points finite")
        if abs(math.fsum(w.tolist()) - 1.0) > _SUM_TOL:
            raise DomainError(f"weights must sum to 1, got {math.fsum(w.tolist())!r}")
        object.__setattr__(self, "points", z)
        object.__setattr__(self, "weights", w)
        if self.symmetric and not conjugation_closed(z, w):
            raise DomainError("measure flagged symmetric is not closed under conjugation")

    def __len__(self) -> int:
        return int(self.points.size)

    def translate(self, dx: float) -> "AtomicMeasure":
        """Shift along the real axis; conjugation symmetry is preserved."""
        return AtomicMeasure(self.points + float(dx), self.weights, self.symmetric)


def conjugation_closed(z: np.ndarray, w: np.ndarray, tol: float = 1e-12) -> bool:
    """True when ``{(z_i, w_i)}`` and ``{(conj z_i, w_i)}`` coincide as multisets."""
    key = np.lexsort((z.imag, z.real))
    zc = z.conj()
    keyc = np.lexsort((zc.imag, zc.real))
    return bool(
        np.allclose(z[key], zc[keyc], rtol=0.0, atol=tol)
        and np.allclose(w[key], w[keyc], rtol=0.0, atol=tol)
    )


def elliptic_grid_measure(tau: float, n: int = 200) -> AtomicMeasure:
    """Cell-centred ``n x n`` discretisation of the uniform law on the ellipse.

    The grid spans the bounding box ``[-(1+tau), 1+tau] x [-(1-tau), 1-tau]``;
    cells whose centre lies inside the ellipse get equal weight.
    """
    if not 0 <= tau < 1:
        raise DomainError(f"tau must lie in [0, 1), got {tau}")
    if n < 2:
        raise DomainError("n must be >= 2")
    a, b = 1.0 + tau, 1.0 - tau
    u = (np.arange(n) + 0.5) / n * 2.0 - 1.0
    X, Y = np.meshgrid(a * u, b * u, indexing="ij")
    inside = (X / a) ** 2 + (Y / b) ** 2 <= 1.0
    z = X[inside] + 1j * Y[inside]
    w = np.full(z.size, 1.0 / z.size)
    return AtomicMeasure(z, w, symmetric=True)


def from_spectrum(s: Spectrum) -> AtomicMeasure:
    """Empirical spectral measure ``(1/N) sum_j delta(z - z_j)``."""
    return AtomicMeasure(s.eigenvalues, np.full(s.n, 1.0 / s.n), symmetric=True)


def j_tau(measure: AtomicMeasure, tau: float, block: int = 256) -> float:
    """Elliptic rate functional evaluated on an atomic measure.

    ``J = (1/2) sum_i w_i (x_i^2/(1+tau) + y_i^2/(1-tau))
          - (1/2) sum_{i != j} w_i w_j ln|z_i - z_j| - 3/8``.

    The diagonal is dropped and no self-energy correction is made, so for an
    ``n``-point uniform discretisation the result carries a bias of order
    ``ln(n)/n``. The pair sum runs over row blocks to bound memory.
    Coincident atoms with positive weights make the log kernel infinite;
    the result is then ``+inf`` and a RuntimeWarning is issued.
    """
    if not 0 <= tau < 1:
        raise DomainError(f"tau must lie in [0, 1), got {tau}")
    if len(measure) < 2:
        raise DomainError("j_tau needs at least two atoms")
    if not measure.symmetric and not conjugation_closed(measure.points, measure.weights):
        raise DomainError("j_tau needs a conjugation-symmetric measure")
    x = measure.points.real
    y = measure.points.imag
    w = measure.weights
    confine = 0.5 * float(np.dot(w, x * x / (1.0 + tau) + y * y / (1.0 - tau)))

    n = x.size
    partial = []
    for i0 in range(0, n, block):
        i1 = min(n, i0 + block)
        d2 = (x[i0:i1, None] - x[None, :]) ** 2 + (y[i0:i1, None] - y[None, :]) ** 2
        rows = np.arange(i1 - i0)
        d2[rows, rows + i0] = 1.0  # log(1) = 0 removes the diagonal
        if np.any(d2 == 0.0):
            bad = np.argwhere(d2 == 0.0)
            r, c = bad[0]
            if w[i0 + r] > 0 and w[c] > 0:
                warnings.warn(
                    f"coincident atoms {i0 + r} and {c}: log kernel is -inf",
                    RuntimeWarning,
                    stacklevel=2,
                )
                return math.inf
            d2[d2 == 0.0] = 1.0
        # 0.5 * ln(d^2) = ln|z_i - z_j|
        partial.append(float(w[i0:i1] @ (np.log(d2) @ w)) * 0.5)
    log_energy = math.fsum(partial)
    return confine - 0.5 * log_energy - 0.375


__all__ = ["AtomicMeasure", "conjugation_closed", "elliptic_grid_measure", "from_spectrum", "j_tau"]
