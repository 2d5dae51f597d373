"""Spectra of real matrices via the real Schur form."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import lapack

from ..errors import DecompositionError, DomainError


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalues of one real matrix.

    ``is_real`` marks eigenvalues coming from 1x1 diagonal blocks of the
    real Schur form; the others come in exact conjugate pairs from 2x2
    blocks. No tolerance on imaginary parts is involved.
    """

    eigenvalues: np.ndarray
    is_real: np.ndarray
    ordered_real_parts: np.ndarray = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "ordered_real_parts", np.sort(self.eigenvalues.real)[::-1].copy())

    @property
    def n(self) -> int:
        return int(self.eigenvalues.size)

    @property
    def real_eigs(self) -> np.ndarray:
        return self.eigenvalues.real[self.is_real]

    @property
    def complex_eigs(self) -> np.ndarray:
        return self.eigenvalues[~self.is_real]

    @property
    def n_real(self) -> int:
        return int(np.count_nonzero(self.is_real))

    @property
    def x_max(self) -> float:
        return float(self.ordered_real_parts[0])


def _noop_select(*_):
    return 0


def spectrum(X) -> Spectrum:
    """Eigenvalues of ``X`` from LAPACK's real Schur decomposition (``dgees``).

    Raises DecompositionError if the QR iteration fails; the exception
    carries the eigenvalues that did converge.
    """
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or X.shape[0] != X.shape[1]:
        raise DomainError(f"expected a square matrix, got shape {X.shape}")
    if not np.all(np.isfinite(X)):
        raise DomainError("matrix entries must be finite")
    n = X.shape[0]
    T, _sdim, wr, wi, _vs, _work, info = lapack.dgees(_noop_select, X, compute_v=0, sort_t=0)
    if info != 0:
        partial = wr[info:] + 1j * wi[info:] if info > 0 else None
        raise DecompositionError(f"real Schur decomposition failed (info={info})", partial)
    sub = np.zeros(n, dtype=bool)
    if n > 1:
        nz = np.diagonal(T, -1) != 0.0
        # a nonzero subdiagonal entry T[i+1, i] opens a 2x2 block at rows i, i+1
        sub[:-1] |= nz
        sub[1:] |= nz
    is_real = ~sub
    ev = np.empty(n, dtype=complex)
    ev.real = wr
    ev.imag = np.where(is_real, 0.0, wi)
    return Spectrum(ev, is_real)


def x_max(s: Spectrum) -> float:
    """Largest real part."""
    return s.x_max


def kth_real_part(s: Spectrum, k: int) -> float:
    """``x_k`` in the descending order ``x_1 >= x_2 >= ... >= x_N`` (1-based)."""
    if not 1 <= k <= s.n:
        raise IndexError(f"k must lie in 1..{s.n}, got {k}")
    return float(s.ordered_real_parts[k - 1])


def mu_H(s: Spectrum, x: float) -> float:
    """Fraction of eigenvalues with real part ``>= x``."""
    return float(np.count_nonzero(s.eigenvalues.real >= x)) / s.n


def log_abs_det(X, x: float = 0.0):
    """``ln|det(X - x I)|`` from an LU factorisation with partial pivoting.

    Works on a single matrix or a stack; exactly singular shifts give ``-inf``.
    Passing an array of shifts for a single matrix evaluates all of them.
    """
    X = np.asarray(X, dtype=float)
    shifts = np.asarray(x, dtype=float)
    n = X.shape[-1]
    eye = np.eye(n)
    if shifts.ndim == 0:
        A = X - float(shifts) * eye
    else:
        A = X[..., None, :, :] - shifts[..., :, None, None] * eye
    _, logabs = np.linalg.slogdet(A)
    return float(logabs) if np.ndim(logabs) == 0 else logabs


def log_abs_char_poly(s: Spectrum, x: float) -> float:
    """``sum_j ln|z_j - x|``, the eigenvalue route to :func:`log_abs_det`."""
    with np.errstate(divide="ignore"):
        return float(np.sum(np.log(np.abs(s.eigenvalues - x))))


def conjugation_closed(s: Spectrum) -> bool:
    c = s.complex_eigs
    return bool(np.array_equal(np.sort_complex(c), np.sort_complex(c.conj())))


__all__ = [
    "Spectrum",
    "spectrum",
    "x_max",
    "kth_real_part",
    "mu_H",
    "log_abs_det",
    "log_abs_char_poly",
    "conjugation_closed",
]
