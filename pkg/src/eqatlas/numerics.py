"""Special functions and small numerical kernels.

Everything here is a pure function of its arguments. The heavy lifting
(adaptive Gauss-Kronrod quadrature, Brent's method, the libm error
function) is delegated to scipy and the standard library; this module
fixes the contracts the rest of the package relies on: domain checks,
log-domain evaluation, deterministic semi-infinite mappings and a
uniform error vocabulary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np
from scipy import integrate as _spi
from scipy import optimize as _spo
from scipy.special import gammaln

from .errors import BracketError, ConvergenceError, DomainError

__all__ = [
    "QuadratureSpec",
    "RootBracket",
    "erf",
    "erfc",
    "erfc_scaled_tail",
    "igamma_ratio",
    "integrate",
    "find_root",
    "log_sum_exp_stream",
    "log_sum_exp",
]


@dataclass(frozen=True)
class QuadratureSpec:
    abs_tol: float = 1e-13
    rel_tol: float = 1e-11
    max_subdivisions: int = 200

    def __post_init__(self):
        if self.abs_tol < 0 or self.rel_tol < 0:
            raise DomainError("quadrature tolerances must be non-negative")
        if self.abs_tol == 0 and self.rel_tol == 0:
            raise DomainError("at least one quadrature tolerance must be positive")
        if int(self.max_subdivisions) < 1:
            raise DomainError("max_subdivisions must be >= 1")


@dataclass(frozen=True)
class RootBracket:
    lo: float
    hi: float

    def __post_init__(self):
        if not self.lo < self.hi:
            raise DomainError(f"bracket needs lo < hi, got [{self.lo}, {self.hi}]")


DEFAULT_QUADRATURE = QuadratureSpec()


def _check_finite(x: float, name: str = "x") -> float:
    x = float(x)
    if not math.isfinite(x):
        raise DomainError(f"{name} must be finite, got {x}")
    return x


def erf(x: float) -> float:
    """Error function, odd and bounded by one."""
    x = _check_finite(x)
    # math.erf is symmetric in libm already; the explicit reflection makes
    # erf(-x) == -erf(x) hold bit-for-bit on every platform.
    return -math.erf(-x) if x < 0 else math.erf(x)


def erfc(x: float) -> float:
    """Complementary error function, accurate in the far right tail."""
    return math.erfc(_check_finite(x))


def erfc_scaled_tail(y: float, N: int, tau: float) -> float:
    """Leading large-argument asymptote of ``erfc(sqrt(2/(1-tau^2)) |y| sqrt(N))``.

    Returns ``sqrt((1-tau^2)/(2 pi N)) / |y| * exp(-2 N y^2 / (1-tau^2))``.
    The relative error is ``1/(2 z^2)`` to first order in the erfc argument
    ``z``, so it drops below one percent once ``z`` exceeds about 7.1.
    """
    y = _check_finite(y, "y")
    if y <= 0:
        raise DomainError(f"y must be positive, got {y}")
    if N < 1:
        raise DomainError(f"N must be >= 1, got {N}")
    if not 0 <= tau < 1:
        raise DomainError(f"tau must lie in [0, 1), got {tau}")
    s2 = 1.0 - tau * tau
    return math.sqrt(s2 / (2 * math.pi * N)) / y * math.exp(-2.0 * N * y * y / s2)


def igamma_ratio(N: int, a: float) -> float:
    """Regularised upper incomplete gamma ``Gamma(N-1, N a) / Gamma(N-1)``.

    For integer order the ratio is the finite Poisson sum
    ``exp(-N a) * sum_{k=0}^{N-2} (N a)^k / k!``. Terms are built in log
    space and summed exactly (``math.fsum``) after shifting by the largest
    term, so nothing overflows for N in the tens of thousands.
    """
    if int(N) != N or N < 2:
        raise DomainError(f"N must be an integer >= 2, got {N}")
    N = int(N)
    a = float(a)
    if not a >= 0:
        raise DomainError(f"a must be >= 0, got {a}")
    if a == 0.0:
        return 1.0
    lam = N * a
    if lam < N - 1:
        # the ratio is close to one here; summing the complementary Poisson
        # tail k >= N-1 instead keeps the result monotone to the last bit
        return min(1.0, max(0.0, 1.0 - _poisson_upper_tail(N - 1, lam)))
    k = np.arange(N - 1, dtype=float)
    return min(1.0, max(0.0, _sum_log_terms(_log_poisson_pmf(k, lam))))


_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)


def _stirling_remainder(k: np.ndarray) -> np.ndarray:
    """``ln k! - (k + 1/2) ln k + k - ln sqrt(2 pi)`` for ``k >= 1``."""
    out = np.empty_like(k)
    small = k <= 15
    ks = k[small]
    out[small] = gammaln(ks + 1.0) - (ks + 0.5) * np.log(ks) + ks - _HALF_LOG_2PI
    kb = k[~small]
    r = 1.0 / (kb * kb)
    out[~small] = (1.0 / 12 - r * (1.0 / 360 - r * (1.0 / 1260 - r / 1680))) / kb
    return out


def _log_poisson_pmf(k: np.ndarray, lam: float) -> np.ndarray:
    """``k ln(lam) - ln k! - lam`` without the cancellation between large terms.

    For ``k >= 1`` this is ``-ln sqrt(2 pi k) - remainder(k) - D(k, lam)`` with
    the deviance ``D = k ln(k/lam) - (k - lam) >= 0`` evaluated through
    ``log1p`` (Loader's saddle-point form). The direct form loses about
    ``eps * lam`` in absolute terms, which is 1e-11 relative at ``lam = 1e4``.
    """
    out = np.full(k.shape, -lam)
    pos = k > 0
    kp = k[pos]
    diff = kp - lam
    # log1p only where k is near lam; far away the plain logs do not cancel
    near = np.abs(diff) < lam
    ratio = np.log(kp) - math.log(lam)
    ratio[near] = np.log1p(diff[near] / lam)
    dev = kp * ratio - diff
    out[pos] = -_HALF_LOG_2PI - 0.5 * np.log(kp) - _stirling_remainder(kp) - dev
    return out


def _sum_log_terms(logt: np.ndarray) -> float:
    top = float(logt.max())
    if top == -math.inf:
        return 0.0
    rel = logt - top
    # terms under 1e-18 of the peak cannot move a double-precision sum
    rel = rel[rel > math.log(1e-18)]
    return math.exp(top) * math.fsum(np.exp(rel).tolist())


def _poisson_upper_tail(k0: int, lam: float) -> float:
    """``P(Poisson(lam) >= k0)`` for ``lam < k0``; terms decrease from ``k0`` on."""
    parts = []
    start = k0
    while True:
        k = np.arange(start, start + 256, dtype=float)
        logt = _log_poisson_pmf(k, lam)
        parts.append(logt)
        if start == k0 and logt[0] < -800:
            break
        if logt[-1] < logt[0] + math.log(1e-18) or logt[-1] < -800:
            break
        start += 256
    return _sum_log_terms(np.concatenate(parts))


def integrate(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    spec: QuadratureSpec = DEFAULT_QUADRATURE,
    points: Sequence[float] | None = None,
) -> float:
    """Adaptive quadrature of ``f`` over ``[lo, hi]``.

    Infinite endpoints are mapped onto the unit interval with
    ``q = lo + t/(1-t)`` (and its mirror image), so the same adaptive rule
    handles both cases and interior ``points`` can still be declared.

    Raises ConvergenceError carrying the best estimate when the
    subdivision budget runs out.
    """
    lo = float(lo)
    hi = float(hi)
    if math.isnan(lo) or math.isnan(hi):
        raise DomainError("integration limits must not be NaN")
    if lo == hi:
        return 0.0
    if lo > hi:
        return -integrate(f, hi, lo, spec, points)
    pts = sorted(float(p) for p in (points or ()) if lo < p < hi)

    if math.isinf(lo) and math.isinf(hi):
        left = [p for p in pts if p < 0]
        right = [p for p in pts if p > 0]
        return integrate(f, lo, 0.0, spec, left) + integrate(f, 0.0, hi, spec, right)

    if math.isinf(hi):
        def g(t: float) -> float:
            u = 1.0 - t
            return f(lo + t / u) / (u * u)

        mapped = [(p - lo) / (1.0 + p - lo) for p in pts]
        return _quad(g, 0.0, 1.0, spec, mapped)

    if math.isinf(lo):
        def g(t: float) -> float:
            u = 1.0 - t
            return f(hi - t / u) / (u * u)

        mapped = [(hi - p) / (1.0 + hi - p) for p in pts]
        return _quad(g, 0.0, 1.0, spec, mapped)

    return _quad(f, lo, hi, spec, pts)


def _quad(g, lo, hi, spec: QuadratureSpec, pts) -> float:
    kw = dict(
        epsabs=spec.abs_tol,
        epsrel=max(spec.rel_tol, 0.0),
        limit=int(spec.max_subdivisions),
        full_output=1,
    )
    if pts:
        kw["points"] = pts
    res = _spi.quad(g, lo, hi, **kw)
    value, err = float(res[0]), float(res[1])
    if len(res) > 3:
        raise ConvergenceError(f"quadrature did not converge: {res[3]}", value, err)
    return value


def find_root(f: Callable[[float], float], bracket: RootBracket, tol: float = 1e-12) -> float:
    """Zero of ``f`` inside ``bracket`` by Brent's method.

    Brent falls back to bisection whenever the interpolation step leaves
    the bracket, so the iteration sequence is fixed by the inputs alone.
    """
    flo = f(bracket.lo)
    if flo == 0:
        return bracket.lo
    fhi = f(bracket.hi)
    if fhi == 0:
        return bracket.hi
    if np.sign(flo) == np.sign(fhi):
        raise BracketError(
            f"no sign change on [{bracket.lo}, {bracket.hi}]: f={flo!r}, {fhi!r}"
        )
    return float(_spo.brentq(f, bracket.lo, bracket.hi, xtol=tol, rtol=4 * np.finfo(float).eps, maxiter=500))


def log_sum_exp_stream(values: Iterable[float]) -> float:
    """``log(sum(exp(v)))`` computed in one pass with a running maximum.

    An empty input (or one made only of ``-inf``) returns ``-inf``, the log
    of an empty sum.
    """
    top = -math.inf
    acc = 0.0
    for v in values:
        v = float(v)
        if v == -math.inf:
            continue
        if math.isnan(v) or v == math.inf:
            raise DomainError(f"log-domain values must be finite or -inf, got {v}")
        if v > top:
            acc = acc * math.exp(top - v) + 1.0
            top = v
        else:
            acc += math.exp(v - top)
    if top == -math.inf:
        return -math.inf
    return top + math.log(acc)


def log_sum_exp(values) -> float:
    """Vectorised counterpart of :func:`log_sum_exp_stream` for arrays."""
    v = np.asarray(values, dtype=float).ravel()
    if v.size == 0:
        return -math.inf
    top = float(v.max())
    if top == -math.inf:
        return -math.inf
    return top + math.log(float(np.sum(np.exp(v - top))))
