"""Closed-form large-N theory of equilibria in the elliptic random-field model.

The model is reduced to the scaled relaxation strength ``m`` and the
potentiality parameter ``tau`` (plus the dimension ``N``). Everything here
is a pure function; anything involving ``(x - sqrt(x^2 - 4 tau)) / (2 tau)``
is coded through its conjugate ``2 / (x + sqrt(x^2 - 4 tau))`` so that
``tau = 0`` is an exact limit instead of a 0/0.
"""

from __future__ import annotations

import enum
import functools
import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .numerics import QuadratureSpec, RootBracket, erf, erfc, find_root, integrate

__all__ = [
    "ModelParams",
    "EllipticSupport",
    "PhaseRegion",
    "rho_eq",
    "phi_eq",
    "phi_eq_prime",
    "psi_r",
    "psi_r_prime",
    "q_r",
    "p_real_tail",
    "xmax_tail_log_prob",
    "p_real_bulk",
    "p_real_edge",
    "p_complex_bulk",
    "q_c",
    "p_complex_tail",
    "p_complex_edge",
    "p_real_edge_tail_asymptote",
    "p_complex_edge_asymptote",
    "sigma_eq",
    "sigma_eq_profile",
    "sigma_st",
    "tau0",
    "m_alpha",
    "alpha_m",
    "x_of_alpha",
    "mu_eq_right",
    "sigma_st_alpha",
    "tau0_alpha",
    "nu_density",
    "ln_p_st_annealed",
    "ln_n_eq",
    "sigma_gamma",
    "alpha_of_params",
    "classify_phase",
    "is_phase_boundary",
]


@dataclass(frozen=True)
class ModelParams:
    """Reduced parameters: relaxation strength ``m``, potentiality ``tau``, dimension ``n``."""

    m: float
    tau: float
    n: int = 1

    def __post_init__(self):
        if not (math.isfinite(self.m) and self.m > 0):
            raise DomainError(f"m must be positive, got {self.m}")
        if not 0 <= self.tau < 1:
            raise DomainError(f"tau must lie in [0, 1), got {self.tau}")
        if int(self.n) != self.n or self.n < 1:
            raise DomainError(f"n must be a positive integer, got {self.n}")


@dataclass(frozen=True)
class EllipticSupport:
    """Support of the limiting eigenvalue law: ellipse with semi-axes ``1 +/- tau``."""

    tau: float

    def __post_init__(self):
        _check_tau(self.tau)

    @property
    def semi_axis_x(self) -> float:
        return 1.0 + self.tau

    @property
    def semi_axis_y(self) -> float:
        return 1.0 - self.tau

    @property
    def density(self) -> float:
        return 1.0 / (math.pi * (1.0 - self.tau**2))

    def contains(self, x, y):
        return x**2 / self.semi_axis_x**2 + y**2 / self.semi_axis_y**2 <= 1.0


class PhaseRegion(enum.Enum):
    ABSOLUTE_STABILITY = "AbsoluteStability"
    RELATIVE_INSTABILITY = "RelativeInstability"
    ABSOLUTE_INSTABILITY = "AbsoluteInstability"

    def __str__(self) -> str:
        return self.value


def _check_tau(tau: float, allow_zero: bool = True) -> float:
    tau = float(tau)
    lo_ok = tau >= 0 if allow_zero else tau > 0
    if not (lo_ok and tau < 1):
        rng = "[0, 1)" if allow_zero else "(0, 1)"
        raise DomainError(f"tau must lie in {rng}, got {tau}")
    return tau


def _check_m_unit(m: float) -> float:
    m = float(m)
    if not 0 < m < 1:
        raise DomainError(f"m must lie in (0, 1), got {m}")
    return m


def _check_alpha(alpha: float) -> float:
    alpha = float(alpha)
    if not 0 <= alpha <= 1:
        raise DomainError(f"alpha must lie in [0, 1], got {alpha}")
    return alpha


def _check_n(N) -> int:
    if int(N) != N or N < 1:
        raise DomainError(f"N must be a positive integer, got {N}")
    return int(N)


def _conj_root(x, tau):
    """``2 / (x + sqrt(x^2 - 4 tau))``, i.e. ``(x - sqrt(x^2 - 4 tau)) / (2 tau)`` for x >= 2 sqrt(tau)."""
    return 2.0 / (x + np.sqrt(x * x - 4.0 * tau))


# ---------------------------------------------------------------------------
# elliptic law and its log-potential


def rho_eq(x, y, tau: float):
    """Density of the elliptic law; the boundary counts as inside."""
    tau = _check_tau(tau)
    sup = EllipticSupport(tau)
    out = np.where(sup.contains(np.asarray(x, float), np.asarray(y, float)), sup.density, 0.0)
    return float(out) if out.ndim == 0 else out


def _phi_outside(ax, tau):
    s = np.sqrt(ax * ax - 4.0 * tau)
    w = ax + s
    # (ax - s)^2 / (8 tau) == 2 tau / w^2
    return 2.0 * tau / (w * w) + np.log(w / 2.0)


def phi_eq(x, tau: float):
    """Log-potential ``int ln|x - z| dmu_eq(z)`` of the elliptic law at real ``x``."""
    tau = _check_tau(tau)
    ax = np.abs(np.asarray(x, dtype=float))
    edge = 1.0 + tau
    inside = ax <= edge
    safe = np.where(inside, edge, ax)
    # x^2/(2(1+tau)) - 1/2 rearranged so the edge value tau/2 comes out exact
    inner = (ax - edge) * (ax + edge) / (2.0 * edge) + 0.5 * tau
    out = np.where(inside, inner, _phi_outside(safe, tau))
    return float(out) if out.ndim == 0 else out


def phi_eq_prime(x, tau: float):
    """Derivative of :func:`phi_eq`; odd in ``x``."""
    tau = _check_tau(tau)
    x = np.asarray(x, dtype=float)
    ax = np.abs(x)
    edge = 1.0 + tau
    inside = ax <= edge
    safe = np.where(inside, edge, ax)
    out = np.sign(x) * np.where(inside, ax / edge, _conj_root(safe, tau))
    return float(out) if out.ndim == 0 else out


# ---------------------------------------------------------------------------
# real eigenvalues and the largest real part


def _check_outside(x, tau, strict: bool):
    x = np.asarray(x, dtype=float)
    edge = 1.0 + tau
    bad = (x <= edge) if strict else (x < edge)
    if np.any(bad) or np.any(~np.isfinite(x)):
        op = ">" if strict else ">="
        raise DomainError(f"x must be {op} 1 + tau = {edge}")
    return x


def psi_r(x, tau: float):
    """Rate function of the largest real eigenvalue beyond the spectral edge."""
    tau = _check_tau(tau)
    x = _check_outside(x, tau, strict=False)
    out = -0.5 + x * x / (2.0 * (1.0 + tau)) - _phi_outside(x, tau)
    out = np.maximum(out, 0.0)
    return float(out) if out.ndim == 0 else out


def psi_r_prime(x, tau: float):
    tau = _check_tau(tau)
    x = _check_outside(x, tau, strict=False)
    out = x / (1.0 + tau) - _conj_root(x, tau)
    return float(out) if out.ndim == 0 else out


def q_r(x, tau: float, N: int):
    """Pre-exponential factor of the real-eigenvalue density for ``x > 1 + tau``."""
    tau = _check_tau(tau)
    N = _check_n(N)
    x = _check_outside(x, tau, strict=True)
    s = np.sqrt(x * x - 4.0 * tau)
    out = np.sqrt(N / (2.0 * math.pi * (1.0 + tau)) / (s * (x + s)))
    return float(out) if out.ndim == 0 else out


def p_real_tail(x, N: int, tau: float):
    """Mean density of real eigenvalues (equivalently of ``x_max``) beyond the edge."""
    out = q_r(x, tau, N) * np.exp(-N * psi_r(x, tau))
    return float(out) if np.ndim(out) == 0 else out


def xmax_tail_log_prob(x, N: int, tau: float):
    """Leading-order ``ln P(x_max > x) = -N psi_r(x)`` for ``x > 1 + tau``."""
    return -_check_n(N) * psi_r(x, tau)


def p_real_bulk(N: int, tau: float) -> float:
    """Flat bulk density of real eigenvalues, ``sqrt(N / (2 pi (1 - tau^2)))``."""
    N = _check_n(N)
    tau = _check_tau(tau)
    return math.sqrt(N / (2.0 * math.pi * (1.0 - tau * tau)))


def p_real_edge(delta: float, N: int, tau: float) -> float:
    """Real-eigenvalue density at ``x = (1 + tau)(1 + delta / sqrt(N))``."""
    delta = float(delta)
    if not math.isfinite(delta):
        raise DomainError("delta must be finite")
    bulk = p_real_bulk(N, tau)
    dt = delta * math.sqrt((1.0 + tau) / (1.0 - tau))
    shape = erfc(dt * math.sqrt(2.0)) + math.exp(-dt * dt) * (1.0 + erf(dt)) / math.sqrt(2.0)
    return 0.5 * bulk * shape


# ---------------------------------------------------------------------------
# real-line projection of the complex eigenvalues


def p_complex_bulk(x, N: int, tau: float):
    """Semicircular projection density of the complex eigenvalues.

    Integrates to ``N`` over ``[-(1 + tau), 1 + tau]`` and vanishes outside.
    """
    N = _check_n(N)
    tau = _check_tau(tau)
    edge = 1.0 + tau
    u = np.asarray(x, dtype=float) / edge
    out = 2.0 * N / (math.pi * edge) * np.sqrt(np.clip(1.0 - u * u, 0.0, None))
    return float(out) if out.ndim == 0 else out


def q_c(x, tau: float, N: int):
    """Pre-exponential factor of the complex projection density beyond the edge.

    Diverges like ``(1 - b)^(-3/2)`` as ``x`` approaches ``1 + tau``.
    """
    tau = _check_tau(tau)
    N = _check_n(N)
    x = _check_outside(x, tau, strict=True)
    b = _conj_root(x, tau) ** 2
    out = (
        math.sqrt(N / (2.0 * (1.0 + tau)))
        * b * b
        / (math.pi * (1.0 - b) ** 1.5 * np.sqrt(1.0 - tau * b))
    )
    return float(out) if out.ndim == 0 else out


def p_complex_tail(x, N: int, tau: float):
    """Complex projection density for ``x > 1 + tau``; decays at twice the real rate."""
    out = q_c(x, tau, N) * np.exp(-2.0 * N * psi_r(x, tau))
    return float(out) if np.ndim(out) == 0 else out


_EDGE_QUAD = QuadratureSpec(abs_tol=0.0, rel_tol=1e-12, max_subdivisions=400)


def p_complex_edge(delta: float, N: int, tau: float, spec: QuadratureSpec = _EDGE_QUAD) -> float:
    """Complex projection density at ``x = (1 + tau)(1 + delta / sqrt(N))``."""
    delta = float(delta)
    if not math.isfinite(delta):
        raise DomainError("delta must be finite")
    N = _check_n(N)
    tau = _check_tau(tau)
    k = (1.0 + tau) / (1.0 - tau)
    pref = math.sqrt(2.0) * N**0.75 / math.pi**1.5 / math.sqrt(1.0 - tau * tau)
    if delta > 0:
        # pull exp(-2 k delta^2) out so the quadrature sees an O(1) integrand
        log_scale = -2.0 * k * delta * delta
        val = integrate(
            lambda q: math.exp(-0.5 * k * q * (q + 4.0 * delta)) * math.sqrt(q),
            0.0, math.inf, spec, points=[1.0 / (2.0 * k * delta)],
        )
        return pref * val * math.exp(log_scale)
    centre = -2.0 * delta
    val = integrate(
        lambda q: math.exp(-0.5 * k * (q - centre) ** 2) * math.sqrt(q),
        0.0, math.inf, spec, points=[centre] if centre > 0 else None,
    )
    return pref * val


def p_real_edge_tail_asymptote(delta: float, N: int, tau: float) -> float:
    """Large positive ``delta`` form of :func:`p_real_edge`: ``bulk e^(-delta_tau^2) / sqrt(2)``."""
    dt = float(delta) * math.sqrt((1.0 + tau) / (1.0 - tau))
    return p_real_bulk(N, tau) * math.exp(-dt * dt) / math.sqrt(2.0)


def p_complex_edge_asymptote(delta: float, N: int, tau: float) -> float:
    """Leading ``|delta| -> infinity`` behaviour of :func:`p_complex_edge`.

    Inside (``delta < 0``) it is ``2^(3/2) N^(3/4) |delta|^(1/2) / (pi (1+tau))``,
    which is the semicircle expanded near its edge; outside it is
    ``N^(3/4) (1-tau) delta^(-3/2) exp(-2 k delta^2) / (4 pi (1+tau)^2)`` with
    ``k = (1+tau)/(1-tau)``.
    """
    delta = float(delta)
    N = _check_n(N)
    tau = _check_tau(tau)
    if delta == 0 or not math.isfinite(delta):
        raise DomainError("the edge asymptotes need a finite nonzero delta")
    n34 = N**0.75
    if delta < 0:
        return 2.0**1.5 * n34 * math.sqrt(-delta) / (math.pi * (1.0 + tau))
    k = (1.0 + tau) / (1.0 - tau)
    return n34 * (1.0 - tau) / (4.0 * math.pi * (1.0 + tau) ** 2) * delta**-1.5 * math.exp(-2.0 * k * delta * delta)


# ---------------------------------------------------------------------------
# complexity exponents


def sigma_eq(m: float) -> float:
    """Complexity of all equilibria, ``(m^2 - 1)/2 - ln m``."""
    m = float(m)
    if not m > 0:
        raise DomainError(f"m must be positive, got {m}")
    return 0.5 * (m * m - 1.0) - math.log(m)


def sigma_eq_profile(x, params: ModelParams):
    """Exponent of the Kac-Rice integrand, ``phi_eq(x) - (x - m)^2/(2 tau) - ln m``."""
    if params.tau <= 0:
        raise DomainError("sigma_eq_profile needs tau > 0: the Gaussian weight degenerates at tau = 0")
    x = np.asarray(x, dtype=float)
    out = phi_eq(x, params.tau) - (x - params.m) ** 2 / (2.0 * params.tau) - math.log(params.m)
    return float(out) if np.ndim(out) == 0 else out


def sigma_st(m: float, tau: float, form: str = "bracket") -> float:
    """Complexity of stable equilibria for ``0 < m < 1``, ``0 < tau < 1``.

    ``form="bracket"`` evaluates ``-[1 - m + ln m + (m-1)^2/(2 tau)]``;
    ``form="difference"`` evaluates ``sigma_eq(m) - (1+tau)/(2 tau) (1-m)^2``.
    The two are algebraically identical.
    """
    m = _check_m_unit(m)
    tau = _check_tau(tau, allow_zero=False)
    if form == "bracket":
        return -(1.0 - m + math.log(m) + (m - 1.0) ** 2 / (2.0 * tau))
    if form == "difference":
        return sigma_eq(m) - (1.0 + tau) / (2.0 * tau) * (1.0 - m) ** 2
    raise ValueError(f"unknown form {form!r}")


def tau0(m: float) -> float:
    """Zero-level curve of ``sigma_st``: relative vs absolute instability."""
    m = _check_m_unit(m)
    return -0.5 * (1.0 - m) ** 2 / (1.0 - m + math.log(m))


def alpha_m(m: float) -> float:
    """Fraction of the elliptic law to the right of ``x = (1 + tau) m``.

    ``(1/pi)(arccos m - m sqrt(1 - m^2))``, evaluated through the half-angle
    ``u = 2 arccos m`` as ``(u - sin u)/(2 pi)`` with a series for small
    ``u`` to avoid the cancellation near ``m = 1``.
    """
    m = float(m)
    if not -1 <= m <= 1:
        raise DomainError(f"m must lie in [-1, 1], got {m}")
    u = 4.0 * math.asin(math.sqrt((1.0 - m) / 2.0))
    if u < 0.05:
        u2 = u * u
        u_minus_sin = u * u2 / 6.0 * (1.0 - u2 / 20.0 * (1.0 - u2 / 42.0 * (1.0 - u2 / 72.0)))
    else:
        u_minus_sin = u - math.sin(u)
    return min(1.0, max(0.0, u_minus_sin / (2.0 * math.pi)))


def m_alpha(alpha: float) -> float:
    """Inverse of :func:`alpha_m` on ``[-1, 1]``; decreasing from 1 to -1."""
    return _m_alpha(_check_alpha(alpha))


@functools.lru_cache(maxsize=8192)
def _m_alpha(alpha: float) -> float:
    # pure function of one float, so memoising is safe; grids reuse values a lot
    if alpha == 0.0:
        return 1.0
    if alpha == 1.0:
        return -1.0
    return find_root(lambda m: alpha_m(m) - alpha, RootBracket(-1.0, 1.0), tol=1e-15)


def x_of_alpha(alpha: float, tau: float) -> float:
    """Abscissa leaving a fraction ``alpha`` of the elliptic law on its right."""
    tau = _check_tau(tau)
    return (1.0 + tau) * m_alpha(alpha)


def mu_eq_right(x: float, tau: float) -> float:
    """Elliptic-law mass of the half plane ``Re z >= x``."""
    tau = _check_tau(tau)
    edge = 1.0 + tau
    if x >= edge:
        return 0.0
    if x <= -edge:
        return 1.0
    return alpha_m(x / edge)


def sigma_st_alpha(m: float, tau: float, alpha: float) -> float:
    """Complexity of equilibria whose instability index is at most ``alpha``."""
    m = _check_m_unit(m)
    tau = _check_tau(tau, allow_zero=False)
    alpha = _check_alpha(alpha)
    base = sigma_eq(m)
    if alpha >= 0.5:
        return base
    ma = m_alpha(alpha)
    if m < ma:
        return base - (1.0 + tau) / (2.0 * tau) * (ma - m) ** 2
    return base


def tau0_alpha(m: float, alpha: float) -> float:
    """Zero-level curve of ``sigma_st_alpha``, defined for ``0 < m <= m_alpha``."""
    alpha = _check_alpha(alpha)
    m = float(m)
    ma = m_alpha(alpha)
    if not 0 < m <= ma or m >= 1:
        raise DomainError(f"tau0_alpha needs 0 < m <= m_alpha = {ma} and m < 1, got m={m}")
    return (ma - m) ** 2 / (-1.0 - ma * ma - 2.0 * math.log(m) + 2.0 * m * ma)


def nu_density(alpha, params: ModelParams):
    """Annealed density of the instability index at typical equilibria."""
    m = _check_m_unit(params.m)
    tau = _check_tau(params.tau, allow_zero=False)
    N = params.n
    c = math.sqrt(N * math.pi * (1.0 + tau) / (8.0 * tau * (1.0 - m * m)))
    rate = N * (1.0 + tau) / (2.0 * tau)
    a = np.asarray(alpha, dtype=float)
    ma = np.array([m_alpha(v) for v in a.ravel()]).reshape(a.shape)
    out = c * np.exp(-rate * (ma - m) ** 2)
    return float(out) if out.ndim == 0 else out


def ln_p_st_annealed(params: ModelParams) -> float:
    """Log of the annealed probability that an equilibrium is stable."""
    m = _check_m_unit(params.m)
    tau = _check_tau(params.tau, allow_zero=False)
    return -params.n * (1.0 + tau) * (1.0 - m) ** 2 / (2.0 * tau)


def ln_n_eq(params: ModelParams) -> float:
    """Leading-order ``ln <N_eq>``: zero for ``m > 1``, prefactor plus ``N sigma_eq`` below."""
    if params.m > 1:
        return 0.0
    if params.m == 1:
        raise DomainError("ln_n_eq is not defined at the transition m = 1")
    tau = params.tau
    return 0.5 * math.log(2.0 * (1.0 + tau) / (1.0 - tau)) + params.n * sigma_eq(params.m)


def sigma_gamma(gamma, delta: float, tau: float, N: int):
    """Density of the rescaled index ``gamma = alpha N^(3/4)`` at ``m = 1 - delta/sqrt(N)``."""
    N = _check_n(N)
    tau = _check_tau(tau, allow_zero=False)
    delta = float(delta)
    if not 0 < delta < math.sqrt(N):
        raise DomainError(f"delta must lie in (0, sqrt(N)) = (0, {math.sqrt(N)}), got {delta}")
    if not 3 <= delta <= math.sqrt(N) / 3:
        warnings.warn(
            f"delta={delta} is outside 3 <= delta <= sqrt(N)/3; the transition-tail form is unreliable there",
            stacklevel=2,
        )
    g = np.asarray(gamma, dtype=float)
    if np.any(g < 0):
        raise DomainError("gamma must be >= 0")
    pref = math.sqrt(math.pi * (1.0 + tau) / (16.0 * tau * delta))
    bracket = delta - 0.5 * (1.5 * math.pi * g) ** (2.0 / 3.0)
    out = pref * np.exp(-(1.0 + tau) / (2.0 * tau) * bracket**2)
    return float(out) if out.ndim == 0 else out


def alpha_of_params(m: float, tau: float) -> float:
    """Index ``alpha`` whose zero-level line ``tau0_alpha`` passes through ``(m, tau)``.

    Zero on and above ``tau0(m)`` and in the stable phase ``m >= 1``.
    """
    m = float(m)
    tau = _check_tau(tau, allow_zero=False)
    if m >= 1:
        return 0.0
    m = _check_m_unit(m)
    ma = m + math.sqrt(2.0 * tau * sigma_eq(m) / (1.0 + tau))
    if ma >= 1.0:
        return 0.0
    return alpha_m(ma)


def classify_phase(params: ModelParams) -> PhaseRegion:
    """Region of the (m, tau) phase diagram; ``tau >= tau0(m)`` counts as relative instability."""
    if params.m >= 1:
        return PhaseRegion.ABSOLUTE_STABILITY
    if params.tau >= tau0(params.m):
        return PhaseRegion.RELATIVE_INSTABILITY
    return PhaseRegion.ABSOLUTE_INSTABILITY


def is_phase_boundary(params: ModelParams, tol: float = 1e-12) -> bool:
    """True within ``tol`` of ``m = 1`` or of the curve ``tau = tau0(m)``."""
    if abs(params.m - 1.0) <= tol:
        return True
    if params.m < 1:
        return abs(params.tau - tau0(params.m)) <= tol
    return False
