"""Seeded sampler for the real elliptic ensemble.

Each trial owns an independent Philox stream keyed by the pair
``(base_seed, trial)``: the 128-bit Philox key is ``base_seed * 2**64 + trial``
and the counter starts at zero, so draw ``k`` of trial ``t`` is a fixed
function of ``(base_seed, t, k)``. Matrices are therefore reproducible no
matter which worker or in which order trials are evaluated.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import DomainError

_MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class EllipticSamplerConfig:
    n: int
    tau: float
    base_seed: int = 0

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise DomainError(f"n must be a positive integer, got {self.n}")
        if not 0 <= self.tau < 1:
            raise DomainError(f"tau must lie in [0, 1), got {self.tau}")
        if int(self.base_seed) != self.base_seed or not 0 <= self.base_seed <= _MASK64:
            raise DomainError(f"base_seed must be an unsigned 64-bit integer, got {self.base_seed}")


def trial_generator(base_seed: int, trial: int) -> np.random.Generator:
    """Independent generator for one trial."""
    if not 0 <= trial <= _MASK64:
        raise DomainError(f"trial index out of range: {trial}")
    return np.random.Generator(np.random.Philox(key=(int(base_seed) << 64) | int(trial)))


def sample_elliptic(cfg: EllipticSamplerConfig, trial: int) -> np.ndarray:
    """Draw the ``trial``-th matrix of the real elliptic ensemble.

    ``X = a (G + G^T)/sqrt(2) + b (G - G^T)/sqrt(2)`` with
    ``a = sqrt((1+tau)/2)``, ``b = sqrt((1-tau)/2)`` and iid ``G_ij ~ N(0, 1/N)``,
    which gives ``<X_ij X_nm> = (delta_in delta_jm + tau delta_jn delta_im) / N``.
    """
    n = cfg.n
    g = trial_generator(cfg.base_seed, trial).standard_normal((n, n))
    g /= math.sqrt(n)
    a = math.sqrt((1.0 + cfg.tau) / 2.0)
    b = math.sqrt((1.0 - cfg.tau) / 2.0)
    sym = (g + g.T) / math.sqrt(2.0)
    asym = (g - g.T) / math.sqrt(2.0)
    return a * sym + b * asym
