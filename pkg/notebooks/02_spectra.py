# %% [markdown]
# # Spectra of the real elliptic ensemble
#
# Sample matrices, compute spectra from the real Schur form and compare
# histograms with the limiting densities.

# %%
import numpy as np

from eqatlas import analytic as an
from eqatlas.analytic import ModelParams
from eqatlas.ensemble import EllipticSamplerConfig, empirical_densities, sample_elliptic, spectrum

cfg = EllipticSamplerConfig(n=200, tau=0.5, base_seed=1)
s = spectrum(sample_elliptic(cfg, trial=0))
print("real eigenvalues:", s.n_real, "x_max:", s.x_max)

# %% [markdown]
# Histogram densities over 40 matrices. The real-part projection should
# follow the semicircle of radius 1 + tau, scaled to N eigenvalues.

# %%
d = empirical_densities(ModelParams(1.0, 0.5, 200), trials=40, base_seed=1)
semi = an.p_complex_bulk(d.centers, 200, 0.5)
width = np.diff(d.edges)
print("L1 / N:", np.sum(np.abs(d.projection - semi) * width) / 200)
print("bulk real density:", d.bulk_real_density, "limit:", an.p_real_bulk(200, 0.5))
print("mean mu_H(x(0.25)):", d.mu_H.mean())

# %% [markdown]
# Real eigenvalues near the edge: the crossover profile in the scaling
# variable delta, against its bulk and tail limits.

# %%
for delta in (-6, -2, 0, 2, 4):
    print(delta, an.p_real_edge(delta, 100, 0.5))
print("bulk", an.p_real_bulk(100, 0.5), "tail asymptote at 4", an.p_real_edge_tail_asymptote(4, 100, 0.5))
