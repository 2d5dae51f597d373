# %% [markdown]
# # Determinant averages and equilibrium counts
#
# Mean |det(X - x)| over the ensemble, its exponential rate, and the
# Gauss-Hermite estimate of the mean number of equilibria.

# %%
import math

from eqatlas import analytic as an
from eqatlas.analytic import ModelParams
from eqatlas.ensemble import estimate_D, estimate_N_counts

est = estimate_D(2.0, ModelParams(1.0, 0.5, 32), trials=500, base_seed=3)
print("(1/N) ln D:", est.log_value / 32, "+-", est.std_error / 32, "limit:", an.phi_eq(2.0, 0.5))

# %% [markdown]
# With the stability constraint almost every sample is rejected once x sits
# inside the spectrum; the estimator reports that instead of returning a number.

# %%
stable = estimate_D(1.0, ModelParams(1.0, 0.5, 16), "stable", trials=500)
print(stable.accepted, stable.rejected, stable.reliable, stable.diagnostic)

# %% [markdown]
# Counting equilibria. For m > 1 there is a single one on average.

# %%
c = estimate_N_counts(ModelParams(2.0, 0.5, 8), trials=2000, base_seed=4)
print("mean count:", math.exp(c.log_value))
c = estimate_N_counts(ModelParams(0.5, 0.5, 16), trials=2000, base_seed=4)
print("(1/N) ln count:", c.log_value / 16, "sigma_eq:", an.sigma_eq(0.5))
