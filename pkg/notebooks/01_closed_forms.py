# %% [markdown]
# # Closed-form landscape quantities
#
# Log-potential of the elliptic law, the rate function of the largest real
# eigenvalue, and the complexities that split the (m, tau) plane into phases.

# %%
import numpy as np

from eqatlas import analytic as an
from eqatlas.analytic import ModelParams

tau = 0.5
xs = np.linspace(0.0, 3.0, 7)
for x, v in zip(xs, an.phi_eq(xs, tau)):
    print(f"phi_eq({x:.1f}) = {v:.6f}")

# %% [markdown]
# The potential is continuous at the edge x = 1 + tau, where it equals tau/2.

# %%
edge = 1 + tau
print(an.phi_eq(edge, tau), tau / 2)
print(an.phi_eq(edge - 1e-9, tau) - an.phi_eq(edge + 1e-9, tau))

# %% [markdown]
# Rate function of x_max beyond the edge, and the matching tail density.

# %%
for x in (1.6, 1.7, 2.0):
    print(x, an.psi_r(x, tau), an.p_real_tail(x, 80, tau))

# %% [markdown]
# Complexity of all equilibria and of stable ones; tau0(m) is where the
# stable complexity changes sign.

# %%
m = 0.5
print("sigma_eq", an.sigma_eq(m))
print("sigma_st", an.sigma_st(m, tau))
print("tau0", an.tau0(m))
for t in (0.3, 0.5, 0.7):
    print(t, an.classify_phase(ModelParams(m, t)))

# %% [markdown]
# Instability index: m_alpha and its inverse, and the index density at
# finite N peaking at alpha_m(m).

# %%
for a in (0.0, 0.1, 0.25, 0.5, 1.0):
    print(a, an.m_alpha(a))
p = ModelParams(0.6, 0.8, 625)
alphas = np.linspace(0, 1, 2001)
nu = an.nu_density(alphas, p)
print("peak at", alphas[np.argmax(nu)], "alpha_m =", an.alpha_m(0.6))
print("integral", np.trapezoid(nu, alphas))
