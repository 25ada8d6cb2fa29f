# %% [markdown]
# # Expanding Gaussian clouds
#
# Two Gaussians separated by 2 alpha widths expand for a time t; the fringe
# half-wavevector is k0(t) = alpha t / (1 + t^2).

# %%
import numpy as np

from bec_typicality.analytics import fig1_curve, fig2_slice
from bec_typicality.modes import GaussianModel

model = GaussianModel(5.0, 50.0)
two_k0 = model.fringe_wavevector

# %% [markdown]
# Mean R / N^2: a central peak of height 1 and two side peaks at +-2k0 close
# to one quarter of it.

# %%
ks, curve = fig1_curve(model)
for k in (0.0, -two_k0, two_k0):
    i = np.argmin(np.abs(ks - k))
    print(f"k = {ks[i]:+.5f}  R/N^2 = {curve[i]:.5f}")

# %% [markdown]
# The dominant quantum-variance slice at k2 = 2k0 for n well below and well
# above N^(3/4).  Both peak at the fringe wavevector.

# %%
for regime, n in (("low", 11), ("high", 5001)):
    ks, vals = fig2_slice(model, regime, 10_000, n)
    print(f"{regime:4s} argmax k = {ks[np.argmax(vals)]:+.5f}  (2k0 = {two_k0:.5f})")
