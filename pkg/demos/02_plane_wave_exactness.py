# %% [markdown]
# # Plane waves: exact ensemble traces against the leading closed forms
#
# For plane-wave modes the kernels are 0/1 deltas, so the ensemble averages
# of R(k) and its covariances are exact rationals.

# %%
from bec_typicality.algebra import exact_ensemble_cov, exact_mean_R, exact_quantum_cov_avg
from bec_typicality.analytics import (plane_wave_ensemble_cov_leading, plane_wave_mean_leading,
                                      plane_wave_quantum_cov_leading)
from bec_typicality.fock import make_subspace
from bec_typicality.modes import PlaneWaveModel, plane_wave_kernel

model = PlaneWaveModel(1)
kern = plane_wave_kernel(model)
peak = (2,)

# %% [markdown]
# The mean fringe peak differs from N^2/4 - n^2/12 by exactly N + 1/12.

# %%
for N, n in [(4, 3), (100, 11), (1000, 101)]:
    spec = make_subspace(N, n)
    exact = exact_mean_R(spec, kern, peak)
    print(N, n, exact, exact - plane_wave_mean_leading(spec, model, peak))

# %% [markdown]
# Two particles in one Fock state: the quantum variance of R(2k0) is 1.

# %%
print(exact_quantum_cov_avg(make_subspace(2, 1), kern, peak, peak))

# %% [markdown]
# Quantum and ensemble covariances at the peak against their leading forms.

# %%
for N, n in [(400, 11), (2000, 101), (2000, 1001)]:
    spec = make_subspace(N, n)
    q = exact_quantum_cov_avg(spec, kern, peak, peak)
    e = exact_ensemble_cov(spec, kern, peak, peak)
    print(f"N={N} n={n}: quantum {float(q / plane_wave_quantum_cov_leading(spec, model, peak, peak)):.5f}"
          f"  ensemble {float(e / plane_wave_ensemble_cov_leading(spec, model, peak, peak)):.5f}")
