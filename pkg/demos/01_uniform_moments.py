# %% [markdown]
# # Moments of the uniform ensemble on H_n
#
# States are drawn uniformly from the unit sphere of the n-dimensional
# subspace spanned by |l>, |l| <= (n-1)/2.  Each sample has its own Philox
# stream, so a run is fixed by its master seed.

# %%
import numpy as np

from bec_typicality.fock import estimate_moments, make_subspace, sample_batch, uniform_moment

spec = make_subspace(100, 11)
batch = sample_batch(spec, seed=42, count=50_000)

# %% [markdown]
# Pair moments are delta/n; quartic moments are (delta delta + delta delta)/(n(n+1)).

# %%
for pattern in [(0, 0), (0, 1), (2, 2, 2, 2), (1, 3, 1, 3), (1, 3, 3, 1), (1, 1, 3, 3)]:
    est = estimate_moments(batch, pattern)
    exact = float(uniform_moment(spec, pattern))
    print(f"{str(pattern):16s} estimate {est.value.real:+.6f}  exact {exact:.6f}  "
          f"z = {(est.value.real - exact) / est.standard_error:+.2f}")

# %% [markdown]
# The same seed gives the same states whatever the batch split.

# %%
head = sample_batch(spec, seed=42, count=10).coeffs
tail = sample_batch(spec, seed=42, count=5, start=5).coeffs
print(np.array_equal(head[5:], tail))
