# %% [markdown]
# # States, Schmidt coefficients and negativity
#
# Build a few two-qubit states and look at how entanglement shows up in
# the Schmidt spectrum, the partial transpose and the geometric measure.

# %%
import numpy as np

from ultrafine import PureState, geometric_measure_pure, negativity, partial_transpose, schmidt

bell = PureState((2, 2), np.array([1, 0, 0, 1]) / np.sqrt(2))
tilted = PureState((2, 2), [np.sqrt(0.9), 0, 0, np.sqrt(0.1)])
product = PureState.product([1, 0], [0.6, 0.8])

# %%
for name, psi in [("bell", bell), ("tilted", tilted), ("product", product)]:
    sd = schmidt(psi)
    gm, _ = geometric_measure_pure(psi)
    print(f"{name:8s} schmidt={np.round(sd.coefficients, 4)} "
          f"negativity={negativity(psi):.4f} geometric={gm:.4f}")

# %% [markdown]
# The partial transpose of the Bell projector has eigenvalue -1/2, which is
# where its negativity of 1/2 comes from.

# %%
print(np.linalg.eigvalsh(partial_transpose(bell.density_matrix()).matrix))
