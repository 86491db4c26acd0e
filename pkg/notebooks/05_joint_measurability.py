# %% [markdown]
# # Jointly measurable effects can still power a witness
#
# Unbiased qubit effects (1 + m.sigma)/2 and (1 + n.sigma)/2 are jointly
# measurable iff |m + n| + |m - n| <= 2.

# %%
import numpy as np

from ultrafine import catalog, joint_measurability_unbiased

r = 1 / np.sqrt(2)
print("noisy pair:", joint_measurability_unbiased([r, 0, 0], [0, 0, r]))
print("sharp pair:", joint_measurability_unbiased([1, 0, 0], [0, 0, 1]))

# %% [markdown]
# The noisy pair sits exactly on the boundary. Notebook 03 shows it still
# yields a constrained witness that detects states with <C> = 0.6 and
# <L> above about 0.522.

# %%
print(catalog("noisy-pauli-povm").metadata)
