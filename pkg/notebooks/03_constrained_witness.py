# %% [markdown]
# # Witness thresholds on a fixed expectation value
#
# Two noisy Pauli effects. Once <C> = 0.6 is known, the largest value of
# <L> reachable by separable states drops from 9/8 - 0.6 to about 0.522,
# so a tighter witness is available on that slice of state space.

# %%
import numpy as np

from ultrafine import (as_operator, catalog, constrained_sep_max, hyperplane_min, is_witness,
                       pure_constrained_sep_max, uew_evaluate)

entry = catalog("noisy-pauli-povm")
C, L = as_operator(entry.C), as_operator(entry.L)

# %%
rep = uew_evaluate(L, C, 0.6, l=0.55)
print(f"threshold      {rep.gc:.6f}")
print(f"primal value   {rep.primal.value:.6f} (gap {rep.primal.certifiedGap:.1e})")
print(f"hyperplane min {rep.hyperplaneMin:.6f}")
print(f"l = 0.55 detected: {rep.detected}")

# %% [markdown]
# The ordinary witness built from the same operators.

# %%
w = is_witness(9 / 8 * np.eye(4) - C.matrix - L.matrix)
print(w)

# %% [markdown]
# Restricting the search to pure product states is not enough: on this
# diagonal pair a mixture of |00> and |11> reaches 1 while no product
# state gets past (1 + c^2)/2.

# %%
e = catalog("theorem1-counterexample")
for c in (0.0, 0.5, 0.9):
    mixed, _ = constrained_sep_max(e.L, e.C, c, restarts=16)
    pure = pure_constrained_sep_max(e.L, e.C, c, restarts=16)
    print(f"c={c:.1f}  mixed={mixed.value:.6f}  pure={pure.value:.6f}")
