# %% [markdown]
# # Which observable pairs can detect entanglement?
#
# Sweep C + lambda L and classify every eigenstate. If the ground and top
# states stay product for every direction, no witness built from C and L
# can fire.

# %%
import numpy as np

from ultrafine import catalog, lambda_scan, usefulness_verdict

for name in ("xxzz", "qutrit-counterexample", "ququart-counterexample"):
    e = catalog(name)
    v = usefulness_verdict(e.C, e.L)
    print(f"{name:24s} {v.kind:28s} {v.evidence}")

# %% [markdown]
# The qutrit pair has non-commuting local factors on both sides, yet its
# extremal eigenstates are product along the whole sweep. Interior states
# do get entangled.

# %%
e = catalog("qutrit-counterexample")
res = lambda_scan(e.C, e.L, np.linspace(-5, 5, 201))
print("extremal always product:", res.extremal_always_product())
print("largest interior negativity:", round(res.max_interior_negativity(), 4))
