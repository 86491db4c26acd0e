# %% [markdown]
# # Lower bounds on the geometric measure from two expectation values
#
# Measuring only <Z(x)Z> = c and <X(x)X> = l already bounds the geometric
# measure from below. The bound is zero when |c| + |l| <= 1.

# %%
import numpy as np

from ultrafine import SX, SZ, eps_bound, kron, legendre_gm, xxzz_closed_form

ZZ, XX = kron(SZ, SZ), kron(SX, SX)

# %%
for c, l in [(0.4, 0.5), (0.8, 0.7), (0.95, 0.95), (1.0, 1.0)]:
    res = eps_bound(c, l, ZZ, XX)
    print(f"c={c:.2f} l={l:.2f}  numeric={res.epsilon:.6f}  closed={xxzz_closed_form(c, l):.6f}"
          f"  slopes=({res.alphaStar:.3f}, {res.betaStar:.3f})")

# %% [markdown]
# The transform itself, for a Bell-diagonal operator, has a closed form.
# The see-saw path gives the same number when the shortcut is switched off.

# %%
X = ZZ + XX
print(legendre_gm(X).value, legendre_gm(X, analytic=False).value, (1 + np.sqrt(5)) / 2)

# %% [markdown]
# A coarse table of the bound on [0, 1]^2.

# %%
grid = np.linspace(0, 1, 6)
print("      " + " ".join(f"{l:6.2f}" for l in grid))
for c in grid:
    print(f"{c:5.2f} " + " ".join(f"{xxzz_closed_form(c, l):6.3f}" for l in grid))
