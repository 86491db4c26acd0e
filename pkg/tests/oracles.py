"""Independent reference computations used by the tests.

None of these call the package's optimizers; they rely on scipy and on
textbook formulas only.
"""

import numpy as np
from scipy.optimize import linprog, minimize


def _unit(x):
    return x / np.linalg.norm(x)


def _product_from_params(x, dA, dB):
    a = _unit(x[:dA] + 1j * x[dA:2 * dA])
    b = _unit(x[2 * dA:2 * dA + dB] + 1j * x[2 * dA + dB:])
    return np.kron(a, b)


def legendre_oracle(X, dims, samples=3000, polish=6, seed=1):
    """``max over product phi of lambda_max(X + |phi><phi|) - 1``."""
    dA, dB = dims
    X = np.asarray(X, dtype=complex)
    rng = np.random.default_rng(seed)
    n = 2 * (dA + dB)

    def f(x):
        phi = _product_from_params(x, dA, dB)
        return np.linalg.eigvalsh(X + np.outer(phi, phi.conj()))[-1] - 1

    xs = rng.normal(size=(samples, n))
    vals = np.array([f(x) for x in xs])
    best = -np.inf
    for k in np.argsort(vals)[::-1][:polish]:
        res = minimize(lambda x: -f(x), xs[k], method="BFGS", options={"gtol": 1e-10})
        res = minimize(lambda x: -f(x), res.x, method="Nelder-Mead",
                       options={"xatol": 1e-12, "fatol": 1e-14, "maxiter": 40000})
        best = max(best, -res.fun)
    return best


def sep_max_oracle(X, dims, samples=4000, polish=6, seed=2):
    """``max over product phi of <phi|X|phi>`` by sampling and local polish."""
    dA, dB = dims
    X = np.asarray(X, dtype=complex)
    rng = np.random.default_rng(seed)
    n = 2 * (dA + dB)

    def f(x):
        phi = _product_from_params(x, dA, dB)
        return float(np.real(phi.conj() @ X @ phi))

    xs = rng.normal(size=(samples, n))
    vals = np.array([f(x) for x in xs])
    best = -np.inf
    for k in np.argsort(vals)[::-1][:polish]:
        res = minimize(lambda x: -f(x), xs[k], method="BFGS", options={"gtol": 1e-11})
        best = max(best, -res.fun)
    return best


def bell_diagonal_gm(p_max):
    """Convex-roof geometric measure of a Bell-diagonal state with largest weight ``p_max``."""
    if p_max <= 0.5:
        return 0.0
    return 0.5 * (1 - np.sqrt(1 - (2 * p_max - 1) ** 2))


def zz_xx_oracle(c, l):
    """Least geometric measure among two-qubit states with <ZZ> = c and <XX> = l.

    Local Pauli twirling leaves both expectations fixed and cannot raise a
    convex, LU-invariant measure, so the minimum is over Bell-diagonal
    states. The measure grows with the largest Bell weight, which a small
    LP minimizes.
    """
    # weights on (Phi+, Phi-, Psi+, Psi-) and t = max weight
    zz = [1, 1, -1, -1]
    xx = [1, -1, 1, -1]
    A_eq = [zz + [0], xx + [0], [1, 1, 1, 1, 0]]
    b_eq = [c, l, 1]
    A_ub = [[1 if j == i else 0 for j in range(4)] + [-1] for i in range(4)]
    res = linprog([0, 0, 0, 0, 1], A_ub=A_ub, b_ub=[0] * 4, A_eq=A_eq, b_eq=b_eq,
                  bounds=[(0, 1)] * 5, method="highs")
    assert res.status == 0
    return bell_diagonal_gm(res.x[-1])


def _solve(prob):
    import cvxpy as cp
    prob.solve(solver=cp.CLARABEL if "CLARABEL" in cp.installed_solvers() else cp.SCS)
    return prob.value


def sdp_constrained_ppt(L, C, c):
    """max Tr(L rho) over two-qubit PPT states with Tr(C rho) = c (exact for 2x2)."""
    import cvxpy as cp
    rho = cp.Variable((4, 4), hermitian=True)
    pt = cp.partial_transpose(rho, dims=[2, 2], axis=1)
    cons = [rho >> 0, pt >> 0, cp.real(cp.trace(rho)) == 1,
            cp.real(cp.trace(np.asarray(C) @ rho)) == c]
    return _solve(cp.Problem(cp.Maximize(cp.real(cp.trace(np.asarray(L) @ rho))), cons))


def sdp_hyperplane_min(W, C, c):
    """min Tr(W rho) over all density matrices with Tr(C rho) = c."""
    import cvxpy as cp
    d = np.asarray(W).shape[0]
    rho = cp.Variable((d, d), hermitian=True)
    cons = [rho >> 0, cp.real(cp.trace(rho)) == 1, cp.real(cp.trace(np.asarray(C) @ rho)) == c]
    return _solve(cp.Problem(cp.Minimize(cp.real(cp.trace(np.asarray(W) @ rho))), cons))
