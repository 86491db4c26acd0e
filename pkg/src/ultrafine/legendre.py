"""
Legendre-transform bounds on the geometric measure of entanglement.

For an observable ``X`` the transform of the geometric measure is

    E^(X) = sup_psi <psi|X|psi> - E_G(psi)
          = sup_psi sup_{phi product} <psi|(X + |phi><phi|)|psi> - 1,

and measured values ``c = <C>``, ``l = <L>`` give the lower bound

    eps(c, l) = sup_{alpha, beta} alpha c + beta l - E^(alpha C + beta L).

Two-qubit operators diagonal in the Bell basis have a closed-form
transform; everything else goes through a multi-start see-saw.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from ._optim import maximize_concave_2d
from .core import (BipartiteOperator, PureState, ValidationError, as_operator,
                   bell_basis, geometric_measure_pure, haar_vector, second_schmidt)
from .sepvalue import InfeasibleError, sep_max, top_eigvecs

DEFAULT_RESTARTS = 50
SEESAW_TOL = 1e-11
SEESAW_MAX_ITER = 500


@dataclass
class LegendreResult:
    value: float
    optimizerPsi: PureState
    optimizerProduct: PureState
    restartsUsed: int
    converged: bool
    certified: bool = False


@dataclass
class BoundResult:
    epsilon: float
    alphaStar: float
    betaStar: float
    evaluations: int
    certified: bool = False
    warning: Optional[str] = None


def bell_diag_legendre(lambda1: float, lambda2: float) -> float:
    """Closed-form transform for a two-qubit Bell-diagonal operator.

    ``lambda1`` and ``lambda2`` are its largest and second-largest
    eigenvalues.
    """
    if lambda1 < lambda2:
        raise ValidationError(f"need lambda1 >= lambda2, got {lambda1} < {lambda2}")
    return (lambda1 + lambda2 - 1) / 2 + 0.5 * np.sqrt((lambda1 - lambda2) ** 2 + 1)


def bell_diagonal(X, tol: float = 1e-12) -> Optional[np.ndarray]:
    """Eigenvalues on (Phi+, Phi-, Psi+, Psi-) if ``X`` is Bell-diagonal, else ``None``."""
    X = as_operator(X)
    if X.dims != (2, 2):
        return None
    B = bell_basis()
    M = B.conj().T @ X.matrix @ B
    off = M - np.diag(np.diag(M))
    if np.max(np.abs(off)) > tol * max(1.0, np.max(np.abs(M))):
        return None
    return np.real(np.diag(M))


def _analytic_optimizers(diag: np.ndarray) -> Tuple[float, PureState, PureState]:
    B = bell_basis()
    order = np.argsort(diag)[::-1]
    l1, l2 = diag[order[0]], diag[order[1]]
    b1, b2 = B[:, order[0]], B[:, order[1]]
    # some relative phase makes (b1 + e^{i phi} b2)/sqrt(2) a product vector
    for phase in (1, 1j, -1, -1j):
        mix = PureState((2, 2), (b1 + phase * b2) / np.sqrt(2))
        if second_schmidt(mix) < 1e-9:
            break
    theta = 0.5 * np.arctan2(1.0, l1 - l2)
    psi = PureState.from_vector(np.cos(theta) * b1 + np.sin(theta) * phase * b2, (2, 2))
    _, phi = geometric_measure_pure(mix)
    return bell_diag_legendre(l1, l2), psi, phi


def state_seesaw(X: BipartiteOperator, phi: np.ndarray, tol: float = SEESAW_TOL,
                 max_iter: int = SEESAW_MAX_ITER):
    """Batched see-saw for ``<psi|(X + |phi><phi|)|psi> - 1``.

    ``phi`` is an ``(R, D)`` stack of product starting vectors. Returns the
    final ``psi`` and ``phi`` stacks, values and per-restart convergence.
    """
    dA, dB = X.dims
    R, D = phi.shape
    Xm = np.asarray(X.matrix)
    psi = phi.copy()
    vals = np.full(R, -np.inf)
    converged = np.zeros(R, dtype=bool)
    for _ in range(max_iter):
        M = Xm[None] + np.einsum("ri,rj->rij", phi, phi.conj())
        _, psi = top_eigvecs(M, psi)
        U, s, Vh = np.linalg.svd(psi.reshape(R, dA, dB))
        phi = np.einsum("ri,rj->rij", U[:, :, 0], Vh[:, 0, :]).reshape(R, D)
        new = np.real(np.einsum("ri,ij,rj->r", psi.conj(), Xm, psi)) + s[:, 0] ** 2 - 1
        converged = np.abs(new - vals) <= tol * np.maximum(1.0, np.abs(new))
        vals = new
        if converged.all():
            break
    return psi, phi, vals, converged


def legendre_gm(X, restarts: int = DEFAULT_RESTARTS, seed: int = 0, analytic: bool = True,
                tol: float = SEESAW_TOL, max_iter: int = SEESAW_MAX_ITER,
                dims=None) -> LegendreResult:
    """Legendre transform of the geometric measure at ``X``.

    Bell-diagonal two-qubit operators are evaluated in closed form
    (``certified=True``) unless ``analytic=False``. Otherwise the see-saw
    runs from ``restarts`` Haar-random product states plus two seeds: the
    closest product state to the top eigenvector of ``X`` and the best
    product state for ``X``. The returned value is attained by
    ``optimizerPsi``, so it is always a valid lower estimate.
    """
    X = as_operator(X, dims)
    if analytic:
        diag = bell_diagonal(X)
        if diag is not None:
            value, psi, phi = _analytic_optimizers(diag)
            return LegendreResult(float(value), psi, phi, 0, True, certified=True)

    dA, dB = X.dims
    rng = np.random.default_rng(seed)
    starts = [np.kron(haar_vector(dA, rng), haar_vector(dB, rng)) for _ in range(restarts)]
    w, V = np.linalg.eigh(X.matrix)
    _, top_product = geometric_measure_pure(PureState.from_vector(V[:, -1], X.dims))
    starts.append(np.array(top_product.amplitudes))
    best_product = sep_max(X, restarts=16, seed=seed).optimizer[0]
    starts.append(best_product.vector())
    psi, phi, vals, conv = state_seesaw(X, np.array(starts), tol, max_iter)

    scores = []
    for r in range(psi.shape[0]):
        state = PureState.from_vector(psi[r], X.dims)
        scores.append(X.expectation(state) - geometric_measure_pure(state)[0])
    best = int(np.argmax(scores))
    state = PureState.from_vector(psi[best], X.dims)
    _, closest = geometric_measure_pure(state)
    return LegendreResult(float(scores[best]), state, closest, len(starts), bool(conv[best]))


# lower bound from two expectation values -------------------------------------

def _check_range(value, op, name):
    w = np.linalg.eigvalsh(op.matrix)
    if value < w[0] - 1e-12 or value > w[-1] + 1e-12:
        raise InfeasibleError(f"{name} = {value} outside [{w[0]:.10g}, {w[-1]:.10g}]")


def eps_bound(c: float, l: float, C, L, restarts: int = DEFAULT_RESTARTS,
              seed: int = 0) -> BoundResult:
    """Lower bound on the geometric measure from ``<C> = c`` and ``<L> = l``.

    Maximizes the concave function ``alpha c + beta l - E^(alpha C + beta L)``
    over the slopes. When both observables are two-qubit Bell-diagonal
    every transform is evaluated in closed form and the bound is marked
    certified; otherwise each evaluation is a seeded see-saw and the result
    is a heuristic estimate.

    Raises
    ------
    InfeasibleError
        If ``c`` or ``l`` lies outside the spectrum of its observable.
    """
    C = as_operator(C)
    L = as_operator(L, C.dims)
    _check_range(c, C, "c")
    _check_range(l, L, "l")

    dC, dL = bell_diagonal(C), bell_diagonal(L)
    certified = dC is not None and dL is not None
    if certified:
        def transform(alpha, beta):
            lam = np.sort(alpha * dC + beta * dL)
            return bell_diag_legendre(lam[-1], lam[-2])
    else:
        def transform(alpha, beta):
            return legendre_gm(alpha * C + beta * L, restarts=restarts, seed=seed).value

    def objective(x):
        return x[0] * c + x[1] * l - transform(x[0], x[1])

    x, fx, evals = maximize_concave_2d(objective, (0.0, 0.0))
    warning = None
    if np.max(np.abs(x)) > 1e5:
        warning = "slopes diverge: (c, l) lies on or beyond the boundary of the joint range"
    return BoundResult(float(max(fx, 0.0)), float(x[0]), float(x[1]), evals,
                       certified=certified, warning=warning)


def xxzz_closed_form(c: float, l: float) -> float:
    """Bound for ``C = Z(x)Z``, ``L = X(x)X``: ``(1 - sqrt(1 - (|c|+|l|-1)^2)) / 2``."""
    if abs(c) > 1 or abs(l) > 1:
        raise ValidationError(f"need |c| <= 1 and |l| <= 1, got ({c}, {l})")
    s = abs(c) + abs(l) - 1
    if s <= 0:
        return 0.0
    return 0.5 * (1 - np.sqrt(max(0.0, 1 - s * s)))


def fig1_grid(resolution: int) -> List[Tuple[float, float, float]]:
    """Rows ``(c, l, eps)`` of the closed-form bound over ``[-1, 1]^2``."""
    if resolution < 2:
        raise ValidationError("resolution must be at least 2")
    grid = np.linspace(-1.0, 1.0, resolution)
    return [(float(c), float(l), xxzz_closed_form(c, l)) for c in grid for l in grid]
