"""
Optimization over separable states.

``sep_max`` maximizes an expectation value over pure product states with a
multi-start see-saw (every restart runs in one batched numpy pass). The
constrained problem

    g(c) = sup { Tr(sigma L) : sigma separable, Tr(sigma C) = c }

is solved through its Lagrangian dual ``inf_mu sep_max(L + mu C) - mu c``
together with a rank-2 primal state ``p |ab><ab| + (1-p) |a'b'><a'b'|``;
their difference is reported as a certificate.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np
from scipy.optimize import minimize

from ._optim import maximize_unimodal, minimize_convex
from .core import BipartiteOperator, ValidationError, as_operator, haar_vector

DEFAULT_RESTARTS = 64
SEESAW_TOL = 1e-11
SEESAW_MAX_ITER = 500
MU_CAP = 1e3
WITNESS_SLACK = 1e-9


class InfeasibleError(ValueError):
    """The requested constraint value cannot be reached."""


@dataclass(frozen=True)
class ProductTerm:
    weight: float
    a: np.ndarray = field(repr=False)
    b: np.ndarray = field(repr=False)

    def vector(self) -> np.ndarray:
        return np.kron(self.a, self.b)


@dataclass
class SepOptResult:
    value: float
    optimizer: List[ProductTerm]
    restarts: int
    certifiedGap: Optional[float] = None
    converged: bool = True
    flags: Tuple[str, ...] = ()

    def density_matrix(self) -> np.ndarray:
        return sum(t.weight * np.outer(t.vector(), t.vector().conj()) for t in self.optimizer)

    def expectation(self, X) -> float:
        X = as_operator(X)
        return float(np.real(np.trace(self.density_matrix() @ X.matrix)))


@dataclass
class DualScan:
    muStar: float
    dualValue: float
    bracket: Tuple[float, float]
    iterations: int
    trace: list = field(default_factory=list, repr=False)


@dataclass
class WitnessReport:
    sepMin: float
    minEigenvalue: float
    isWitness: bool


@dataclass
class UEWReport:
    gc: float
    detected: Optional[bool]
    witness: BipartiteOperator
    hyperplaneMin: float
    primal: SepOptResult
    dual: DualScan
    hyperplaneScan: DualScan


# product see-saw -------------------------------------------------------------

def top_eigvecs(M: np.ndarray, prev: Optional[np.ndarray] = None, rtol: float = 1e-12):
    """Top eigenpairs of a stack of Hermitian matrices.

    When the top eigenvalue is degenerate the returned vector is the
    projection of ``prev`` onto the degenerate eigenspace, which keeps
    alternating schemes monotone.
    """
    w, V = np.linalg.eigh(M)
    top = V[..., -1].copy()
    if prev is not None and M.shape[-1] > 1:
        scale = np.maximum(1.0, np.abs(w).max(axis=-1))
        degenerate = np.nonzero(w[..., -1] - w[..., -2] < rtol * scale * 1e3)[0]
        for r in degenerate:
            cluster = V[r][:, w[r] > w[r, -1] - rtol * scale[r] * 1e3]
            proj = cluster @ (cluster.conj().T @ prev[r])
            nrm = np.linalg.norm(proj)
            if nrm > 1e-12:
                top[r] = proj / nrm
    return w[..., -1], top


def product_seesaw(X: BipartiteOperator, a: np.ndarray, b: np.ndarray,
                   tol: float = SEESAW_TOL, max_iter: int = SEESAW_MAX_ITER):
    """Batched alternating maximization of ``<ab|X|ab>``.

    ``a`` and ``b`` are ``(R, dA)`` and ``(R, dB)`` stacks of starting
    vectors. Returns the final stacks, per-restart values and a converged
    flag per restart.
    """
    X4 = X.tensor()
    vals = np.full(a.shape[0], -np.inf)
    converged = np.zeros(a.shape[0], dtype=bool)
    for _ in range(max_iter):
        XA = np.einsum("ikjl,rk,rl->rij", X4, b.conj(), b)
        _, a = top_eigvecs(XA, a)
        XB = np.einsum("ikjl,ri,rj->rkl", X4, a.conj(), a)
        new, b = top_eigvecs(XB, b)
        converged = np.abs(new - vals) <= tol * np.maximum(1.0, np.abs(new))
        vals = new
        if converged.all():
            break
    return a, b, vals, converged


def _random_locals(dims, n, rng):
    a = np.array([haar_vector(dims[0], rng) for _ in range(n)]).reshape(n, dims[0])
    b = np.array([haar_vector(dims[1], rng) for _ in range(n)]).reshape(n, dims[1])
    return a, b


def _spectral_starts(X: BipartiteOperator, count: int = 8):
    """Closest product states to the top eigenvectors of ``X``."""
    dA, dB = X.dims
    _, V = np.linalg.eigh(X.matrix)
    vecs = V[:, ::-1][:, :count].T.reshape(-1, dA, dB)
    U, _, Vh = np.linalg.svd(vecs)
    return U[:, :, 0], Vh[:, 0, :]


def sep_max(X, restarts: int = DEFAULT_RESTARTS, seed: int = 0, initial=None,
            tol: float = SEESAW_TOL, max_iter: int = SEESAW_MAX_ITER, dims=None) -> SepOptResult:
    """Maximal expectation value of ``X`` over separable states.

    The maximum over the separable set is attained on a pure product
    state, so only those are searched.

    Parameters
    ----------
    X : BipartiteOperator or array_like
    restarts : int
        Number of Haar-random product starting points.
    seed : int
        Seed for the starting points.
    initial : list of (a, b), optional
        Extra starting points tried in addition to the random ones.

    Notes
    -----
    Besides the random starts, the see-saw also starts from the closest
    product states to the top eigenvectors of ``X``. These catch the case
    where the top eigenvector is itself product but has a small basin.
    """
    X = as_operator(X, dims)
    rng = np.random.default_rng(seed)
    a, b = _random_locals(X.dims, restarts, rng)
    sa, sb = _spectral_starts(X)
    a, b = np.vstack([a, sa]), np.vstack([b, sb])
    if initial:
        a = np.vstack([a] + [np.asarray(p[0], dtype=complex)[None] for p in initial])
        b = np.vstack([b] + [np.asarray(p[1], dtype=complex)[None] for p in initial])
    a, b, vals, conv = product_seesaw(X, a, b, tol, max_iter)
    best = int(np.argmax(vals))
    term = ProductTerm(1.0, a[best] / np.linalg.norm(a[best]), b[best] / np.linalg.norm(b[best]))
    value = float(np.real(np.vdot(term.vector(), X.matrix @ term.vector())))
    return SepOptResult(value, [term], a.shape[0], converged=bool(conv[best]))


def sep_min(X, **kw) -> SepOptResult:
    res = sep_max(-as_operator(X, kw.pop("dims", None)), **kw)
    res.value = -res.value
    return res


def is_witness(W, restarts: int = DEFAULT_RESTARTS, seed: int = 0) -> WitnessReport:
    W = as_operator(W)
    sep_min_value = sep_min(W, restarts=restarts, seed=seed).value
    lam_min = float(np.linalg.eigvalsh(W.matrix)[0])
    ok = sep_min_value >= -WITNESS_SLACK and lam_min < -WITNESS_SLACK
    return WitnessReport(sep_min_value, lam_min, bool(ok))


# constrained maximum ---------------------------------------------------------

def _expect(X: np.ndarray, v: np.ndarray) -> float:
    return float(np.real(np.vdot(v, X @ v)))


def _rank2_value(Lm, Cm, c, v1, v2):
    """Value and weight of the rank-2 mixture meeting ``Tr(C sigma) = c``."""
    c1, c2 = _expect(Cm, v1), _expect(Cm, v2)
    l1, l2 = _expect(Lm, v1), _expect(Lm, v2)
    if abs(c1 - c2) < 1e-14:
        if abs(c1 - c) < 1e-10:
            return max(l1, l2), 1.0 if l1 >= l2 else 0.0
        return None, None
    p = (c - c2) / (c1 - c2)
    if p < -1e-12 or p > 1 + 1e-12:
        return None, None
    p = min(1.0, max(0.0, p))
    return p * l1 + (1 - p) * l2, p


def _pack(dims, vecs):
    return np.concatenate([np.concatenate([v.real, v.imag]) for v in vecs])


def _unpack(dims, x, count):
    out, pos = [], 0
    for k in range(count):
        d = dims[k % 2]
        v = x[pos:pos + d] + 1j * x[pos + d:pos + 2 * d]
        pos += 2 * d
        out.append(v / max(np.linalg.norm(v), 1e-300))
    return out


def _polish_rank2(Lm, Cm, c, dims, a1, b1, a2, b2):
    """Local Nelder-Mead refinement of a feasible rank-2 mixture."""
    def neg_value(x):
        u1, w1, u2, w2 = _unpack(dims, x, 4)
        val, _ = _rank2_value(Lm, Cm, c, np.kron(u1, w1), np.kron(u2, w2))
        return 1e6 if val is None else -val

    x0 = _pack(dims, [a1, b1, a2, b2])
    res = minimize(neg_value, x0, method="Nelder-Mead",
                   options=dict(xatol=1e-12, fatol=1e-14, maxiter=4000 * x0.size, adaptive=True))
    u1, w1, u2, w2 = _unpack(dims, res.x, 4)
    return u1, w1, u2, w2


def _rank2_candidates(trace, c, Lm, Cm, limit=12):
    """Rank-2 mixtures assembled from product maximizers met during the dual scan."""
    states = []
    for rec in trace:
        a, b = rec["a"], rec["b"]
        states.append((a, b, np.kron(a, b)))
    found = []
    for i in range(len(states)):
        for j in range(i, len(states)):
            val, p = _rank2_value(Lm, Cm, c, states[i][2], states[j][2])
            if val is not None:
                found.append((val, p, states[i], states[j]))
    found.sort(key=lambda t: -t[0])
    return found[:limit]


def constrained_sep_max(L, C, c: float, restarts: int = DEFAULT_RESTARTS, seed: int = 0,
                        polish: bool = True) -> Tuple[SepOptResult, DualScan]:
    """Maximum of ``Tr(sigma L)`` over separable ``sigma`` with ``Tr(sigma C) = c``.

    Returns the rank-2 primal result (``value`` is attained by its
    optimizer, ``certifiedGap`` = dual - primal) and the dual scan, whose
    ``dualValue`` upper-bounds the true maximum whenever every ``sep_max``
    call finds its global optimum.
    """
    L = as_operator(L)
    C = as_operator(C, L.dims)
    if C.dims != L.dims:
        raise ValidationError(f"dims mismatch: {L.dims} vs {C.dims}")
    c_hi = sep_max(C, restarts=restarts, seed=seed).value
    c_lo = sep_min(C, restarts=restarts, seed=seed).value
    if c > c_hi + 1e-9 or c < c_lo - 1e-9:
        raise InfeasibleError(f"c = {c} outside separable range [{c_lo:.10g}, {c_hi:.10g}]")

    Lm, Cm = np.array(L.matrix), np.array(C.matrix)
    trace = []
    warm = []

    def dual(mu):
        res = sep_max(L + mu * C, restarts=restarts, seed=seed, initial=warm[-8:])
        t = res.optimizer[0]
        warm.append((t.a, t.b))
        v = t.vector()
        trace.append(dict(mu=mu, value=res.value - mu * c, a=t.a, b=t.b,
                          c=_expect(Cm, v), l=_expect(Lm, v)))
        return res.value - mu * c

    line = minimize_convex(dual, -1.0, 1.0, cap=MU_CAP, tol=1e-10)
    mus = sorted(r["mu"] for r in trace)
    below = [m for m in mus if m < line.x]
    above = [m for m in mus if m > line.x]
    bracket = (below[-1] if below else line.x, above[0] if above else line.x)
    scan = DualScan(line.x, line.fx, bracket, line.evaluations, trace)

    flags = []
    if line.hit_cap:
        flags.append("boundary")
    if L.dims[0] * L.dims[1] > 4:
        flags.append("ansatz")

    # both product maximizers at mu* are also kept as candidates
    for mu in (line.x * (1 - 1e-7) - 1e-9, line.x * (1 + 1e-7) + 1e-9):
        dual(mu)

    candidates = _rank2_candidates(trace, c, Lm, Cm)
    if not candidates:
        raise InfeasibleError("no feasible rank-2 separable state found")
    best_val, best = -np.inf, None
    for val, p, s1, s2 in candidates[: 4 if polish else 1]:
        a1, b1, a2, b2 = s1[0], s1[1], s2[0], s2[1]
        if polish and line.fx - val > 1e-12:
            a1, b1, a2, b2 = _polish_rank2(Lm, Cm, c, L.dims, a1, b1, a2, b2)
            new, _ = _rank2_value(Lm, Cm, c, np.kron(a1, b1), np.kron(a2, b2))
            if new is None or new < val:
                a1, b1, a2, b2 = s1[0], s1[1], s2[0], s2[1]
        v, p = _rank2_value(Lm, Cm, c, np.kron(a1, b1), np.kron(a2, b2))
        if v is not None and v > best_val:
            best_val, best = v, (p, a1, b1, a2, b2)
    p, a1, b1, a2, b2 = best
    terms = [ProductTerm(p, a1, b1)]
    if p < 1.0:
        terms.append(ProductTerm(1.0 - p, a2, b2))
    if terms[0].weight == 0.0:
        terms = terms[1:]
    result = SepOptResult(float(best_val), terms, restarts,
                          certifiedGap=float(line.fx - best_val),
                          flags=tuple(flags))
    return result, scan


def pure_constrained_sep_max(L, C, c: float, restarts: int = DEFAULT_RESTARTS,
                             seed: int = 0, feas_tol: float = 1e-8) -> SepOptResult:
    """Best pure product state on the constraint ``<ab|C|ab> = c``.

    Each start is a Haar-random product vector moved by SLSQP with the
    constraint imposed as an equality.
    """
    L = as_operator(L)
    C = as_operator(C, L.dims)
    Lm, Cm = np.array(L.matrix), np.array(C.matrix)
    dims = L.dims
    rng = np.random.default_rng(seed)

    def split(x):
        a, b = _unpack(dims, x, 2)
        return np.kron(a, b)

    cons = {"type": "eq", "fun": lambda x: _expect(Cm, split(x)) - c}
    best = None
    for _ in range(restarts):
        x0 = _pack(dims, [haar_vector(dims[0], rng), haar_vector(dims[1], rng)])
        res = minimize(lambda x: -_expect(Lm, split(x)), x0, method="SLSQP",
                       constraints=[cons], options=dict(ftol=1e-14, maxiter=500))
        v = split(res.x)
        if abs(_expect(Cm, v) - c) > feas_tol:
            continue
        val = _expect(Lm, v)
        if best is None or val > best[0]:
            best = (val, res.x)
    if best is None:
        raise InfeasibleError(f"no pure product state with <C> = {c} was found")
    a, b = _unpack(dims, best[1], 2)
    return SepOptResult(float(best[0]), [ProductTerm(1.0, a, b)], restarts)


def hyperplane_min(W, C, c: float) -> Tuple[float, DualScan]:
    """Minimum of ``Tr(W rho)`` over all density matrices with ``Tr(C rho) = c``.

    Computed as ``max_mu lambda_min(W - mu C) + mu c``, which is exact for
    ``c`` inside the spectrum of ``C``.
    """
    W = as_operator(W)
    C = as_operator(C, W.dims)
    wc = np.linalg.eigvalsh(C.matrix)
    if c < wc[0] - 1e-12 or c > wc[-1] + 1e-12:
        raise InfeasibleError(f"c = {c} outside the spectrum of C [{wc[0]:.10g}, {wc[-1]:.10g}]")
    Wm, Cm = np.array(W.matrix), np.array(C.matrix)
    trace = []

    def h(mu):
        v = np.linalg.eigvalsh(Wm - mu * Cm)[0] + mu * c
        trace.append(dict(mu=mu, value=v))
        return v

    line = maximize_unimodal(h, -1.0, 1.0, cap=MU_CAP, tol=1e-12)
    return float(line.fx), DualScan(line.x, line.fx, (line.x, line.x), line.evaluations, trace)


def uew_evaluate(L, C, c: float, l: Optional[float] = None,
                 restarts: int = DEFAULT_RESTARTS, seed: int = 0) -> UEWReport:
    """Ultrafine witness ``g_c 1 - L`` on the hyperplane ``Tr(C rho) = c``.

    ``detected`` is ``l > g_c`` when a measured value ``l`` is given.
    """
    L = as_operator(L)
    C = as_operator(C, L.dims)
    primal, dual = constrained_sep_max(L, C, c, restarts=restarts, seed=seed)
    gc = dual.dualValue
    W = BipartiteOperator(L.dims, gc * np.eye(L.dim) - L.matrix)
    hmin, hscan = hyperplane_min(W, C, c)
    detected = None if l is None else bool(l > gc)
    return UEWReport(gc, detected, W, hmin, primal, dual, hscan)
