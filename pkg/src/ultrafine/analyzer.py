"""
Can a pair of product observables detect entanglement?

A pair ``C``, ``L`` is useful exactly when some combination
``alpha C + beta L`` has an entangled ground or most excited state. This
module scans such combinations, classifies eigenstates (taking care of
degenerate eigenspaces), reports the matrix elements that perturbation
theory forces to vanish, and issues a verdict.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .core import (ProductObservable, PureState, ValidationError, as_operator, classify_pure,
                   commutator_norm, pure_negativity, second_schmidt)

COMMUTATOR_TOL = 1e-10
DEGENERACY_RTOL = 1e-8
USEFUL_NEGATIVITY = 1e-6

USELESS_COMMUTATOR = "USELESS_COMMUTATOR"
USEFUL_CERTIFIED = "USEFUL_CERTIFIED"
USEFUL_NUMERICAL = "USEFUL_NUMERICAL"
USELESS_NUMERICAL_EVIDENCE = "USELESS_NUMERICAL_EVIDENCE"
INCONCLUSIVE = "INCONCLUSIVE"


@dataclass
class ScanPoint:
    eigenvalues: np.ndarray
    classes: List[str]
    negativities: np.ndarray
    vectors: np.ndarray = field(repr=False)


@dataclass
class ScanResult:
    lambdaGrid: np.ndarray
    perLambda: List[ScanPoint]

    def rows(self):
        """``(lambda, eig_index, eigenvalue, negativity, class)`` tuples."""
        for lam, pt in zip(self.lambdaGrid, self.perLambda):
            for k, (e, n, cls) in enumerate(zip(pt.eigenvalues, pt.negativities, pt.classes)):
                yield float(lam), k, float(e), float(n), cls

    def extremal_always_product(self) -> bool:
        return all(pt.classes[0] == "product" and pt.classes[-1] == "product"
                   for pt in self.perLambda)

    def max_interior_negativity(self) -> float:
        return max(float(np.max(pt.negativities[1:-1], initial=0.0)) for pt in self.perLambda)


@dataclass
class Verdict:
    kind: str
    witnessSlopes: Optional[Tuple[float, float]] = None
    evidence: str = ""
    data: dict = field(default_factory=dict)


@dataclass(frozen=True)
class EffectPair:
    blochM: Tuple[float, float, float]
    blochN: Tuple[float, float, float]

    def __post_init__(self):
        for v in (self.blochM, self.blochN):
            if np.linalg.norm(v) > 1 + 1e-12:
                raise ValidationError(f"Bloch vector {v} has norm > 1")


# product vectors in small subspaces ------------------------------------------

def product_in_span(v1: np.ndarray, v2: np.ndarray, dims, tol: float = 1e-8) -> Optional[np.ndarray]:
    """A product vector in ``span{v1, v2}``, or ``None`` if there is none.

    ``x v1 + y v2`` is product iff every 2x2 minor of its amplitude matrix
    vanishes. Each minor is a binary quadratic form in ``(x, y)``, so the
    candidates are the roots of those forms.
    """
    dA, dB = dims
    M1, M2 = v1.reshape(dA, dB), v2.reshape(dA, dB)
    forms = []
    for i in range(dA):
        for j in range(i + 1, dA):
            for k in range(dB):
                for l in range(k + 1, dB):
                    a = M1[i, k] * M1[j, l] - M1[i, l] * M1[j, k]
                    c = M2[i, k] * M2[j, l] - M2[i, l] * M2[j, k]
                    b = (M1[i, k] * M2[j, l] + M2[i, k] * M1[j, l]
                         - M1[i, l] * M2[j, k] - M2[i, l] * M1[j, k])
                    forms.append((a, b, c))
    if not forms:
        return v1
    forms = np.array(forms)
    candidates = [(1.0, 0.0), (0.0, 1.0)]
    for a, b, c in forms:
        if max(abs(a), abs(b), abs(c)) < 1e-14:
            continue
        if abs(a) > 1e-14:
            candidates += [(x, 1.0) for x in np.roots([a, b, c])]
        elif abs(b) > 1e-14:
            candidates.append((-c / b, 1.0))
    best, best_s2 = None, np.inf
    for x, y in candidates:
        v = x * v1 + y * v2
        n = np.linalg.norm(v)
        if n < 1e-14:
            continue
        s2 = second_schmidt(PureState(tuple(dims), v / n))
        if s2 < best_s2:
            best, best_s2 = v / n, s2
    return best if best_s2 < tol else None


def _clusters(w: np.ndarray, rtol: float = DEGENERACY_RTOL):
    scale = max(w[-1] - w[0], 1.0)
    groups, start = [], 0
    for k in range(1, len(w) + 1):
        if k == len(w) or w[k] - w[k - 1] > rtol * scale:
            groups.append(list(range(start, k)))
            start = k
    return groups


def classify_spectrum(X: BipartiteOperator) -> ScanPoint:
    """Eigen-decompose ``X`` and label every eigenstate.

    Two-fold degenerate eigenspaces are rotated to a basis containing a
    product vector when one exists (placed first in the ground cluster and
    last elsewhere); larger clusters are labelled ``degenerate``.
    """
    dims = X.dims
    w, V = np.linalg.eigh(X.matrix)
    V = V.copy()
    classes = [""] * len(w)
    for group in _clusters(w):
        if len(group) == 1:
            k = group[0]
            classes[k] = classify_pure(PureState.from_vector(V[:, k], dims))
        elif len(group) == 2:
            i, j = group
            prod = product_in_span(V[:, i], V[:, j], dims)
            if prod is None:
                classes[i] = classes[j] = "entangled"
                continue
            other = V[:, i] - prod * np.vdot(prod, V[:, i])
            if np.linalg.norm(other) < 1e-6:
                other = V[:, j] - prod * np.vdot(prod, V[:, j])
            other /= np.linalg.norm(other)
            first, second = (prod, other) if i == 0 else (other, prod)
            V[:, i], V[:, j] = first, second
            for k in group:
                classes[k] = classify_pure(PureState.from_vector(V[:, k], dims))
        else:
            for k in group:
                classes[k] = "degenerate"
    neg = np.array([pure_negativity(PureState.from_vector(V[:, k], dims)) for k in range(len(w))])
    return ScanPoint(w, classes, neg, V)


# operations --------------------------------------------------------------------

def _factors(X):
    if not isinstance(X, ProductObservable):
        raise ValidationError("a product observable with explicit factors is required")
    return np.asarray(X.factorA), np.asarray(X.factorB)


def commutator_verdict(C: ProductObservable, L: ProductObservable) -> Tuple[bool, bool]:
    """Whether ``[C_A, L_A]`` and ``[C_B, L_B]`` are nonzero."""
    CA, CB = _factors(C)
    LA, LB = _factors(L)
    return (commutator_norm(CA, LA) > COMMUTATOR_TOL,
            commutator_norm(CB, LB) > COMMUTATOR_TOL)


def _decouples(M: np.ndarray, index: int, tol: float) -> bool:
    mask = np.ones(M.shape[0], dtype=bool)
    mask[index] = False
    return bool(np.max(np.abs(M[index, mask]), initial=0.0) < tol)


def zero_pattern(C: ProductObservable, L: ProductObservable, tol: float = 1e-12) -> dict:
    """Matrix elements of ``L`` that must vanish if the extremal states of ``C + lambda L`` stay product.

    ``L`` is written in the product eigenbasis of ``C``, relabelled so that
    the ground state of ``C`` is ``|00>`` and the most excited one is the
    last basis vector. Reported are ``|<kl|L|00>|`` for ``k, l > 0`` and
    ``|<ml|L|top>|`` for ``m, l`` below the top labels, and whether one
    factor of ``L`` decouples the ground label while the other decouples
    the top label. When no top state has local labels distinct from the
    ground state (e.g. ``Z (x) Z``) only the ground elements are reported.
    """
    CA, CB = _factors(C)
    LA, LB = _factors(L)
    dA, dB = CA.shape[0], CB.shape[0]
    wa, Ua = np.linalg.eigh(CA)
    wb, Ub = np.linalg.eigh(CB)
    gamma = np.outer(wa, wb)
    tie = 1e-12 * max(1.0, float(np.max(np.abs(gamma))))
    lows = list(zip(*np.nonzero(gamma <= gamma.min() + tie)))
    highs = list(zip(*np.nonzero(gamma >= gamma.max() - tie)))
    report = {"degenerate": bool(len(lows) > 1 or len(highs) > 1)}
    pairs = [(g, t) for g in lows for t in highs if g[0] != t[0] and g[1] != t[1]]
    (i0, j0), top_label = pairs[0] if pairs else (lows[0], None)
    report["top_applicable"] = top_label is not None
    if top_label is None:
        report["reason"] = "ground and top states of C share a local label; top elements skipped"
    order_a = [i0] + [k for k in range(dA) if k != i0 and (top_label is None or k != top_label[0])]
    order_b = [j0] + [k for k in range(dB) if k != j0 and (top_label is None or k != top_label[1])]
    if top_label is not None:
        order_a.append(top_label[0])
        order_b.append(top_label[1])
    Ua, Ub = Ua[:, order_a], Ub[:, order_b]
    La = Ua.conj().T @ LA @ Ua
    Lb = Ub.conj().T @ LB @ Ub
    ground = {(k, l): float(abs(La[k, 0] * Lb[l, 0])) for k in range(1, dA) for l in range(1, dB)}
    top = {}
    if top_label is not None:
        top = {(m, l): float(abs(La[m, dA - 1] * Lb[l, dB - 1]))
               for m in range(dA - 1) for l in range(dB - 1)}
    a_g, a_t = _decouples(La, 0, tol), _decouples(La, dA - 1, tol)
    b_g, b_t = _decouples(Lb, 0, tol), _decouples(Lb, dB - 1, tol)
    report.update(
        ground_elements=ground,
        top_elements=top,
        max_constrained=max(list(ground.values()) + list(top.values()), default=0.0),
        factorA_decouples=(a_g, a_t),
        factorB_decouples=(b_g, b_t),
        matches_block_pattern=bool(top_label is not None and ((a_g and b_t) or (a_t and b_g))),
        L_A=La, L_B=Lb,
    )
    return report


def lambda_scan(C, L, grid: Sequence[float] = None, dims=None, workers: int = 1) -> ScanResult:
    """Spectra and eigenstate classes of ``C + lambda L`` along ``grid``.

    The default grid is 201 points on ``[-5, 5]``. Grid points are
    independent; ``workers > 1`` spreads them over a thread pool without
    changing the result.
    """
    C = as_operator(C, dims)
    L = as_operator(L, C.dims)
    grid = np.linspace(-5, 5, 201) if grid is None else np.asarray(grid, dtype=float)
    if grid.size == 0 or np.any(np.diff(grid) <= 0):
        raise ValidationError("lambda grid must be non-empty and strictly increasing")
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            points = list(pool.map(lambda lam: classify_spectrum(C + lam * L), grid))
    else:
        points = [classify_spectrum(C + lam * L) for lam in grid]
    return ScanResult(grid, points)


def degenerate_projection(C, L) -> dict:
    """First-order degenerate perturbation of the ground space of ``C`` by ``L``.

    Applies when the ground space of ``C`` is two-dimensional and spanned
    by two product vectors. The ground state of ``P L P`` on that space is
    the zeroth-order ground state of ``C + lambda L`` for small positive
    ``lambda``.
    """
    C = as_operator(C)
    L = as_operator(L, C.dims)
    w, V = np.linalg.eigh(C.matrix)
    ground = _clusters(w)[0]
    if len(ground) != 2:
        return {"applicable": False, "reason": f"ground space has dimension {len(ground)}"}
    Vg = V[:, ground]
    p1 = product_in_span(Vg[:, 0], Vg[:, 1], C.dims)
    if p1 is None:
        return {"applicable": False, "reason": "ground space contains no product vector"}
    comp = Vg[:, 0] - p1 * np.vdot(p1, Vg[:, 0])
    if np.linalg.norm(comp) < 1e-6:
        comp = Vg[:, 1] - p1 * np.vdot(p1, Vg[:, 1])
    comp /= np.linalg.norm(comp)
    M = Vg.conj().T @ L.matrix @ Vg
    mw, mv = np.linalg.eigh((M + M.conj().T) / 2)
    if mw[1] - mw[0] < 1e-12 * max(1.0, abs(mw).max()):
        # PLP is degenerate on the whole ground space, which holds product vectors
        chi = p1
        entangled = False
    else:
        chi = Vg @ mv[:, 0]
        entangled = classify_pure(PureState.from_vector(chi, C.dims)) == "entangled"
    state = PureState.from_vector(chi, C.dims)
    return {
        "applicable": True,
        "spanned_by_products": second_schmidt(PureState.from_vector(comp, C.dims)) < 1e-8,
        "plp_eigenvalues": mw,
        "chi": np.array(state.amplitudes),
        "entangled": bool(entangled),
        "negativity": pure_negativity(state),
    }


def _direction_grid(n_uniform: int = 720) -> np.ndarray:
    small = np.logspace(-6, -1, 26)
    thetas = [np.linspace(0, 2 * np.pi, n_uniform, endpoint=False)]
    for axis in (0.0, np.pi / 2, np.pi, 3 * np.pi / 2):
        thetas += [axis + small, axis - small]
    return np.sort(np.mod(np.concatenate(thetas), 2 * np.pi))


def extremal_search(C, L, thetas: Optional[np.ndarray] = None) -> dict:
    """Look for an entangled ground or top eigenstate of ``cos(t) C + sin(t) L``.

    Ground states of ``-X`` are top states of ``X``, so scanning ground and
    top states over the half-open circle covers every slope pair.
    """
    C = as_operator(C)
    L = as_operator(L, C.dims)
    thetas = _direction_grid() if thetas is None else thetas
    best = {"negativity": 0.0}
    ambiguous = 0
    for t in thetas:
        alpha, beta = np.cos(t), np.sin(t)
        pt = classify_spectrum(alpha * C + beta * L)
        for k, sign in ((0, 1.0), (-1, -1.0)):
            cls = pt.classes[k]
            if cls in ("degenerate", "indeterminate"):
                ambiguous += 1
            if cls == "entangled" and pt.negativities[k] > best["negativity"]:
                best = {"negativity": float(pt.negativities[k]),
                        "slopes": (float(sign * alpha), float(sign * beta)),
                        "state": pt.vectors[:, k].copy(), "theta": float(t)}
    best["ambiguous"] = ambiguous
    best["directions"] = len(thetas)
    return best


def usefulness_verdict(C: ProductObservable, L: ProductObservable,
                       thetas: Optional[np.ndarray] = None) -> Verdict:
    """Decide whether ``C`` and ``L`` can detect entanglement together.

    Returned slopes ``(alpha, beta)`` are such that the ground state of
    ``alpha C + beta L`` is entangled; the ground energy then lies below
    every separable value of that combination.
    """
    sides = commutator_verdict(C, L)
    data = {"local_commutators_nonzero": sides}
    if not all(sides):
        side = "A" if not sides[0] else "B"
        return Verdict(USELESS_COMMUTATOR, None,
                       f"local factors on side {side} commute", data)

    dims = tuple(sorted(C.dims))
    found = extremal_search(C, L, thetas)
    data["search"] = {k: v for k, v in found.items() if k != "state"}
    useful = found["negativity"] > USEFUL_NEGATIVITY
    slopes = found.get("slopes") if useful else None

    if dims == (2, 2) and useful:
        return Verdict(USEFUL_CERTIFIED, slopes,
                       "two qubits with non-commuting local factors on both sides", data)
    if dims == (2, 3):
        w = np.linalg.eigvalsh(C.expand().matrix)
        scale = max(w[-1] - w[0], 1.0)
        nondeg = (w[1] - w[0] > DEGENERACY_RTOL * scale) and (w[-1] - w[-2] > DEGENERACY_RTOL * scale)
        data["C_extremes_nondegenerate"] = bool(nondeg)
        if nondeg and useful:
            return Verdict(USEFUL_CERTIFIED, slopes,
                           "qubit-qutrit with non-degenerate extremal states of C", data)
        if not nondeg and not useful:
            return Verdict(INCONCLUSIVE, None,
                           "qubit-qutrit with degenerate extremal states of C; no entangled "
                           "extremal eigenstate found", data)
    if useful:
        return Verdict(USEFUL_NUMERICAL, slopes,
                       f"entangled extremal eigenstate with negativity {found['negativity']:.3e}", data)
    if found["ambiguous"]:
        return Verdict(INCONCLUSIVE, None,
                       f"{found['ambiguous']} extremal eigenspaces could not be classified", data)
    return Verdict(USELESS_NUMERICAL_EVIDENCE, None,
                   f"all extremal eigenstates product over {found['directions']} directions "
                   "(numerical evidence, not a proof)", data)


def joint_measurability_unbiased(m, n=None) -> bool:
    """Joint measurability of unbiased qubit effects ``(1 + m.sigma)/2`` and ``(1 + n.sigma)/2``.

    The pair is jointly measurable iff ``|m + n| + |m - n| <= 2``. Accepts
    two Bloch vectors or a single :class:`EffectPair`.
    """
    if isinstance(m, EffectPair):
        m, n = m.blochM, m.blochN
    m, n = np.asarray(m, dtype=float), np.asarray(n, dtype=float)
    for v in (m, n):
        if v.shape != (3,) or np.linalg.norm(v) > 1 + 1e-12:
            raise ValidationError(f"invalid unbiased effect with Bloch vector {v}")
    return bool(np.linalg.norm(m + n) + np.linalg.norm(m - n) <= 2 + 1e-12)
