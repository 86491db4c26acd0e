"""
Dense bipartite linear algebra and pure-state entanglement quantifiers.

Everything here works on small complex Hermitian matrices (total dimension
at most 16), so plain dense numpy arrays are used throughout. The value
types are frozen dataclasses whose arrays are marked read-only.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence, Tuple, Union

import numpy as np

HERMITIAN_TOL = 1e-12
PRODUCT_TOL = 1e-9
ENTANGLED_TOL = 1e-6

I2 = np.eye(2, dtype=complex)
SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)

Dims = Tuple[int, int]


class ValidationError(ValueError):
    """Raised when an input violates a structural precondition."""


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=complex, copy=True)
    a.setflags(write=False)
    return a


def hermitize(H, tol: float = HERMITIAN_TOL, name: str = "operator") -> np.ndarray:
    """Return ``(H + H^dagger)/2`` after checking that ``H`` is Hermitian.

    The check is absolute for matrices of unit scale and relative for
    larger ones.
    """
    H = np.asarray(H, dtype=complex)
    if H.ndim != 2 or H.shape[0] != H.shape[1]:
        raise ValidationError(f"{name} must be a square matrix, got shape {H.shape}")
    scale = max(1.0, float(np.max(np.abs(H)))) if H.size else 1.0
    dev = float(np.max(np.abs(H - H.conj().T))) if H.size else 0.0
    if dev > tol * scale:
        raise ValidationError(f"{name} is not Hermitian (max |H - H^dagger| = {dev:.3e})")
    return (H + H.conj().T) / 2


def _check_dims(dims, side: int) -> Dims:
    dims = tuple(int(d) for d in dims)
    if len(dims) != 2 or min(dims) < 1:
        raise ValidationError(f"dims must be two positive integers, got {dims}")
    if dims[0] * dims[1] != side:
        raise ValidationError(f"dims {dims} do not multiply to matrix side {side}")
    return dims


@dataclass(frozen=True)
class BipartiteOperator:
    """Hermitian operator on a ``dA x dB`` tensor-product space."""

    dims: Dims
    matrix: np.ndarray = field(repr=False)

    def __post_init__(self):
        M = hermitize(self.matrix)
        object.__setattr__(self, "dims", _check_dims(self.dims, M.shape[0]))
        object.__setattr__(self, "matrix", _frozen(M))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def __add__(self, other):
        other = as_operator(other, self.dims)
        return BipartiteOperator(self.dims, self.matrix + other.matrix)

    def __sub__(self, other):
        other = as_operator(other, self.dims)
        return BipartiteOperator(self.dims, self.matrix - other.matrix)

    def __neg__(self):
        return BipartiteOperator(self.dims, -self.matrix)

    def __mul__(self, k: float):
        return BipartiteOperator(self.dims, float(k) * self.matrix)

    __rmul__ = __mul__

    def expectation(self, state) -> float:
        """``<psi|X|psi>`` for a pure state or ``Tr(rho X)`` for a matrix."""
        if isinstance(state, PureState):
            v = state.amplitudes
            return float(np.real(np.vdot(v, self.matrix @ v)))
        rho = np.asarray(state)
        if rho.ndim == 1:
            return float(np.real(np.vdot(rho, self.matrix @ rho)))
        return float(np.real(np.trace(rho @ self.matrix)))

    def tensor(self) -> np.ndarray:
        """View as a rank-4 array indexed ``[i, k, j, l]`` for ``<ik|X|jl>``."""
        dA, dB = self.dims
        return self.matrix.reshape(dA, dB, dA, dB)


@dataclass(frozen=True)
class ProductObservable:
    """Product operator ``A (x) B`` that keeps its two local factors."""

    factorA: np.ndarray = field(repr=False)
    factorB: np.ndarray = field(repr=False)

    def __post_init__(self):
        object.__setattr__(self, "factorA", _frozen(hermitize(self.factorA, name="factor A")))
        object.__setattr__(self, "factorB", _frozen(hermitize(self.factorB, name="factor B")))

    @property
    def dims(self) -> Dims:
        return (self.factorA.shape[0], self.factorB.shape[0])

    def expand(self) -> BipartiteOperator:
        return BipartiteOperator(self.dims, kron(self.factorA, self.factorB))


@dataclass(frozen=True)
class PureState:
    """Normalized state vector of a bipartite system."""

    dims: Dims
    amplitudes: np.ndarray = field(repr=False)

    def __post_init__(self):
        v = np.asarray(self.amplitudes, dtype=complex).ravel()
        object.__setattr__(self, "dims", _check_dims(self.dims, v.size))
        norm = np.linalg.norm(v)
        if abs(norm - 1.0) > HERMITIAN_TOL:
            raise ValidationError(f"state is not normalized (norm = {norm!r})")
        object.__setattr__(self, "amplitudes", _frozen(v))

    @classmethod
    def from_vector(cls, v, dims) -> "PureState":
        v = np.asarray(v, dtype=complex).ravel()
        return cls(dims, v / np.linalg.norm(v))

    @classmethod
    def product(cls, a, b) -> "PureState":
        a = np.asarray(a, dtype=complex)
        b = np.asarray(b, dtype=complex)
        return cls.from_vector(np.kron(a / np.linalg.norm(a), b / np.linalg.norm(b)),
                               (a.size, b.size))

    def amplitude_matrix(self) -> np.ndarray:
        return self.amplitudes.reshape(self.dims)

    def density_matrix(self) -> np.ndarray:
        return np.outer(self.amplitudes, self.amplitudes.conj())


@dataclass(frozen=True)
class SchmidtData:
    coefficients: np.ndarray
    localBasisA: np.ndarray = field(repr=False)  # columns are |a_i>
    localBasisB: np.ndarray = field(repr=False)  # columns are |b_i>

    def reconstruct(self) -> np.ndarray:
        k = len(self.coefficients)
        return np.einsum("i,ai,bi->ab", self.coefficients,
                         self.localBasisA[:, :k], self.localBasisB[:, :k]).ravel()


@dataclass(frozen=True)
class Spectrum:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray = field(repr=False)  # columns

    def residual(self, H) -> float:
        H = np.asarray(H, dtype=complex)
        V, w = self.eigenvectors, self.eigenvalues
        return float(np.max(np.abs(H @ V - V * w))) if w.size else 0.0


def as_operator(X, dims=None) -> BipartiteOperator:
    """Coerce ``X`` into a :class:`BipartiteOperator`.

    Plain arrays need ``dims`` unless their side is a perfect square, in
    which case two equal local dimensions are assumed.
    """
    if isinstance(X, BipartiteOperator):
        return X
    if isinstance(X, ProductObservable):
        return X.expand()
    M = np.asarray(X, dtype=complex)
    if dims is None:
        d = int(round(np.sqrt(M.shape[0])))
        if d * d != M.shape[0]:
            raise ValidationError(f"cannot infer dims for a {M.shape[0]}x{M.shape[0]} matrix")
        dims = (d, d)
    return BipartiteOperator(tuple(dims), M)


def kron(A, B) -> np.ndarray:
    """Kronecker product with row index ``i*dB + k``."""
    return np.kron(np.asarray(A, dtype=complex), np.asarray(B, dtype=complex))


def _matrix(H) -> np.ndarray:
    if isinstance(H, BipartiteOperator):
        return np.array(H.matrix)
    if isinstance(H, ProductObservable):
        return np.array(H.expand().matrix)
    return hermitize(H)


def eigh(H, method: str = "lapack") -> Spectrum:
    """Ascending eigen-decomposition of a Hermitian matrix.

    ``method="jacobi"`` runs the cyclic Jacobi solver in :func:`jacobi_eigh`
    instead of LAPACK.
    """
    M = _matrix(H)
    if method == "jacobi":
        w, V = jacobi_eigh(M)
    elif method == "lapack":
        w, V = np.linalg.eigh(M)
    else:
        raise ValueError(f"unknown eigensolver {method!r}")
    return Spectrum(w, V)


def jacobi_eigh(H, tol: float = 1e-13, max_sweeps: int = 100):
    """Cyclic Jacobi diagonalization of a complex Hermitian matrix.

    Each rotation first removes the phase of the pivot with a diagonal
    unitary and then applies a real Givens rotation.

    Returns
    -------
    w : ndarray
        Ascending eigenvalues.
    V : ndarray
        Unitary matrix whose columns are the eigenvectors.
    """
    A = np.array(H, dtype=complex)
    n = A.shape[0]
    V = np.eye(n, dtype=complex)
    thresh = tol * max(1.0, np.linalg.norm(A))
    for _ in range(max_sweeps):
        off = np.sqrt(np.sum(np.abs(A - np.diag(np.diag(A))) ** 2))
        if off < thresh:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                r = abs(apq)
                if r < 1e-300:
                    continue
                phase = apq / r
                app, aqq = A[p, p].real, A[q, q].real
                theta = (aqq - app) / (2 * r)
                t = (1.0 if theta >= 0 else -1.0) / (abs(theta) + np.hypot(theta, 1.0))
                c = 1.0 / np.hypot(t, 1.0)
                s = t * c
                U = np.array([[c, s], [-s * np.conj(phase), c * np.conj(phase)]])
                idx = [p, q]
                A[:, idx] = A[:, idx] @ U
                A[idx, :] = U.conj().T @ A[idx, :]
                V[:, idx] = V[:, idx] @ U
    w = np.real(np.diag(A))
    order = np.argsort(w, kind="stable")
    return w[order], V[:, order]


def partial_transpose(rho) -> BipartiteOperator:
    """Transpose the B indices of a bipartite operator."""
    op = as_operator(rho)
    dA, dB = op.dims
    T = op.matrix.reshape(dA, dB, dA, dB).transpose(0, 3, 2, 1).reshape(op.dim, op.dim)
    return BipartiteOperator(op.dims, T)


def schmidt(psi: PureState) -> SchmidtData:
    U, s, Vh = np.linalg.svd(psi.amplitude_matrix())
    return SchmidtData(s, U, Vh.T)


def second_schmidt(psi: PureState) -> float:
    s = np.linalg.svd(psi.amplitude_matrix(), compute_uv=False)
    return float(s[1]) if s.size > 1 else 0.0


def classify_pure(psi: PureState) -> str:
    """``"product"``, ``"entangled"`` or ``"indeterminate"`` from the second Schmidt coefficient."""
    s2 = second_schmidt(psi)
    if s2 < PRODUCT_TOL:
        return "product"
    if s2 > ENTANGLED_TOL:
        return "entangled"
    return "indeterminate"


def _density(rho, dims=None) -> BipartiteOperator:
    if isinstance(rho, PureState):
        return BipartiteOperator(rho.dims, rho.density_matrix())
    return as_operator(rho, dims)


def negativity(rho, dims=None, tol: float = 1e-10) -> float:
    """Sum of the magnitudes of the negative eigenvalues of the partial transpose.

    Accepts a density matrix or a :class:`PureState`.
    """
    op = _density(rho, dims)
    w = np.linalg.eigvalsh(op.matrix)
    if w[0] < -tol or abs(np.sum(w) - 1.0) > tol:
        raise ValidationError("negativity requires a positive semidefinite unit-trace matrix")
    wpt = np.linalg.eigvalsh(partial_transpose(op).matrix)
    return float(np.abs(wpt[wpt < 0]).sum())


def pure_negativity(psi: PureState) -> float:
    """Negativity of ``|psi><psi|``, equal to ``((sum of Schmidt coefficients)^2 - 1) / 2``."""
    s = np.linalg.svd(psi.amplitude_matrix(), compute_uv=False)
    return float(max(0.0, (np.sum(s) ** 2 - 1) / 2))


def geometric_measure_pure(psi: PureState) -> Tuple[float, PureState]:
    """Geometric measure of a pure state and its closest product state.

    Returns ``1 - s_max**2`` where ``s_max`` is the largest Schmidt
    coefficient, together with ``|a_1>|b_1>``.
    """
    sd = schmidt(psi)
    closest = PureState.product(sd.localBasisA[:, 0], sd.localBasisB[:, 0])
    return float(max(0.0, 1.0 - sd.coefficients[0] ** 2)), closest


def commutator_norm(A, B) -> float:
    A = np.asarray(A, dtype=complex)
    B = np.asarray(B, dtype=complex)
    if A.shape != B.shape:
        raise ValidationError(f"dimension mismatch: {A.shape} vs {B.shape}")
    return float(np.linalg.norm(A @ B - B @ A, 2))


def bell_basis() -> np.ndarray:
    """Columns ``Phi+, Phi-, Psi+, Psi-`` in the computational basis."""
    r = 1 / np.sqrt(2)
    return np.array([[r, r, 0, 0],
                     [0, 0, r, r],
                     [0, 0, r, -r],
                     [r, -r, 0, 0]], dtype=complex)


# random objects ------------------------------------------------------------

def haar_vector(d: int, rng: np.random.Generator) -> np.ndarray:
    z = rng.normal(size=d) + 1j * rng.normal(size=d)
    return z / np.linalg.norm(z)


def haar_state(dims, rng: np.random.Generator) -> PureState:
    return PureState(tuple(dims), haar_vector(dims[0] * dims[1], rng))


def random_product_state(dims, rng: np.random.Generator) -> PureState:
    return PureState.product(haar_vector(dims[0], rng), haar_vector(dims[1], rng))


def random_hermitian(d: int, rng: np.random.Generator, scale: float = 1.0) -> np.ndarray:
    G = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    return scale * (G + G.conj().T) / 2


def random_density_matrix(d: int, rng: np.random.Generator, rank: Optional[int] = None) -> np.ndarray:
    rank = d if rank is None else rank
    G = rng.normal(size=(d, rank)) + 1j * rng.normal(size=(d, rank))
    rho = G @ G.conj().T
    return rho / np.trace(rho).real
