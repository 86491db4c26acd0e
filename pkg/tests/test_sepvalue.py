import numpy as np
import pytest

from oracles import sdp_constrained_ppt, sdp_hyperplane_min, sep_max_oracle
from ultrafine.catalog import catalog
from ultrafine.core import (SX, SY, SZ, BipartiteOperator, ValidationError, as_operator, kron,
                            random_hermitian)
from ultrafine.sepvalue import (InfeasibleError, constrained_sep_max, hyperplane_min,
                                is_witness, product_seesaw, pure_constrained_sep_max, sep_max,
                                sep_min, uew_evaluate)

ZZ = kron(SZ, SZ)
XX = kron(SX, SX)
I4 = np.eye(4)


def test_sep_max_examples():
    assert abs(sep_max(ZZ).value - 1) < 1e-12
    assert abs(sep_max(ZZ + XX).value - 1) < 1e-10
    assert abs(sep_max(ZZ + XX + kron(SY, SY)).value - 1) < 1e-10
    B = np.zeros((4, 4))
    B[0, 0] = B[0, 3] = B[3, 0] = B[3, 3] = 0.5   # |Phi+><Phi+|
    assert abs(sep_max(B).value - 0.5) < 1e-10


def test_sep_max_noisy_sum(noisy):
    C, L = noisy
    assert abs(sep_max(C + L).value - 9 / 8) < 1e-9


def test_sep_max_optimizer_attains_value(rng):
    X = as_operator(random_hermitian(6, rng), (2, 3))
    res = sep_max(X, restarts=32)
    assert abs(res.expectation(X) - res.value) < 1e-10
    assert abs(np.trace(res.density_matrix()) - 1) < 1e-12


@pytest.mark.parametrize("dims,seed", [((2, 2), 0), ((2, 3), 1), ((3, 3), 2), ((2, 4), 3)])
def test_sep_max_against_sampling_oracle(dims, seed):
    rng = np.random.default_rng(seed)
    X = random_hermitian(dims[0] * dims[1], rng)
    res = sep_max(X, dims=dims, seed=seed)
    oracle = sep_max_oracle(X, dims)
    assert res.value >= oracle - 1e-8
    assert res.value <= np.linalg.eigvalsh(X)[-1] + 1e-12


def test_sep_max_bounded_by_spectrum(rng):
    for _ in range(10):
        X = as_operator(random_hermitian(4, rng), (2, 2))
        w = np.linalg.eigvalsh(X.matrix)
        assert w[0] - 1e-12 <= sep_min(X).value <= sep_max(X).value <= w[-1] + 1e-12


def test_sep_max_is_deterministic(rng):
    X = as_operator(random_hermitian(9, rng), (3, 3))
    assert sep_max(X, seed=7).value == sep_max(X, seed=7).value


def test_seesaw_is_monotone(rng):
    X = as_operator(random_hermitian(6, rng), (2, 3))
    a = rng.normal(size=(1, 2)) + 0j
    b = rng.normal(size=(1, 3)) + 0j
    a /= np.linalg.norm(a)
    b /= np.linalg.norm(b)
    start = np.real(np.kron(a[0], b[0]).conj() @ X.matrix @ np.kron(a[0], b[0]))
    out = product_seesaw(X, a, b, tol=1e-12, max_iter=300)
    assert out[2][0] >= start - 1e-12


def test_is_witness():
    W = 0.5 * I4 - np.array([[0.5, 0, 0, 0.5], [0, 0, 0, 0], [0, 0, 0, 0], [0.5, 0, 0, 0.5]])
    rep = is_witness(W)
    assert rep.isWitness
    assert abs(rep.sepMin) < 1e-9
    assert abs(rep.minEigenvalue + 0.5) < 1e-12
    assert not is_witness(I4).isWitness
    assert not is_witness(-ZZ).isWitness


def test_constrained_theorem1_rank2_beats_pure(theorem1):
    C, L = theorem1
    for c in np.linspace(-0.9, 0.9, 7):
        res, scan = constrained_sep_max(L, C, c, restarts=16)
        assert abs(res.value - 1) < 1e-6
        assert res.certifiedGap < 1e-6
        pure = pure_constrained_sep_max(L, C, c, restarts=16)
        # product states |ab> satisfy <C> = p - q and <L> = p + q with p, q bounded by a product
        # structure; the optimum is (1 + c^2) / 2
        assert abs(pure.value - (1 + c * c) / 2) < 1e-6
        assert res.value - pure.value >= (1 - c * c) / 2 - 1e-6


def test_pure_never_exceeds_mixed(noisy):
    C, L = noisy
    for c in (0.3, 0.5, 0.6, 0.7):
        res, _ = constrained_sep_max(L, C, c, restarts=16)
        pure = pure_constrained_sep_max(L, C, c, restarts=16)
        assert pure.value <= res.value + 1e-8


def test_constrained_result_is_feasible(noisy):
    C, L = noisy
    res, scan = constrained_sep_max(L, C, 0.6)
    rho = res.density_matrix()
    assert abs(np.trace(rho) - 1) < 1e-12
    assert abs(np.real(np.trace(C.matrix @ rho)) - 0.6) < 1e-9
    assert abs(res.expectation(L) - res.value) < 1e-10
    assert all(t.weight >= 0 for t in res.optimizer)
    # weak duality: dual value bounds the primal
    assert scan.dualValue >= res.value - 1e-12
    assert res.certifiedGap < 1e-6


@pytest.mark.parametrize("seed", range(5))
def test_constrained_against_ppt_sdp(seed):
    pytest.importorskip("cvxpy")
    rng = np.random.default_rng(100 + seed)
    L = as_operator(random_hermitian(4, rng), (2, 2))
    C = as_operator(random_hermitian(4, rng), (2, 2))
    lo, hi = sep_min(C).value, sep_max(C).value
    c = lo + (hi - lo) * rng.uniform(0.2, 0.8)
    res, scan = constrained_sep_max(L, C, c)
    oracle = sdp_constrained_ppt(L.matrix, C.matrix, c)
    assert abs(scan.dualValue - oracle) < 1e-5
    assert abs(res.value - oracle) < 1e-5


def test_dual_value_is_convex_in_c(noisy):
    C, L = noisy
    cs = np.linspace(0.1, 0.7, 7)
    g = [constrained_sep_max(L, C, c, restarts=16)[1].dualValue for c in cs]
    # the constrained maximum is concave in c
    assert np.all(np.diff(g, 2) <= 1e-7)


def test_constrained_infeasible(noisy):
    C, L = noisy
    with pytest.raises(InfeasibleError):
        constrained_sep_max(L, C, 0.95)


def test_constrained_dims_mismatch():
    with pytest.raises(ValidationError):
        constrained_sep_max(as_operator(np.eye(6), (2, 3)), as_operator(np.eye(4), (2, 2)), 1.0)


def test_ansatz_flag_beyond_two_qubits(rng):
    L = as_operator(random_hermitian(6, rng), (2, 3))
    C = as_operator(random_hermitian(6, rng), (2, 3))
    lo, hi = sep_min(C).value, sep_max(C).value
    res, _ = constrained_sep_max(L, C, (lo + hi) / 2, restarts=16)
    assert "ansatz" in res.flags


def test_hyperplane_min_examples():
    val, _ = hyperplane_min(ZZ, XX, 0.0)
    assert abs(val + 1) < 1e-9
    val, _ = hyperplane_min(ZZ, ZZ, 0.5)
    assert abs(val - 0.5) < 1e-9
    with pytest.raises(InfeasibleError):
        hyperplane_min(ZZ, XX, 1.5)


@pytest.mark.parametrize("seed", range(4))
def test_hyperplane_min_against_sdp(seed):
    pytest.importorskip("cvxpy")
    rng = np.random.default_rng(200 + seed)
    dims = (2, 2) if seed % 2 == 0 else (2, 3)
    W = random_hermitian(dims[0] * dims[1], rng)
    C = random_hermitian(dims[0] * dims[1], rng)
    w = np.linalg.eigvalsh(C)
    c = w[0] + (w[-1] - w[0]) * rng.uniform(0.1, 0.9)
    val, _ = hyperplane_min(as_operator(W, dims), as_operator(C, dims), c)
    assert abs(val - sdp_hyperplane_min(W, C, c)) < 1e-6


def test_hyperplane_min_dominates_sampled_mixtures(noisy, rng):
    # rank-2 mixtures of random pure states moved onto the hyperplane never go below it
    C, L = noisy
    W = 0.5223 * I4 - L.matrix
    val, _ = hyperplane_min(as_operator(W), C, 0.6)
    Cm = C.matrix
    for _ in range(2000):
        u = rng.normal(size=4) + 1j * rng.normal(size=4)
        v = rng.normal(size=4) + 1j * rng.normal(size=4)
        u, v = u / np.linalg.norm(u), v / np.linalg.norm(v)
        cu, cv = np.real(u.conj() @ Cm @ u), np.real(v.conj() @ Cm @ v)
        if (cu - 0.6) * (cv - 0.6) > 0:
            continue
        p = (0.6 - cv) / (cu - cv)
        w_val = p * np.real(u.conj() @ W @ u) + (1 - p) * np.real(v.conj() @ W @ v)
        assert w_val >= val - 1e-10


def test_uew_detection_logic(noisy):
    C, L = noisy
    rep = uew_evaluate(L, C, 0.6, l=0.6)
    assert rep.detected is True
    assert uew_evaluate(L, C, 0.6, l=0.5).detected is False
    assert uew_evaluate(L, C, 0.6).detected is None
    np.testing.assert_allclose(rep.witness.matrix, rep.gc * I4 - L.matrix, atol=1e-15)
