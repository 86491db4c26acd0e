import numpy as np
import pytest

from oracles import legendre_oracle, zz_xx_oracle
from ultrafine import legendre
from ultrafine.catalog import catalog
from ultrafine.core import (SX, SZ, BipartiteOperator, ValidationError, as_operator, bell_basis,
                            geometric_measure_pure, kron, random_hermitian)
from ultrafine.legendre import (bell_diag_legendre, bell_diagonal, eps_bound, fig1_grid,
                                legendre_gm, xxzz_closed_form)
from ultrafine.sepvalue import InfeasibleError, sep_max

ZZ = kron(SZ, SZ)
XX = kron(SX, SX)


def bell_op(weights):
    B = bell_basis()
    return B @ np.diag(weights) @ B.conj().T


def test_bell_diag_examples():
    assert bell_diag_legendre(1, 0) == pytest.approx((np.sqrt(2)) / 2, abs=1e-15)
    assert bell_diag_legendre(0.5, 0.5) == pytest.approx(0.5, abs=1e-15)
    with pytest.raises(ValidationError):
        bell_diag_legendre(0, 1)


def test_bell_diag_large_gap_behaviour():
    # as the gap grows the transform approaches lambda1 - 1/2 from above
    for gap in (1.0, 10.0, 1e3, 1e6):
        B = bell_diag_legendre(gap, 0.0)
        assert B >= gap - 0.5 - 1e-12
        assert B - (gap - 0.5) <= 1 / (4 * gap) + 1e-15 * gap
    for l1, l2 in [(0.3, 0.3), (2, -1), (0.1, 0.05)]:
        assert bell_diag_legendre(l1, l2) >= (l1 + l2) / 2 - 1e-15


def test_bell_diagonal_detection():
    np.testing.assert_allclose(bell_diagonal(ZZ), [1, 1, -1, -1], atol=1e-15)
    np.testing.assert_allclose(bell_diagonal(XX), [1, -1, 1, -1], atol=1e-15)
    assert bell_diagonal(kron(SZ, np.eye(2))) is None


@pytest.mark.parametrize("weights", [[1, 0, 0, 0], [0.3, 0.9, -0.2, 0.5], [2, -1, 0.5, 1.9]])
def test_closed_form_against_oracle(weights):
    X = bell_op(weights)
    w = sorted(weights)
    assert abs(bell_diag_legendre(w[-1], w[-2]) - legendre_oracle(X, (2, 2))) < 1e-6


@pytest.mark.parametrize("weights", [[1, 0, 0, 0], [0.3, 0.9, -0.2, 0.5]])
def test_heuristic_matches_closed_form(weights):
    X = bell_op(weights)
    w = sorted(weights)
    res = legendre_gm(X, analytic=False, restarts=20)
    assert not res.certified
    assert abs(res.value - bell_diag_legendre(w[-1], w[-2])) < 1e-8


def test_analytic_optimizers_attain_value():
    X = as_operator(bell_op([0.3, 0.9, -0.2, 0.5]))
    res = legendre_gm(X)
    assert res.certified
    gm, _ = geometric_measure_pure(res.optimizerPsi)
    assert abs(X.expectation(res.optimizerPsi) - gm - res.value) < 1e-12


@pytest.mark.parametrize("dims,seed", [((2, 2), 0), ((2, 3), 1), ((3, 3), 2)])
def test_generic_transform_against_oracle(dims, seed):
    rng = np.random.default_rng(seed)
    X = random_hermitian(dims[0] * dims[1], rng)
    res = legendre_gm(X, dims=dims, restarts=30, seed=seed)
    oracle = legendre_oracle(X, dims)
    assert res.value <= oracle + 1e-8
    assert oracle - res.value < 1e-6
    gm, _ = geometric_measure_pure(res.optimizerPsi)
    op = BipartiteOperator(dims, X)
    assert abs(op.expectation(res.optimizerPsi) - gm - res.value) < 1e-10


def test_transform_sandwich(rng):
    for _ in range(5):
        X = as_operator(random_hermitian(4, rng), (2, 2))
        val = legendre_gm(X, restarts=10).value
        assert val >= sep_max(X, restarts=16).value - 1e-9
        assert val <= np.linalg.eigvalsh(X.matrix)[-1] + 1e-12
        shifted = legendre_gm(X + 0.7 * as_operator(np.eye(4), (2, 2)), restarts=10).value
        assert abs(shifted - val - 0.7) < 1e-8


def test_transform_convexity(rng):
    X = as_operator(random_hermitian(4, rng), (2, 2))
    Y = as_operator(random_hermitian(4, rng), (2, 2))
    fX, fY = legendre_gm(X, restarts=10).value, legendre_gm(Y, restarts=10).value
    for t in (0.25, 0.5, 0.75):
        mid = legendre_gm(t * X + (1 - t) * Y, restarts=10).value
        assert mid <= t * fX + (1 - t) * fY + 1e-8


def test_xxzz_closed_form_examples():
    assert xxzz_closed_form(1, 1) == 0.5
    assert xxzz_closed_form(0.5, 0.5) == 0.0
    assert xxzz_closed_form(-0.8, 0.6) == pytest.approx(0.5 * (1 - np.sqrt(1 - 0.16)), abs=1e-15)
    with pytest.raises(ValidationError):
        xxzz_closed_form(1.1, 0)


def test_xxzz_closed_form_against_lp_oracle():
    for c in np.linspace(-1, 1, 9):
        for l in np.linspace(-1, 1, 9):
            assert abs(xxzz_closed_form(c, l) - zz_xx_oracle(c, l)) < 1e-9


def test_eps_bound_recovers_closed_form():
    for c, l in [(0.9, 0.8), (1.0, 1.0), (0.2, 0.3), (-0.7, 0.7), (0.6, -0.95)]:
        res = eps_bound(c, l, ZZ, XX)
        assert res.certified
        assert abs(res.epsilon - xxzz_closed_form(c, l)) < 1e-6


def test_eps_bound_heuristic_path(monkeypatch):
    monkeypatch.setattr(legendre, "bell_diagonal", lambda X, tol=1e-12: None)
    res = eps_bound(0.9, 0.8, ZZ, XX, restarts=6)
    assert not res.certified
    assert abs(res.epsilon - xxzz_closed_form(0.9, 0.8)) < 1e-5


def test_eps_bound_infeasible():
    with pytest.raises(InfeasibleError):
        eps_bound(1.2, 0.0, ZZ, XX)


def test_eps_bound_generic_is_a_lower_bound():
    # qutrit pair: compare against the measure of the states that realise (c, l)
    e = catalog("qutrit-counterexample")
    C, L = as_operator(e.C), as_operator(e.L)
    rng = np.random.default_rng(5)
    from ultrafine.core import haar_state
    for _ in range(2):
        psi = haar_state((3, 3), rng)
        c, l = C.expectation(psi), L.expectation(psi)
        res = eps_bound(c, l, C, L, restarts=4)
        assert res.epsilon <= geometric_measure_pure(psi)[0] + 1e-8


def test_fig1_grid_shape_and_symmetry():
    rows = fig1_grid(11)
    assert len(rows) == 121
    table = {(round(c, 12), round(l, 12)): e for c, l, e in rows}
    for (c, l), e in table.items():
        assert e == pytest.approx(table[(round(-c, 12), round(l, 12))], abs=1e-14)
        assert e == pytest.approx(table[(round(l, 12), round(c, 12))], abs=1e-14)
        assert 0 <= e <= 0.5
    with pytest.raises(ValidationError):
        fig1_grid(1)
