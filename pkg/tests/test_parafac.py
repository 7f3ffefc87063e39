import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tensoraudit.errors import ArgumentError, NumericalError
from tensoraudit.parafac import (
    ParafacModel,
    parafac_objective,
    parafac_run,
    update_factor,
)
from tensoraudit.t1 import identity_padded, pca_start
from tensoraudit.tensor import frobenius_norm_sq, reconstruct_parafac


def objective_loop(X, model):
    total = 0.0
    for i, j, k in np.ndindex(*X.shape):
        fit = sum(model.U[i, r] * model.V[j, r] * model.W[k, r] for r in range(model.rank))
        total += (X[i, j, k] - fit) ** 2
    return total


def test_objective_cases(rng):
    model = ParafacModel(*(rng.standard_normal((n, 2)) for n in (3, 4, 2)))
    X = reconstruct_parafac(model.U, model.V, model.W)
    assert parafac_objective(X, model) <= 1e-12 * frobenius_norm_sq(X)
    zero = ParafacModel(np.zeros((3, 2)), np.zeros((4, 2)), np.zeros((2, 2)))
    assert parafac_objective(X, zero) == frobenius_norm_sq(X)
    Y = rng.standard_normal((3, 4, 2))
    assert parafac_objective(Y, model) == pytest.approx(objective_loop(Y, model), rel=1e-10)
    with pytest.raises(ArgumentError):
        parafac_objective(rng.standard_normal((2, 2, 2)), model)


def test_rank_one_update_recovers_u(rng):
    u, v, w = rng.standard_normal(4), rng.standard_normal(3), rng.standard_normal(5)
    X = np.einsum("i,j,k->ijk", u, v, w)
    model = ParafacModel(np.zeros((4, 1)), 2.0 * v[:, None], w[:, None])
    new = update_factor(X, model, "U")
    np.testing.assert_allclose(new[:, 0], u / 2.0, rtol=1e-10)
    model.U = new
    assert parafac_objective(X, model) <= 1e-10 * frobenius_norm_sq(X)


def test_orthonormal_khatri_rao_is_projection():
    # X[i, j, k] = 1 + i + 2j + 4k; with V = W = I the U update reads the
    # fibers X[:, 0, 0] = (1, 2) and X[:, 1, 1] = (7, 8)
    i, j, k = np.indices((2, 2, 2))
    X = 1.0 + i + 2 * j + 4 * k
    model = ParafacModel(np.zeros((2, 2)), np.eye(2), np.eye(2))
    np.testing.assert_allclose(update_factor(X, model, "U"), [[1.0, 7.0], [2.0, 8.0]], rtol=1e-10)


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from("UVW"))
def test_update_never_increases_objective(seed, which):
    r = np.random.default_rng(seed)
    X = r.standard_normal((5, 4, 3))
    model = ParafacModel(*(r.standard_normal((n, 2)) for n in X.shape))
    before = parafac_objective(X, model)
    setattr(model, which, update_factor(X, model, which))
    assert parafac_objective(X, model) <= before + 1e-9 * before


def test_planted_rank_two_from_r1_start(rng):
    U, V, W = (np.linalg.qr(rng.standard_normal((n, 2)))[0] * [3.0, 1.5] for n in (8, 7, 6))
    X = reconstruct_parafac(U, V, W)
    init = (identity_padded(7, 2), pca_start(X, 2))
    _, trace = parafac_run(X, 2, init, iterations=500)
    assert trace.objective[-1] <= 1e-8 * frobenius_norm_sq(X)


def test_rank_one_exact(rng):
    X = np.einsum("i,j,k->ijk", rng.random(5) + 0.5, rng.random(4) + 0.5, rng.random(6) + 0.5)
    _, trace = parafac_run(X, 1, (identity_padded(4, 1), pca_start(X, 1)), iterations=50)
    assert trace.objective[-1] <= 1e-10 * frobenius_norm_sq(X)


def test_monotone_and_deterministic(rng):
    X = rng.random((6, 5, 4))
    init = (rng.random((5, 3)), rng.random((4, 3)))
    _, a = parafac_run(X, 3, init, 60, keep_reconstructions=True)
    _, b = parafac_run(X, 3, init, 60)
    assert a.objective == b.objective
    assert np.all(np.diff(a.objective) <= 1e-9 * a.objective[0])
    assert len(a.reconstructions) == 60


def test_failure_names_factor_and_iteration():
    X = np.ones((3, 3, 3))
    with pytest.raises(NumericalError) as info:
        parafac_run(X, 2, (np.zeros((3, 2)), np.zeros((3, 2))), 5)
    assert info.value.factor == "U"
    assert info.value.iteration == 1


def test_bad_arguments(rng):
    X = rng.random((3, 3, 3))
    with pytest.raises(ArgumentError):
        parafac_run(X, 2, (rng.random((3, 3)), rng.random((3, 2))), 5)
    with pytest.raises(ArgumentError):
        parafac_run(X, 2, (rng.random((3, 2)), rng.random((3, 2))), 0)
    with pytest.raises(ArgumentError):
        update_factor(X, ParafacModel(*(rng.random((3, 2)) for _ in range(3))), "Q")
