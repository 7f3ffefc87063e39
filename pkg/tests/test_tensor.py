import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from oracles import (
    hosvd_recon_loop,
    mode_multiply_loop,
    norm_sq_loop,
    orthonormal,
    parafac_recon_loop,
    unfold_loop,
)
from tensoraudit.errors import ArgumentError, DataError
from tensoraudit.tensor import (
    as_tensor3,
    fold,
    frobenius_norm_sq,
    mode_multiply,
    reconstruct_hosvd,
    reconstruct_parafac,
    unfold,
)

shapes = st.tuples(*[st.integers(1, 5)] * 3)
finite = st.floats(-1e3, 1e3, allow_nan=False)


def test_unfold_constant():
    assert np.array_equal(unfold(np.ones((2, 3, 4)), 1), np.ones((2, 12)))


def test_unfold_single_entry_layout():
    X = np.zeros((2, 3, 4))
    X[0, 1, 0] = 5
    M = unfold(X, 1)
    assert M[0, 1] == 5
    assert np.count_nonzero(M) == 1


def test_unfold_layout_offsets():
    X = np.zeros((2, 3, 4))
    X[1, 2, 3] = 1.0
    assert unfold(X, 1)[1, 2 + 3 * 3] == 1.0
    assert unfold(X, 2)[2, 3 + 4 * 1] == 1.0
    assert unfold(X, 3)[3, 1 + 2 * 2] == 1.0


@pytest.mark.parametrize("mode", [1, 2, 3])
def test_unfold_matches_loop(rng, mode):
    X = rng.standard_normal((3, 4, 5))
    assert np.array_equal(unfold(X, mode), unfold_loop(X, mode))


def test_unfold_bad_mode():
    with pytest.raises(ArgumentError):
        unfold(np.ones((2, 2, 2)), 4)


@given(shapes.flatmap(lambda s: arrays(np.float64, s, elements=finite)), st.sampled_from([1, 2, 3]))
def test_fold_inverts_unfold(X, mode):
    assert np.array_equal(fold(unfold(X, mode), mode, X.shape), X)


@pytest.mark.parametrize("mode", [1, 2, 3])
@pytest.mark.parametrize("contract", [True, False])
def test_identity_product_is_exact(rng, mode, contract):
    X = rng.standard_normal((3, 4, 5))
    I = np.eye(X.shape[mode - 1])
    assert np.array_equal(mode_multiply(X, I, mode, contract), X)


def test_swap_matrix_exchanges_frontal_slices():
    X = np.arange(8.0).reshape(2, 2, 2)
    swap = np.array([[0.0, 1.0], [1.0, 0.0]])
    Y = mode_multiply(X, swap, 3)
    assert np.array_equal(Y[:, :, 0], X[:, :, 1])
    assert np.array_equal(Y[:, :, 1], X[:, :, 0])


@pytest.mark.parametrize("mode", [1, 2, 3])
@pytest.mark.parametrize("contract", [True, False])
def test_mode_multiply_matches_loop(rng, mode, contract):
    X = rng.standard_normal((3, 3, 3))
    M = rng.standard_normal((3, 2)) if contract else rng.standard_normal((2, 3))
    np.testing.assert_allclose(
        mode_multiply(X, M, mode, contract), mode_multiply_loop(X, M, mode, contract),
        rtol=1e-12, atol=1e-13,
    )


@pytest.mark.parametrize("mode", [1, 2, 3])
def test_mode_multiply_consistent_with_unfolding(rng, mode):
    X = rng.standard_normal((3, 4, 5))
    M = rng.standard_normal((X.shape[mode - 1], 2))
    Y = mode_multiply(X, M, mode, contract=True)
    shape = list(X.shape)
    shape[mode - 1] = 2
    np.testing.assert_allclose(Y, fold(M.T @ unfold(X, mode), mode, shape), rtol=1e-12)


def test_mode_multiply_dimension_mismatch():
    with pytest.raises(ArgumentError):
        mode_multiply(np.ones((2, 3, 4)), np.ones((5, 2)), 1, contract=True)


def test_norm_sq():
    assert frobenius_norm_sq(np.ones((2, 2, 2))) == 8
    assert frobenius_norm_sq(np.zeros((3, 3, 3))) == 0


def test_norm_sq_matches_loop(rng):
    X = rng.standard_normal((4, 4, 4))
    assert frobenius_norm_sq(X) == pytest.approx(norm_sq_loop(X), rel=1e-12)


def test_reconstruct_hosvd_identity_and_zero(rng):
    S = rng.standard_normal((3, 2, 4))
    X = reconstruct_hosvd(np.eye(3), np.eye(2), np.eye(4), S)
    assert np.array_equal(X, S)
    Z = reconstruct_hosvd(rng.random((5, 3)), rng.random((4, 2)), rng.random((3, 4)), np.zeros((3, 2, 4)))
    assert not Z.any()


def test_reconstruct_hosvd_matches_loop(rng):
    U, V, W = (rng.standard_normal((3, 2)) for _ in range(3))
    S = rng.standard_normal((2, 2, 2))
    np.testing.assert_allclose(reconstruct_hosvd(U, V, W, S), hosvd_recon_loop(U, V, W, S),
                               rtol=1e-12, atol=1e-12)


def test_reconstruct_hosvd_isometry(rng):
    U, V, W = orthonormal(rng, 6, 3), orthonormal(rng, 5, 2), orthonormal(rng, 7, 4)
    S = rng.standard_normal((3, 2, 4))
    X = reconstruct_hosvd(U, V, W, S)
    assert frobenius_norm_sq(X) == pytest.approx(frobenius_norm_sq(S), rel=1e-10)


def test_reconstruct_hosvd_shape_mismatch():
    with pytest.raises(ArgumentError):
        reconstruct_hosvd(np.eye(2), np.eye(2), np.eye(2), np.zeros((2, 2, 3)))


def test_reconstruct_parafac_cases(rng):
    one = np.ones((2, 1))
    assert np.array_equal(reconstruct_parafac(one, one, one), np.ones((2, 2, 2)))
    U = rng.standard_normal((3, 2))
    assert not reconstruct_parafac(U, np.zeros((4, 2)), rng.random((5, 2))).any()
    U, V, W = (rng.standard_normal((3, 3)) for _ in range(3))
    np.testing.assert_allclose(reconstruct_parafac(U, V, W), parafac_recon_loop(U, V, W),
                               rtol=1e-12, atol=1e-12)
    with pytest.raises(ArgumentError):
        reconstruct_parafac(U, V, W[:, :2])


def test_parafac_scale_counterbalance(rng):
    U, V, W = (rng.standard_normal((4, 3)) for _ in range(3))
    U2, W2 = U.copy(), W.copy()
    U2[:, 1] *= 7.5
    W2[:, 1] /= 7.5
    np.testing.assert_allclose(reconstruct_parafac(U2, V, W2), reconstruct_parafac(U, V, W),
                               rtol=1e-12, atol=1e-12)


def test_as_tensor3_rejects_nonfinite():
    X = np.ones((2, 2, 2))
    X[0, 0, 0] = np.nan
    with pytest.raises(DataError):
        as_tensor3(X)
    with pytest.raises(ArgumentError):
        as_tensor3(np.ones((2, 2)))


@settings(max_examples=25)
@given(st.integers(0, 2**32 - 1))
def test_ops_deterministic(seed):
    r = np.random.default_rng(seed)
    X, M = r.standard_normal((3, 4, 2)), r.standard_normal((4, 3))
    assert np.array_equal(mode_multiply(X, M, 2, True), mode_multiply(X, M, 2, True))
