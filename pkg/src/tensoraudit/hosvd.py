"""HOSVD by alternating eigenvector updates of U, V, W.

Each factor update maximises ``||S||^2`` over one factor with the other two
fixed: the new factor is made of the leading eigenvectors of

* ``F = sum X_{ijl} X_{i'j'l'} (VV^T)_{jj'} (WW^T)_{ll'}`` for U,
* ``G`` (cyclic, from U and W) for V,
* ``H`` (cyclic, from U and V) for W.

Each is assembled as ``M M^T`` with ``M`` the unfolding of X contracted with
the two fixed factors, never through the quadruple sum. One sweep updates
U, then V, then W, each using the freshest other factors.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import ArgumentError, NumericalError
from .linalg import sym_eig_topk
from .tensor import as_matrix, as_tensor3, frobenius_norm_sq, mode_multiply, unfold


@dataclass
class HosvdModel:
    U: np.ndarray
    V: np.ndarray
    W: np.ndarray
    S: np.ndarray

    @property
    def dims(self):
        return self.S.shape


@dataclass
class HosvdTrace:
    objective: list = field(default_factory=list)  # ||S||^2 after each sweep
    snapshots: list = field(default_factory=list)  # (U, V, W) after each sweep, if kept

    @property
    def iterations(self):
        return len(self.objective)


def _check_rows(M, n, name):
    M = as_matrix(M, name)
    if M.shape[0] != n:
        raise ArgumentError(f"{name} has {M.shape[0]} rows, tensor extent is {n}")
    return M


def _gram(M):
    return M @ M.T


def compute_F(X, V, W):
    X = as_tensor3(X, check_finite=False)
    V = _check_rows(V, X.shape[1], "V")
    W = _check_rows(W, X.shape[2], "W")
    Y = mode_multiply(mode_multiply(X, V, 2, contract=True), W, 3, contract=True)
    return _gram(unfold(Y, 1))


def compute_G(X, U, W):
    X = as_tensor3(X, check_finite=False)
    U = _check_rows(U, X.shape[0], "U")
    W = _check_rows(W, X.shape[2], "W")
    Y = mode_multiply(mode_multiply(X, U, 1, contract=True), W, 3, contract=True)
    return _gram(unfold(Y, 2))


def compute_H(X, U, V):
    X = as_tensor3(X, check_finite=False)
    U = _check_rows(U, X.shape[0], "U")
    V = _check_rows(V, X.shape[1], "V")
    Y = mode_multiply(mode_multiply(X, U, 1, contract=True), V, 2, contract=True)
    return _gram(unfold(Y, 3))


def core_tensor(X, U, V, W):
    """``S = X x1 U^T x2 V^T x3 W^T``."""
    X = as_tensor3(X, check_finite=False)
    U = _check_rows(U, X.shape[0], "U")
    V = _check_rows(V, X.shape[1], "V")
    W = _check_rows(W, X.shape[2], "W")
    Y = mode_multiply(X, U, 1, contract=True)
    Y = mode_multiply(Y, V, 2, contract=True)
    return mode_multiply(Y, W, 3, contract=True)


def hosvd_objective(X, S):
    """Reconstruction error ``||X||^2 - ||S||^2`` (valid for orthonormal factors)."""
    return frobenius_norm_sq(X) - frobenius_norm_sq(S)


def _validate_dims(shape, dims):
    dims = tuple(int(m) for m in dims)
    if len(dims) != 3 or any(not 1 <= m <= n for m, n in zip(dims, shape)):
        raise ArgumentError(f"dims {dims} must satisfy 1 <= m_i <= n_i for tensor {shape}")
    return dims


def _leading(A, k, factor, iteration):
    try:
        return sym_eig_topk(A, k).vectors
    except NumericalError as exc:
        raise NumericalError(str(exc), iteration=iteration, factor=factor) from exc


def hosvd_sweep(X, dims, V, W, iteration=None):
    """One U -> V -> W cycle. Returns ``(U, V, W, S)``."""
    m1, m2, m3 = dims
    U = _leading(compute_F(X, V, W), m1, "U", iteration)
    V = _leading(compute_G(X, U, W), m2, "V", iteration)
    # reuse X x1 U^T x2 V^T for both H and the core
    Y = mode_multiply(mode_multiply(X, U, 1, contract=True), V, 2, contract=True)
    W = _leading(_gram(unfold(Y, 3)), m3, "W", iteration)
    S = mode_multiply(Y, W, 3, contract=True)
    return U, V, W, S


def hosvd_iterates(X, dims, init, iterations):
    """Yield ``(U, V, W, S)`` after each of ``iterations`` sweeps.

    ``init`` is ``(V0, W0)``; the initial U is never needed because the first
    update computes U from V0 and W0. V0 and W0 need not be orthonormal.
    """
    X = as_tensor3(X)
    dims = _validate_dims(X.shape, dims)
    if iterations < 1:
        raise ArgumentError("iterations must be >= 1")
    V, W = init
    V = _check_rows(V, X.shape[1], "V0")
    W = _check_rows(W, X.shape[2], "W0")
    if V.shape[1] != dims[1] or W.shape[1] != dims[2]:
        raise ArgumentError(
            f"init widths {(V.shape[1], W.shape[1])} do not match dims {dims[1:]}"
        )
    for t in range(1, iterations + 1):
        U, V, W, S = hosvd_sweep(X, dims, V, W, iteration=t)
        yield U, V, W, S


def hosvd_run(X, dims, init, iterations=100, keep_snapshots=False):
    """Run exactly ``iterations`` sweeps; return ``(HosvdModel, HosvdTrace)``."""
    trace = HosvdTrace()
    for U, V, W, S in hosvd_iterates(X, dims, init, iterations):
        trace.objective.append(frobenius_norm_sq(S))
        if keep_snapshots:
            trace.snapshots.append((U, V, W))
    return HosvdModel(U, V, W, S), trace
