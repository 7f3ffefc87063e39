"""Dense order-3 tensor primitives.

Tensors are plain ``float64`` numpy arrays of shape ``(n1, n2, n3)``; factor
matrices are 2-D ``float64`` arrays. The canonical linear layout is Fortran
order (``i`` fastest, then ``j``, then ``k``), i.e.
``offset(i, j, k) = (k * n2 + j) * n1 + i``. Unfoldings and the on-disk format
both follow it.

Unfolding layouts (cyclic):

* mode 1: ``n1 x (n2 n3)``, column ``j + n2 k``
* mode 2: ``n2 x (n3 n1)``, column ``k + n3 i``
* mode 3: ``n3 x (n1 n2)``, column ``i + n1 j``
"""

import numpy as np

from .errors import ArgumentError, DataError

# axis order that puts the unfolded mode first and keeps the cyclic order
_CYCLIC = {1: (0, 1, 2), 2: (1, 2, 0), 3: (2, 0, 1)}


def as_tensor3(X, *, check_finite=True):
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 3:
        raise ArgumentError(f"expected an order-3 tensor, got ndim={X.ndim}")
    if min(X.shape) < 1:
        raise ArgumentError(f"tensor dims must be positive, got {X.shape}")
    if check_finite and not np.all(np.isfinite(X)):
        raise DataError("tensor contains NaN or Inf entries")
    return X


def as_matrix(M, name="matrix"):
    M = np.asarray(M, dtype=np.float64)
    if M.ndim != 2:
        raise ArgumentError(f"{name} must be 2-D, got ndim={M.ndim}")
    return M


def _check_mode(mode):
    if mode not in (1, 2, 3):
        raise ArgumentError(f"mode must be 1, 2 or 3, got {mode!r}")


def unfold(X, mode):
    """Mode-``mode`` matricization with the cyclic column layout above."""
    _check_mode(mode)
    X = np.asarray(X, dtype=np.float64)
    Y = np.transpose(X, _CYCLIC[mode])
    return Y.reshape(Y.shape[0], -1, order="F")


def fold(M, mode, shape):
    """Inverse of :func:`unfold` for a tensor of the given ``shape``."""
    _check_mode(mode)
    axes = _CYCLIC[mode]
    permuted = tuple(shape[a] for a in axes)
    Y = np.asarray(M, dtype=np.float64).reshape(permuted, order="F")
    return np.transpose(Y, np.argsort(axes))


def mode_multiply(X, M, mode, contract=False):
    """Mode-``mode`` product.

    With ``contract=True`` the tensor index is summed against the *rows* of
    ``M`` (``Y[p,j,k] = sum_i M[i,p] X[i,j,k]`` for mode 1, i.e. a product with
    ``M.T``). With ``contract=False`` it is expanded through ``M``
    (``Y[i,j,k] = sum_p M[i,p] X[p,j,k]``).
    """
    _check_mode(mode)
    X = np.asarray(X, dtype=np.float64)
    M = as_matrix(M)
    axis = mode - 1
    inner = 0 if contract else 1
    if M.shape[inner] != X.shape[axis]:
        raise ArgumentError(
            f"mode-{mode} product: matrix {M.shape} does not match tensor extent {X.shape[axis]}"
        )
    # tensordot puts the new axis last; move it back into place
    Y = np.tensordot(X, M, axes=([axis], [inner]))
    return np.ascontiguousarray(np.moveaxis(Y, -1, axis))


def frobenius_norm_sq(X):
    X = np.asarray(X, dtype=np.float64)
    return float(np.dot(X.ravel(), X.ravel()))


def reconstruct_hosvd(U, V, W, S):
    U, V, W = as_matrix(U, "U"), as_matrix(V, "V"), as_matrix(W, "W")
    S = np.asarray(S, dtype=np.float64)
    if S.ndim != 3 or S.shape != (U.shape[1], V.shape[1], W.shape[1]):
        raise ArgumentError(
            f"core shape {S.shape} does not match factor widths "
            f"{(U.shape[1], V.shape[1], W.shape[1])}"
        )
    Y = mode_multiply(S, U, 1)
    Y = mode_multiply(Y, V, 2)
    return mode_multiply(Y, W, 3)


def reconstruct_parafac(U, V, W):
    U, V, W = as_matrix(U, "U"), as_matrix(V, "V"), as_matrix(W, "W")
    if not U.shape[1] == V.shape[1] == W.shape[1]:
        raise ArgumentError(
            f"factor column counts differ: {U.shape[1]}, {V.shape[1]}, {W.shape[1]}"
        )
    return np.einsum("ir,jr,kr->ijk", U, V, W, optimize=True)
