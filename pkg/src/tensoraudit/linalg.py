"""Symmetric eigenpairs, Khatri-Rao products and ridge least squares."""

from dataclasses import dataclass

import numpy as np

from .errors import ArgumentError, NumericalError
from .tensor import as_matrix

RIDGE_FACTOR = 1e-12


@dataclass(frozen=True)
class EigenPairs:
    """Eigenvalues in non-increasing order with aligned, sign-canonical columns."""

    values: np.ndarray
    vectors: np.ndarray


def canonicalize_signs(Q):
    """Flip columns so each column's largest-magnitude entry is positive.

    Ties in magnitude go to the lowest row index; zero columns pass through.
    """
    Q = np.array(as_matrix(Q, "Q"), copy=True)
    if Q.size == 0:
        return Q
    rows = np.argmax(np.abs(Q), axis=0)
    pivots = Q[rows, np.arange(Q.shape[1])]
    Q[:, pivots < 0] *= -1.0
    return Q


def _symmetric(A):
    A = as_matrix(A, "A")
    if A.shape[0] != A.shape[1]:
        raise ArgumentError(f"matrix must be square, got {A.shape}")
    if not np.all(np.isfinite(A)):
        raise NumericalError("matrix contains NaN or Inf entries (overflow?)")
    return 0.5 * (A + A.T)


def sym_eig_all(A):
    """Full spectrum of ``(A + A.T) / 2``, largest first."""
    A = _symmetric(A)
    try:
        w, Q = np.linalg.eigh(A)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"symmetric eigensolver failed: {exc}") from exc
    return EigenPairs(w[::-1].copy(), canonicalize_signs(Q[:, ::-1]))


def sym_eig_topk(A, k):
    A = _symmetric(A)
    if not 1 <= k <= A.shape[0]:
        raise ArgumentError(f"k={k} outside [1, {A.shape[0]}]")
    pairs = sym_eig_all(A)
    return EigenPairs(pairs.values[:k].copy(), np.ascontiguousarray(pairs.vectors[:, :k]))


def khatri_rao(A, B):
    """Column-wise Kronecker product; row ``b + rows(B) * a`` (B fastest)."""
    A, B = as_matrix(A, "A"), as_matrix(B, "B")
    if A.shape[1] != B.shape[1]:
        raise ArgumentError(f"column counts differ: {A.shape[1]} vs {B.shape[1]}")
    return np.einsum("ir,jr->ijr", A, B).reshape(A.shape[0] * B.shape[0], A.shape[1])


def solve_least_squares(Z, Y, ridge=RIDGE_FACTOR):
    """Return ``B`` minimising ``||Y - Z B^T||_F``.

    Solved through the normal equations ``(Z^T Z + rho I) B^T = Z^T Y`` with
    ``rho = ridge * trace(Z^T Z) / R``.
    """
    Z, Y = as_matrix(Z, "Z"), as_matrix(Y, "Y")
    if Z.shape[0] != Y.shape[0]:
        raise ArgumentError(f"row counts differ: Z {Z.shape} vs Y {Y.shape}")
    R = Z.shape[1]
    gram = Z.T @ Z
    rho = ridge * np.trace(gram) / R
    gram[np.diag_indices(R)] += rho
    cond = np.linalg.cond(gram)
    if not np.isfinite(cond) or cond > 1.0 / np.finfo(float).eps:
        raise NumericalError(f"normal equations singular (condition estimate {cond:.3e})")
    return np.linalg.solve(gram, Z.T @ Y).T
