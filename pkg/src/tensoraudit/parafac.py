"""ParaFac (CP) decomposition by alternating least squares.

No column normalisation is applied between sweeps; the audit compares
reconstructions, so scale drift between factors is harmless. Entries beyond
``OVERFLOW_LIMIT`` abort the run with a :class:`NumericalError`.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import ArgumentError, NumericalError
from .linalg import khatri_rao, solve_least_squares
from .tensor import as_matrix, as_tensor3, frobenius_norm_sq, reconstruct_parafac, unfold

OVERFLOW_LIMIT = 1e150

_FACTORS = ("U", "V", "W")


@dataclass
class ParafacModel:
    U: np.ndarray
    V: np.ndarray
    W: np.ndarray

    @property
    def rank(self):
        return self.U.shape[1]

    def reconstruct(self):
        return reconstruct_parafac(self.U, self.V, self.W)


@dataclass
class ParafacTrace:
    objective: list = field(default_factory=list)
    reconstructions: list = field(default_factory=list)

    @property
    def iterations(self):
        return len(self.objective)


def parafac_objective(X, model):
    X = as_tensor3(X, check_finite=False)
    Xhat = model.reconstruct()
    if Xhat.shape != X.shape:
        raise ArgumentError(f"model shape {Xhat.shape} does not match tensor {X.shape}")
    return frobenius_norm_sq(X - Xhat)


def update_factor(X, model, which, iteration=None):
    """Least-squares optimal replacement for factor ``which`` given the other two."""
    if which == "U":
        mode, Z = 1, khatri_rao(model.W, model.V)
    elif which == "V":
        mode, Z = 2, khatri_rao(model.U, model.W)
    elif which == "W":
        mode, Z = 3, khatri_rao(model.V, model.U)
    else:
        raise ArgumentError(f"which must be one of {_FACTORS}, got {which!r}")
    try:
        new = solve_least_squares(Z, unfold(X, mode).T)
    except NumericalError as exc:
        raise NumericalError(str(exc), iteration=iteration, factor=which) from exc
    if not np.all(np.abs(new) <= OVERFLOW_LIMIT):
        raise NumericalError("factor entries overflowed", iteration=iteration, factor=which)
    return new


def parafac_sweep(X, model, iteration=None):
    for which in _FACTORS:
        setattr(model, which, update_factor(X, model, which, iteration))
    return model


def initial_model(X, rank, init):
    X = as_tensor3(X)
    if rank < 1:
        raise ArgumentError("rank must be >= 1")
    V0, W0 = (as_matrix(M) for M in init)
    if V0.shape != (X.shape[1], rank) or W0.shape != (X.shape[2], rank):
        raise ArgumentError(
            f"init shapes {V0.shape}, {W0.shape} do not match "
            f"{(X.shape[1], rank)}, {(X.shape[2], rank)}"
        )
    # U is overwritten by the first update
    return ParafacModel(np.zeros((X.shape[0], rank)), V0.copy(), W0.copy())


def parafac_iterates(X, rank, init, iterations):
    """Yield ``(model, reconstruction)`` after each ALS sweep.

    The yielded model is the live object; copy it if it must outlive the
    next sweep.
    """
    X = as_tensor3(X)
    if iterations < 1:
        raise ArgumentError("iterations must be >= 1")
    model = initial_model(X, rank, init)
    for t in range(1, iterations + 1):
        parafac_sweep(X, model, iteration=t)
        yield model, model.reconstruct()


def parafac_run(X, rank, init, iterations=2000, keep_reconstructions=False):
    X = as_tensor3(X)
    trace = ParafacTrace()
    for model, Xhat in parafac_iterates(X, rank, init, iterations):
        trace.objective.append(frobenius_norm_sq(X - Xhat))
        if keep_reconstructions:
            trace.reconstructions.append(Xhat)
    return ParafacModel(model.U.copy(), model.V.copy(), model.W.copy()), trace
