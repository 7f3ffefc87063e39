"""T1 (one-sided Tucker) decomposition and the seven-start initialisation bundle.

T1 factors only the third mode: ``X_{ijk} ~ sum_r C_{ijr} W_{kr}``. Its optimal
W spans the leading eigenvectors of the slice Gram matrix
``Ht_{kk'} = sum_ij X_{ijk} X_{ijk'}``, which is PCA with every frontal slice
treated as one long vector. That W is the standard (R1) start.

Bundle layout, in fixed order: R1, R2a, R2b, R2c, R3a, R3b, R3c.

* R1: W0 = T1/PCA factor, V0 = identity on top of zeros (``n2 x m2``).
* R2x: V0 then W0 filled column-major with uniform(0, 1) draws.
* R3x: drawn as R2, then 1 / 2 / 3 columns of W0 and of V0 set to zero,
  positions sampled without replacement. When V0 and W0 have the same width
  the same positions are zeroed in both (otherwise a ParaFac Khatri-Rao
  product of the two could vanish entirely); with different widths V0 gets
  its own draw. The zero count is capped at ``m - 1`` so a factor never
  vanishes completely.

Start ``s`` (0-based) draws from ``SplitMix64(derive_seed(master_seed, s))``.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import ArgumentError
from .linalg import sym_eig_all
from .rng import SplitMix64, derive_seed
from .tensor import as_tensor3, frobenius_norm_sq, mode_multiply, unfold

START_LABELS = ("R1", "R2a", "R2b", "R2c", "R3a", "R3b", "R3c")
_ZERO_COLUMNS = {"R3a": 1, "R3b": 2, "R3c": 3}


def t1_gram(X):
    """Slice Gram matrix ``Ht[k, k'] = <X[:, :, k], X[:, :, k']>``."""
    M = unfold(as_tensor3(X), 3)
    return M @ M.T


@dataclass
class T1Model:
    W: np.ndarray
    C: np.ndarray  # n1 x n2 x m3; C[:, :, r] is the r-th basis image
    objective: float  # ||X||^2 - tr(W^T Ht W)
    residual: float  # ||X - C x3 W||^2 evaluated directly
    eigenvalues: np.ndarray


def t1_solve(X, m3):
    X = as_tensor3(X)
    n3 = X.shape[2]
    if not 1 <= m3 <= n3:
        raise ArgumentError(f"m3={m3} outside [1, {n3}]")
    Ht = t1_gram(X)
    pairs = sym_eig_all(Ht)
    W = np.ascontiguousarray(pairs.vectors[:, :m3])
    C = mode_multiply(X, W, 3, contract=True)
    xx = frobenius_norm_sq(X)
    objective = xx - float(np.trace(W.T @ Ht @ W))
    residual = frobenius_norm_sq(X - mode_multiply(C, W, 3))
    return T1Model(W, C, objective, residual, pairs.values)


@dataclass
class InitStart:
    label: str
    seed: int
    V0: np.ndarray
    W0: np.ndarray
    zero_columns_V: tuple = ()
    zero_columns_W: tuple = ()

    def to_dict(self):
        return {
            "label": self.label,
            "seed": self.seed,
            "zero_columns_V": list(self.zero_columns_V),
            "zero_columns_W": list(self.zero_columns_W),
        }


@dataclass
class InitBundle:
    master_seed: int
    widths: tuple  # (m2, m3) of V0 and W0
    starts: list
    notes: list = field(default_factory=list)

    @property
    def labels(self):
        return [s.label for s in self.starts]

    def pairs(self):
        return [(s.V0, s.W0) for s in self.starts]

    def to_dict(self):
        return {
            "master_seed": self.master_seed,
            "widths": list(self.widths),
            "starts": [s.to_dict() for s in self.starts],
            "notes": list(self.notes),
        }


def identity_padded(n, m):
    """``n x m`` matrix with an identity block on top and zeros elsewhere."""
    return np.eye(n, m)


def _uniform_matrix(rng, n, m):
    return rng.uniform(n * m).reshape((n, m), order="F")


def pca_start(X, m3):
    """Leading ``m3`` T1/PCA directions, zero-padded if ``m3`` exceeds ``n3``."""
    n3 = X.shape[2]
    W = t1_solve(X, min(m3, n3)).W
    if m3 > n3:
        W = np.hstack([W, np.zeros((n3, m3 - n3))])
    return W


def make_init_bundle(X, dims, master_seed):
    """Build the seven starts for a tensor.

    ``dims`` is ``(m1, m2, m3)`` for HOSVD, or an int rank R for ParaFac
    (widths R, R; R may exceed the tensor extents).
    """
    X = as_tensor3(X)
    _, n2, n3 = X.shape
    notes = []
    if isinstance(dims, (int, np.integer)):
        if dims < 1:
            raise ArgumentError("rank must be >= 1")
        m2 = m3 = int(dims)
        if m3 > n3:
            notes.append(f"R1 PCA start zero-padded from {n3} to {m3} columns")
    else:
        dims = tuple(int(m) for m in dims)
        if len(dims) != 3 or any(not 1 <= m <= n for m, n in zip(dims, X.shape)):
            raise ArgumentError(f"dims {dims} must satisfy 1 <= m_i <= n_i for tensor {X.shape}")
        _, m2, m3 = dims

    master_seed = int(master_seed)
    starts = []
    for s, label in enumerate(START_LABELS):
        seed = derive_seed(master_seed, s)
        if label == "R1":
            starts.append(InitStart(label, seed, identity_padded(n2, m2), pca_start(X, m3)))
            continue
        rng = SplitMix64(seed)
        V0 = _uniform_matrix(rng, n2, m2)
        W0 = _uniform_matrix(rng, n3, m3)
        zv = zw = ()
        if label in _ZERO_COLUMNS:
            want = _ZERO_COLUMNS[label]
            kv, kw = min(want, m2 - 1), min(want, m3 - 1)
            if (kv, kw) != (want, want):
                notes.append(f"{label}: zero columns capped at (V={kv}, W={kw})")
            zw = tuple(sorted(rng.sample(m3, kw)))
            zv = zw if m2 == m3 else tuple(sorted(rng.sample(m2, kv)))
            V0[:, list(zv)] = 0.0
            W0[:, list(zw)] = 0.0
        starts.append(InitStart(label, seed, V0, W0, zv, zw))
    return InitBundle(master_seed, (m2, m3), starts, notes)


def identical_bundle(X, dims, master_seed=0):
    """Seven copies of the R1 start (a control case for the audit)."""
    bundle = make_init_bundle(X, dims, master_seed)
    r1 = bundle.starts[0]
    bundle.starts = [
        InitStart(label, r1.seed, r1.V0.copy(), r1.W0.copy()) for label in START_LABELS
    ]
    bundle.notes.append("all starts forced identical to R1")
    return bundle
