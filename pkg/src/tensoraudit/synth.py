"""Seeded synthetic tensors: i.i.d. uniform and planted Tucker models."""

import numpy as np

from .errors import ArgumentError
from .linalg import canonicalize_signs
from .rng import SplitMix64, derive_seed
from .tensor import frobenius_norm_sq, reconstruct_hosvd


def _check_dims(dims):
    dims = tuple(int(n) for n in dims)
    if len(dims) != 3 or min(dims) < 1:
        raise ArgumentError(f"dims must be three positive integers, got {dims}")
    return dims


def gen_random_tensor(dims, seed):
    """I.i.d. uniform [0, 1) entries drawn in canonical (i-fastest) order."""
    dims = _check_dims(dims)
    values = SplitMix64(seed).uniform(int(np.prod(dims)))
    return values.reshape(dims, order="F")


def random_orthonormal(n, m, seed, avoid_constant=True):
    """``n x m`` orthonormal columns from a seeded Gaussian draw.

    With ``avoid_constant`` (and ``m < n``) the columns are also orthogonal
    to the all-ones vector, so fiber-mean centering leaves them untouched.
    """
    G = SplitMix64(seed).normal(n * m).reshape((n, m), order="F")
    if avoid_constant and m < n:
        G -= G.mean(axis=0, keepdims=True)
    Q, R = np.linalg.qr(G)
    Q = Q * np.sign(np.where(np.diag(R) == 0, 1.0, np.diag(R)))
    return canonicalize_signs(Q)


def gen_planted_tucker(dims, core_dims, spectrum, noise_sigma=0.0, seed=0, return_parts=False):
    """Planted Tucker tensor ``S x1 U x2 V x3 W + noise``.

    Construction:

    * U, V, W: :func:`random_orthonormal` with substreams ``"U"``, ``"V"``,
      ``"W"`` of ``seed`` (columns orthogonal to the constant vector when
      ``m_i < n_i``).
    * S: superdiagonal, ``S[r, r, r] = spectrum[r]``. Every mode-n Gram of the
      signal therefore has eigenvalues ``spectrum**2`` followed by zeros.
    * noise: Gaussian (substream ``"noise"``) rescaled so that
      ``||noise||_F = noise_sigma * ||signal||_F``.
    """
    dims = _check_dims(dims)
    core_dims = _check_dims(core_dims)
    if any(m > n for m, n in zip(core_dims, dims)):
        raise ArgumentError(f"core dims {core_dims} exceed tensor dims {dims}")
    spectrum = np.asarray(spectrum, dtype=np.float64)
    if spectrum.ndim != 1 or len(spectrum) > min(core_dims):
        raise ArgumentError(f"spectrum length must not exceed min(core dims) = {min(core_dims)}")
    if np.any(spectrum <= 0) or np.any(np.diff(spectrum) > 0):
        raise ArgumentError("spectrum must be positive and non-increasing")
    if noise_sigma < 0:
        raise ArgumentError("noise_sigma must be >= 0")

    factors = [
        random_orthonormal(n, m, derive_seed(seed, name))
        for n, m, name in zip(dims, core_dims, "UVW")
    ]
    S = np.zeros(core_dims)
    r = np.arange(len(spectrum))
    S[r, r, r] = spectrum
    signal = reconstruct_hosvd(*factors, S)
    X = signal
    if noise_sigma > 0:
        noise = SplitMix64(derive_seed(seed, "noise")).normal(signal.size)
        noise = noise.reshape(dims, order="F")
        noise *= noise_sigma * np.sqrt(frobenius_norm_sq(signal) / frobenius_norm_sq(noise))
        X = signal + noise
    if return_parts:
        return X, {"factors": factors, "core": S, "signal": signal}
    return X
