"""SplitMix64 streams and substream derivation.

Every random quantity in the package is drawn from a :class:`SplitMix64`
stream whose seed is derived from one master seed with :func:`derive_seed`.
Nothing touches numpy's global RNG, so experiments are reproducible from the
seed alone and bit-for-bit portable to any other SplitMix64 implementation.

Substream derivation: ``derive_seed(s, k1, k2, ...)`` folds each key in turn
as ``s <- mix64(s + GAMMA * (k + 1))`` where ``mix64`` is the SplitMix64
output finalizer. String keys are first reduced to an integer with
:func:`key_id`.
"""

import numpy as np

MASK64 = (1 << 64) - 1
GAMMA = 0x9E3779B97F4A7C15
_M1 = 0xBF58476D1CE4E5B9
_M2 = 0x94D049BB133111EB


def mix64(z):
    z &= MASK64
    z = ((z ^ (z >> 30)) * _M1) & MASK64
    z = ((z ^ (z >> 27)) * _M2) & MASK64
    return z ^ (z >> 31)


def key_id(key):
    """Map an int or str key to a 64-bit integer (FNV-1a for strings)."""
    if isinstance(key, (int, np.integer)):
        return int(key) & MASK64
    h = 0xCBF29CE484222325
    for b in str(key).encode("utf-8"):
        h = ((h ^ b) * 0x100000001B3) & MASK64
    return h


def derive_seed(seed, *keys):
    s = int(seed) & MASK64
    for k in keys:
        s = mix64(s + GAMMA * (key_id(k) + 1))
    return s


def _mix64_array(z):
    z = z ^ (z >> np.uint64(30))
    z = z * np.uint64(_M1)
    z = z ^ (z >> np.uint64(27))
    z = z * np.uint64(_M2)
    return z ^ (z >> np.uint64(31))


class SplitMix64:
    """Sequential SplitMix64 generator.

    ``next_u64`` and the vectorised ``u64``/``uniform`` draw from the same
    sequence: ``SplitMix64(s).uniform(n)`` equals ``n`` calls of
    ``next_uniform`` on a fresh generator.
    """

    def __init__(self, seed):
        self.seed = int(seed) & MASK64
        self.state = self.seed

    def next_u64(self):
        self.state = (self.state + GAMMA) & MASK64
        return mix64(self.state)

    def next_uniform(self):
        return (self.next_u64() >> 11) * 2.0**-53

    def below(self, n):
        """Integer in ``[0, n)`` by multiply-shift (bias below n / 2**64)."""
        if n <= 0:
            raise ValueError("n must be positive")
        return (self.next_u64() * n) >> 64

    def u64(self, size):
        size = int(size)
        steps = np.arange(1, size + 1, dtype=np.uint64)
        with np.errstate(over="ignore"):
            states = np.uint64(self.state) + steps * np.uint64(GAMMA)
            out = _mix64_array(states)
        self.state = (self.state + GAMMA * size) & MASK64
        return out

    def uniform(self, size):
        """``size`` doubles in [0, 1) with 53 random mantissa bits."""
        return (self.u64(size) >> np.uint64(11)).astype(np.float64) * 2.0**-53

    def normal(self, size):
        """Standard normals by Box-Muller, one uniform pair per draw."""
        u = self.uniform(2 * int(size))
        r = np.sqrt(-2.0 * np.log1p(-u[0::2]))
        return r * np.cos(2.0 * np.pi * u[1::2])

    def permutation(self, n):
        """Uniform permutation of ``range(n)`` by Fisher-Yates (high to low)."""
        perm = list(range(n))
        for i in range(n - 1, 0, -1):
            j = self.below(i + 1)
            perm[i], perm[j] = perm[j], perm[i]
        return perm

    def sample(self, n, k):
        """``k`` distinct indices of ``range(n)``, partial Fisher-Yates order."""
        if not 0 <= k <= n:
            raise ValueError("k must lie in [0, n]")
        pool = list(range(n))
        for i in range(k):
            j = i + self.below(n - i)
            pool[i], pool[j] = pool[j], pool[i]
        return pool[:k]
