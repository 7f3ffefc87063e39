"""Image randomisations applied to every frontal slice ``X[:, :, k]``.

Slices are images with ``n1`` rows and ``n2`` columns. Slice ``k`` draws from
``SplitMix64(derive_seed(seed, k))`` when ``per_image`` is true; otherwise
every slice reuses the single stream ``derive_seed(seed, "shared")`` so all
images get the same permutation.

* block scramble: the slice is cut into an ``n x n`` grid, blocks numbered
  row-major; output block ``b`` is input block ``perm[b]``.
* pixel scramble: ``floor(alpha n1 n2)`` positions (linear index
  ``i + n1 j``) are sampled without replacement, then the value at
  ``pos[a]`` becomes the old value at ``pos[perm[a]]``.
* occlusion: a ``w x h`` rectangle at column ``x``, row ``y`` is filled.
"""

import math
import warnings
from dataclasses import asdict, dataclass

import numpy as np

from .errors import ArgumentError
from .rng import SplitMix64, derive_seed
from .tensor import as_tensor3

STUDIED_BLOCKS = (2, 4, 8)
STUDIED_ALPHAS = (0.4, 0.6, 0.8)


@dataclass
class ScrambleSpec:
    kind: str  # "block" | "pixel" | "occlude"
    seed: int = 0
    per_image: bool = True
    n: int = None
    alpha: float = None
    rect: tuple = None
    fill: float = 0.0
    moving: bool = None  # occlusion corner redrawn per slice

    def to_dict(self):
        d = {k: v for k, v in asdict(self).items() if v is not None}
        if "rect" in d:
            d["rect"] = list(d["rect"])
        return d


def slice_rng(seed, k, per_image):
    return SplitMix64(derive_seed(seed, k if per_image else "shared"))


def block_scramble(X, n, seed=0, per_image=True, rng_factory=None):
    X = as_tensor3(X)
    n1, n2, n3 = X.shape
    n = int(n)
    if n < 1 or n1 % n or n2 % n:
        raise ArgumentError(
            f"a {n}x{n} block grid needs n dividing the image size {n1}x{n2}; resize first"
        )
    if n not in STUDIED_BLOCKS:
        warnings.warn(f"block grid n={n} is outside the studied set {STUDIED_BLOCKS}", stacklevel=2)
    rng_factory = rng_factory or (lambda k: slice_rng(seed, k, per_image))
    bh, bw = n1 // n, n2 // n
    out = np.empty_like(X)
    for k in range(n3):
        perm = rng_factory(k).permutation(n * n)
        # (n, bh, n, bw) view: [block row, row in block, block col, col in block]
        blocks = X[:, :, k].reshape(n, bh, n, bw).transpose(0, 2, 1, 3).reshape(n * n, bh, bw)
        shuffled = blocks[perm].reshape(n, n, bh, bw).transpose(0, 2, 1, 3)
        out[:, :, k] = shuffled.reshape(n1, n2)
    return out


def pixel_count(alpha, pixels):
    # the small guard keeps e.g. 0.6 * 5 from flooring to 2
    return int(math.floor(alpha * pixels + 1e-9))


def pixel_scramble(X, alpha, seed=0, per_image=True, rng_factory=None):
    X = as_tensor3(X)
    n1, n2, n3 = X.shape
    if not 0 < alpha <= 1:
        raise ArgumentError(f"alpha must lie in (0, 1], got {alpha}")
    count = pixel_count(alpha, n1 * n2)
    rng_factory = rng_factory or (lambda k: slice_rng(seed, k, per_image))
    out = X.copy()
    for k in range(n3):
        rng = rng_factory(k)
        pos = np.asarray(rng.sample(n1 * n2, count), dtype=np.intp)
        perm = np.asarray(rng.permutation(count), dtype=np.intp)
        flat_in = X[:, :, k].ravel(order="F")
        flat_out = flat_in.copy()
        flat_out[pos] = flat_in[pos[perm]]
        out[:, :, k] = flat_out.reshape((n1, n2), order="F")
    return out


def occlude(X, rect, fill=0.0, per_image_position=False, seed=0):
    """Fill a ``(x, y, w, h)`` rectangle; with ``per_image_position`` the
    rectangle keeps its size but its corner is redrawn for every slice."""
    X = as_tensor3(X)
    n1, n2, n3 = X.shape
    x, y, w, h = (int(v) for v in rect)
    if min(x, y, w, h) < 0 or x + w > n2 or y + h > n1:
        raise ArgumentError(f"occlusion {rect} outside {n1}x{n2} image (x is the column)")
    out = X.copy()
    for k in range(n3):
        if per_image_position:
            rng = slice_rng(seed, k, True)
            x, y = rng.below(n2 - w + 1), rng.below(n1 - h + 1)
        out[y:y + h, x:x + w, k] = fill
    return out


def apply_scramble(X, spec):
    if spec.kind == "block":
        return block_scramble(X, spec.n, spec.seed, spec.per_image)
    if spec.kind == "pixel":
        return pixel_scramble(X, spec.alpha, spec.seed, spec.per_image)
    if spec.kind == "occlude":
        return occlude(X, spec.rect, spec.fill, bool(spec.moving), spec.seed)
    raise ArgumentError(f"unknown scramble kind {spec.kind!r}")
