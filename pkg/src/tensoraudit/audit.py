"""Multi-start uniqueness audit.

For each of ``tests`` independent tests a fresh seven-start bundle is built
(seed ``derive_seed(master_seed, "test", index)``) and the seven runs are
advanced in lockstep. After every sweep ``t`` the divergence from the R1 run
is recorded:

* HOSVD: ``d(t) = (1/6) sum_{i=2..7} (|U_i - U_1| + |V_i - V_1| + |W_i - W_1|)``
* ParaFac: ``d'(t) = (1/6) sum_{i=2..7} |Xhat_i - Xhat_1|``

with Frobenius norms. A test agrees when ``d(T) < epsilon * scale``; the
verdict is UNIQUE only if every test agrees. ``scale`` is
``sqrt(n1 m1 + n2 m2 + n3 m3)`` for HOSVD (factors are orthonormal, hence
independent of the data magnitude) and ``||X||_F`` for ParaFac.
"""

import hashlib
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .errors import ArgumentError, NumericalError
from .hosvd import hosvd_iterates
from .parafac import parafac_iterates
from .rng import derive_seed
from .t1 import identical_bundle, make_init_bundle
from .tensor import as_tensor3, frobenius_norm_sq

SCHEMA_VERSION = 1
DEFAULT_ITERATIONS = {"hosvd": 100, "parafac": 2000}

UNIQUE = "UNIQUE"
NON_UNIQUE = "NON_UNIQUE"
INDETERMINATE = "INDETERMINATE"


@dataclass
class AuditConfig:
    algorithm: str = "hosvd"
    dims: tuple = (5, 5, 5)  # HOSVD target dims
    rank: int = 5  # ParaFac rank
    tests: int = 10
    iterations: int = None  # None -> 100 for HOSVD, 2000 for ParaFac
    epsilon: float = 1e-8
    master_seed: int = 0
    identical_starts: bool = False

    def __post_init__(self):
        self.algorithm = self.algorithm.lower()
        if self.algorithm not in DEFAULT_ITERATIONS:
            raise ArgumentError(f"unknown algorithm {self.algorithm!r}")
        if self.iterations is None:
            self.iterations = DEFAULT_ITERATIONS[self.algorithm]
        self.dims = tuple(int(m) for m in self.dims)
        if self.tests < 1 or self.iterations < 1:
            raise ArgumentError("tests and iterations must be >= 1")
        if not self.epsilon > 0:
            raise ArgumentError("epsilon must be positive")

    def to_dict(self):
        d = asdict(self)
        d["dims"] = list(self.dims)
        if self.algorithm == "hosvd":
            del d["rank"]
        else:
            del d["dims"]
        return d


def hosvd_distance(snapshots):
    """``d(t)`` from seven ``(U, V, W)`` snapshots, reference first."""
    ref = snapshots[0]
    total = 0.0
    for other in snapshots[1:]:
        for A, B in zip(other, ref):
            if A.shape != B.shape:
                raise RuntimeError(f"snapshot shapes differ: {A.shape} vs {B.shape}")
            total += np.linalg.norm(A - B)
    return total / (len(snapshots) - 1)


def parafac_distance(reconstructions):
    """``d'(t)`` from seven reconstructed tensors, reference first."""
    ref = reconstructions[0]
    total = 0.0
    for other in reconstructions[1:]:
        if other.shape != ref.shape:
            raise RuntimeError(f"reconstruction shapes differ: {other.shape} vs {ref.shape}")
        total += np.linalg.norm((other - ref).ravel())
    return total / (len(reconstructions) - 1)


def audit_scale(X, config):
    X = np.asarray(X)
    if config.algorithm == "hosvd":
        return math.sqrt(sum(n * m for n, m in zip(X.shape, config.dims)))
    return math.sqrt(frobenius_norm_sq(X))


def seed_for_test(master_seed, index):
    return derive_seed(master_seed, "test", index)


def build_bundle(X, config, index):
    seed = seed_for_test(config.master_seed, index)
    dims = config.dims if config.algorithm == "hosvd" else config.rank
    if config.identical_starts:
        return identical_bundle(X, dims, seed)
    return make_init_bundle(X, dims, seed)


def run_test(X, config, index):
    """Run one test (seven lockstep runs). Returns a JSON-ready dict."""
    started = time.perf_counter()
    bundle = build_bundle(X, config, index)
    result = {
        "index": index,
        "seed": bundle.master_seed,
        "bundle": bundle.to_dict(),
        "status": "OK",
    }
    T = config.iterations
    d_series = []
    objectives = {label: [] for label in bundle.labels}
    try:
        if config.algorithm == "hosvd":
            runs = [hosvd_iterates(X, config.dims, p, T) for p in bundle.pairs()]
            for states in zip(*runs):
                d_series.append(hosvd_distance([s[:3] for s in states]))
                for label, s in zip(bundle.labels, states):
                    objectives[label].append(frobenius_norm_sq(s[3]))
        else:
            runs = [parafac_iterates(X, config.rank, p, T) for p in bundle.pairs()]
            for states in zip(*runs):
                d_series.append(parafac_distance([Xhat for _, Xhat in states]))
                for label, (_, Xhat) in zip(bundle.labels, states):
                    objectives[label].append(frobenius_norm_sq(X - Xhat))
    except NumericalError as exc:
        result["status"] = "FAILED"
        result["error"] = str(exc)
    result["d_series"] = [float(d) for d in d_series]
    result["final_d"] = float(d_series[-1]) if d_series else None
    result["min_d"] = float(min(d_series)) if d_series else None
    result["objective_traces"] = {k: [float(v) for v in vals] for k, vals in objectives.items()}
    return result, time.perf_counter() - started


def _run_test_job(args):
    return run_test(*args)


def verdict_for(tests, threshold):
    if any(t["status"] != "OK" for t in tests):
        return INDETERMINATE
    if all(t["final_d"] < threshold for t in tests):
        return UNIQUE
    return NON_UNIQUE


def tensor_digest(X):
    data = np.asarray(X, dtype="<f8").ravel(order="F").tobytes()
    return hashlib.sha256(data).hexdigest()


@dataclass
class AuditReport:
    config: AuditConfig
    tensor: dict
    scale: float
    tests: list
    verdict: str
    timing: dict = field(default_factory=dict)
    extra: dict = field(default_factory=dict)

    @property
    def threshold(self):
        return self.config.epsilon * self.scale

    def d_series(self):
        return [t["d_series"] for t in self.tests]

    def to_dict(self):
        out = {
            "schema_version": SCHEMA_VERSION,
            "kind": "audit",
            "config": self.config.to_dict(),
            "tensor": self.tensor,
            "scale": self.scale,
            "threshold": self.threshold,
            "verdict": self.verdict,
            "per_test": self.tests,
        }
        out.update(self.extra)
        out["timing"] = self.timing
        return out


def run_audit(X, config, jobs=1):
    """Run every test and assemble the report.

    Tests are independent jobs; with ``jobs > 1`` they run in worker
    processes. Results are placed by test index, so the report does not
    depend on scheduling.
    """
    X = as_tensor3(X)
    started = time.perf_counter()
    indices = range(config.tests)
    if jobs > 1 and config.tests > 1:
        with ProcessPoolExecutor(max_workers=min(jobs, config.tests)) as pool:
            outcomes = list(pool.map(_run_test_job, [(X, config, i) for i in indices]))
    else:
        outcomes = [run_test(X, config, i) for i in indices]
    tests = [r for r, _ in outcomes]
    scale = audit_scale(X, config)
    report = AuditReport(
        config=config,
        tensor={
            "shape": list(X.shape),
            "norm_sq": frobenius_norm_sq(X),
            "sha256": tensor_digest(X),
        },
        scale=scale,
        tests=tests,
        verdict=verdict_for(tests, config.epsilon * scale),
        timing={
            "jobs": int(jobs),
            "per_test_seconds": [s for _, s in outcomes],
            "total_seconds": time.perf_counter() - started,
        },
    )
    return report
