"""Compare the spectrum predictor with the audit on ten planted tensors.

Five tensors have a clear gap at the truncation point and five are flat
across it. MARGINAL predictions count as abstentions.
"""

import argparse
import os
from dataclasses import asdict, dataclass

from tensoraudit.audit import AuditConfig, run_audit
from tensoraudit.spectrum import DEFAULT_TAU, spectrum_report
from tensoraudit.synth import gen_planted_tucker

BATTERY = [
    ("gap", (1, 0.6, 0.4), 3),
    ("gap", (1, 0.8, 0.5, 0.3), 4),
    ("gap", (1, 0.7, 0.5, 0.35, 0.25), 5),
    ("gap", (1, 0.9, 0.7, 0.5, 0.4, 0.3), 6),
    ("gap", (1, 0.8, 0.6, 0.5, 0.2, 0.1), 4),
    ("flat", (1, 0.8, 0.6, 0.6, 0.6, 0.6), 3),
    ("flat", (1, 1, 1, 1, 1, 1), 3),
    ("flat", (1, 0.7, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5), 4),
    ("flat", (1, 0.6, 0.6, 0.6, 0.3, 0.2), 2),
    ("flat", (1, 0.9, 0.8, 0.6, 0.6, 0.6, 0.6, 0.6), 5),
]


@dataclass
class Experiment:
    size: int = 20
    noise: float = 0.01
    tau: float = DEFAULT_TAU
    tests: int = 10
    jobs: int = os.cpu_count() or 1


def run(exp):
    agree = counted = 0
    for i, (kind, spectrum, m) in enumerate(BATTERY):
        core = (len(spectrum),) * 3
        X = gen_planted_tucker((exp.size,) * 3, core, spectrum, exp.noise, 100 + i)
        spec = spectrum_report(X, m, exp.tau)
        audit = run_audit(X, AuditConfig("hosvd", dims=(m, m, m), tests=exp.tests,
                                         master_seed=i), exp.jobs)
        if spec.prediction != "MARGINAL":
            counted += 1
            agree += spec.prediction == audit.verdict
        gaps = " ".join("full" if g is None else f"{g:.3f}" for g in spec.gaps)
        print(f"{i} {kind:<4} m={m}  gaps [{gaps}]  predictor {spec.prediction:<10} "
              f"audit {audit.verdict}")
    print(f"agreement {agree}/{counted} (MARGINAL excluded)")


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    for key, value in asdict(Experiment()).items():
        parser.add_argument(f"--{key.replace('_', '-')}", type=type(value), default=value)
    exp = Experiment(**vars(parser.parse_args()))
    print(f"config: {asdict(exp)}")
    run(exp)


if __name__ == "__main__":
    main()
