"""Command-line entry point.

Exit codes: 0 success, 1 usage error, 2 data or format error, 3 numerical
failure. Failures also print one JSON line to stderr:
``{"error": <kind>, "exit_code": <n>, "message": ...}``.
"""

import argparse
import json
import os
import sys

import numpy as np

from . import io
from .audit import AuditConfig, run_audit
from .errors import ArgumentError, TensorAuditError
from .hosvd import hosvd_objective, hosvd_run
from .parafac import parafac_run
from .scramble import STUDIED_ALPHAS, STUDIED_BLOCKS, ScrambleSpec, apply_scramble
from .spectrum import CENTERINGS, DEFAULT_TAU, spectrum_report
from .synth import gen_planted_tucker, gen_random_tensor
from .t1 import START_LABELS, make_init_bundle
from .tensor import frobenius_norm_sq

PRESETS = {"m5": (5, 5, 5), "m10": (10, 10, 10)}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ArgumentError(f"{self.prog}: {message}")


def _ints(text):
    try:
        return tuple(int(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _floats(text):
    try:
        return tuple(float(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _triple(text):
    dims = _ints(text)
    if len(dims) == 1:
        dims = dims * 3
    if len(dims) != 3:
        raise argparse.ArgumentTypeError(f"expected 1 or 3 integers, got {text!r}")
    return dims


def _emit_config(name, config):
    print(f"config {name}: " + json.dumps(config, sort_keys=True))


def _target(args, required=True):
    if getattr(args, "preset", None):
        return PRESETS[args.preset]
    if args.dims is None and required:
        raise ArgumentError("pass --dims or --preset")
    return args.dims


def _add_target(p, rank=True):
    g = p.add_mutually_exclusive_group()
    g.add_argument("--dims", type=_triple, help="target dims m1,m2,m3 (or one value for all)")
    g.add_argument("--preset", choices=sorted(PRESETS))
    if rank:
        p.add_argument("--rank", type=int, help="ParaFac rank R")


def build_parser():
    parser = _Parser(prog="tensoraudit", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("gen", help="generate a synthetic tensor")
    p.add_argument("--dims", type=_triple, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--kind", choices=("random", "planted"), default="random")
    p.add_argument("--core-dims", type=_triple)
    p.add_argument("--spectrum", type=_floats, help="planted superdiagonal core values")
    p.add_argument("--noise", type=float, default=0.0, help="noise norm relative to signal")
    p.add_argument("--out", required=True)

    p = sub.add_parser("ingest", help="stack a directory of PGM images")
    p.add_argument("--dir", required=True)
    p.add_argument("--size", type=_ints, help="target h,w (bilinear resize)")
    p.add_argument("--out", required=True)

    p = sub.add_parser("scramble", help="block/pixel scramble or occlude every slice")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--block", type=int, help=f"n x n block grid (studied: {STUDIED_BLOCKS})")
    g.add_argument("--pixel", type=float, help=f"fraction of pixels (studied: {STUDIED_ALPHAS})")
    g.add_argument("--occlude", type=_ints, help="x,y,w,h rectangle")
    p.add_argument("--fill", type=float, default=0.0)
    p.add_argument("--moving", action="store_true", help="redraw occlusion position per slice")
    p.add_argument("--shared", action="store_true", help="one permutation for all slices")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", required=True)

    p = sub.add_parser("decompose", help="run one HOSVD or ParaFac decomposition")
    p.add_argument("--algo", choices=("hosvd", "parafac"), required=True)
    _add_target(p)
    p.add_argument("--iters", type=int)
    p.add_argument("--init", default="R1", type=str.upper,
                   choices=[s.upper() for s in START_LABELS])
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", required=True, help="output directory")

    p = sub.add_parser("audit", help="multi-start uniqueness audit")
    p.add_argument("--algo", choices=("hosvd", "parafac"), required=True)
    _add_target(p)
    p.add_argument("--tests", type=int, default=10)
    p.add_argument("--iters", type=int)
    p.add_argument("--eps", type=float, default=1e-8)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
    p.add_argument("--identical-starts", action="store_true",
                   help="control run: all seven starts equal R1")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--csv-dir")

    p = sub.add_parser("spectrum", help="identity-projector spectra and uniqueness prediction")
    _add_target(p, rank=False)
    p.add_argument("--tau", type=float, default=DEFAULT_TAU)
    p.add_argument("--centering", choices=CENTERINGS, default="all-modes")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--csv-dir")

    p = sub.add_parser("report", help="flatten a report JSON into CSV files")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--spectrum", help="spectrum report to attach to an audit report")
    p.add_argument("--csv-dir", required=True)
    p.add_argument("--out", help="write the merged report JSON here")
    return parser


def cmd_gen(args):
    config = {"dims": list(args.dims), "seed": args.seed, "kind": args.kind}
    if args.kind == "random":
        X = gen_random_tensor(args.dims, args.seed)
    else:
        if args.core_dims is None or args.spectrum is None:
            raise ArgumentError("planted tensors need --core-dims and --spectrum")
        config.update(core_dims=list(args.core_dims), spectrum=list(args.spectrum),
                      noise=args.noise)
        X = gen_planted_tucker(args.dims, args.core_dims, args.spectrum, args.noise, args.seed)
    _emit_config("gen", config)
    io.save_tensor(X, args.out)
    print(f"wrote {args.out} shape={X.shape}")


def cmd_ingest(args):
    if args.size is not None and len(args.size) != 2:
        raise ArgumentError("--size takes h,w")
    _emit_config("ingest", {"dir": args.dir, "size": list(args.size) if args.size else None})
    X = io.ingest_images(args.dir, args.size)
    io.save_tensor(X, args.out)
    print(f"wrote {args.out} shape={X.shape}")


def cmd_scramble(args):
    common = dict(seed=args.seed, per_image=not args.shared)
    if args.block is not None:
        spec = ScrambleSpec("block", n=args.block, **common)
    elif args.pixel is not None:
        spec = ScrambleSpec("pixel", alpha=args.pixel, **common)
    else:
        if len(args.occlude) != 4:
            raise ArgumentError("--occlude takes x,y,w,h")
        spec = ScrambleSpec("occlude", rect=args.occlude, fill=args.fill, moving=args.moving,
                            **common)
    _emit_config("scramble", {"input": args.input, **spec.to_dict()})
    X = apply_scramble(io.load_tensor(args.input), spec)
    io.save_tensor(X, args.out)
    print(f"wrote {args.out}")


def _factor_file(M):
    return np.asarray(M)[:, :, None]


def cmd_decompose(args):
    X = io.load_tensor(args.input)
    label = next(s for s in START_LABELS if s.upper() == args.init)
    if args.algo == "hosvd":
        target = _target(args)
        iters = args.iters or 100
    else:
        if args.rank is None:
            raise ArgumentError("parafac needs --rank")
        target = args.rank
        iters = args.iters or 2000
    config = {"algo": args.algo, "target": target, "iters": iters, "init": label,
              "seed": args.seed, "input": args.input}
    _emit_config("decompose", config)
    bundle = make_init_bundle(X, target, args.seed)
    init = bundle.pairs()[START_LABELS.index(label)]
    os.makedirs(args.out, exist_ok=True)
    xx = frobenius_norm_sq(X)
    summary = {"schema_version": 1, "kind": "decompose", "config": config,
               "bundle": bundle.to_dict()}
    if args.algo == "hosvd":
        model, trace = hosvd_run(X, target, init, iters)
        j1 = hosvd_objective(X, model.S)
        summary.update(objective_trace=trace.objective, J1=j1, J1_relative=j1 / xx)
        for name in "UVW":
            io.save_tensor(_factor_file(getattr(model, name)), os.path.join(args.out, f"{name}.tns3"))
        io.save_tensor(model.S, os.path.join(args.out, "S.tns3"))
        print(f"J1={j1:.6e} relative={j1 / xx:.3e}")
    else:
        model, trace = parafac_run(X, target, init, iters)
        final = trace.objective[-1]
        summary.update(objective_trace=trace.objective, J=final, J_relative=final / xx)
        for name in "UVW":
            io.save_tensor(_factor_file(getattr(model, name)), os.path.join(args.out, f"{name}.tns3"))
        print(f"J={final:.6e} relative={final / xx:.3e}")
    io.write_json(summary, os.path.join(args.out, "model.json"))


def cmd_audit(args):
    X = io.load_tensor(args.input)
    if args.algo == "hosvd":
        config = AuditConfig("hosvd", dims=_target(args), tests=args.tests,
                             iterations=args.iters, epsilon=args.eps, master_seed=args.seed,
                             identical_starts=args.identical_starts)
    else:
        if args.rank is None:
            raise ArgumentError("parafac needs --rank")
        config = AuditConfig("parafac", rank=args.rank, tests=args.tests,
                             iterations=args.iters, epsilon=args.eps, master_seed=args.seed,
                             identical_starts=args.identical_starts)
    _emit_config("audit", {**config.to_dict(), "input": args.input, "jobs": args.jobs})
    report = run_audit(X, config, jobs=max(1, args.jobs)).to_dict()
    timing = report.pop("timing")
    report["input"] = args.input
    report["timing"] = timing  # kept last so reports diff cleanly above it
    io.write_json(report, args.out)
    if args.csv_dir:
        io.flatten_report(report, args.csv_dir)
    finals = ", ".join(f"{t['final_d']:.3e}" if t["final_d"] is not None else "failed"
                       for t in report["per_test"])
    print(f"verdict {report['verdict']} (threshold {report['threshold']:.3e}); final d: {finals}")


def cmd_spectrum(args):
    X = io.load_tensor(args.input)
    dims = _target(args, required=False)
    _emit_config("spectrum", {"input": args.input, "dims": list(dims) if dims else None,
                              "tau": args.tau, "centering": args.centering})
    report = spectrum_report(X, dims, args.tau, args.centering).to_dict()
    report["input"] = args.input
    io.write_json(report, args.out)
    if args.csv_dir:
        io.flatten_report(report, args.csv_dir)
    if dims:
        gaps = ", ".join("full" if g is None else f"{g:.4f}" for g in report["gaps"])
        print(f"prediction {report['prediction']} (gaps {gaps}; tau {args.tau})")


def cmd_report(args):
    report = io.read_json(args.input)
    _emit_config("report", {"input": args.input, "spectrum": args.spectrum,
                            "csv_dir": args.csv_dir})
    if args.spectrum:
        if report.get("kind") != "audit":
            raise ArgumentError("--spectrum attaches to an audit report")
        spec = io.read_json(args.spectrum)
        report["spectrum"] = spec
        print(f"attached spectrum (centering {spec['centering']}, "
              f"prediction {spec.get('prediction')}) to audit verdict {report['verdict']}")
    for path in io.flatten_report(report, args.csv_dir):
        print(f"wrote {path}")
    if args.out:
        io.write_json(report, args.out)


COMMANDS = {
    "gen": cmd_gen, "ingest": cmd_ingest, "scramble": cmd_scramble,
    "decompose": cmd_decompose, "audit": cmd_audit, "spectrum": cmd_spectrum,
    "report": cmd_report,
}


def main(argv=None):
    try:
        args = build_parser().parse_args(argv)
        COMMANDS[args.command](args)
    except TensorAuditError as exc:
        line = {"error": exc.kind, "exit_code": exc.exit_code, "message": str(exc)}
        print(json.dumps(line), file=sys.stderr)
        return exc.exit_code
    return 0


if __name__ == "__main__":
    sys.exit(main())
