"""Command-line front end.

Every validation failure exits with its own code (see :data:`EXIT_CODES`) and a
single diagnostic line on stderr.  Output depends only on the arguments and
input files, so repeated runs are byte-identical.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .bottleneck import bottleneck_distance
from .bounded import (
    DENSE_CAP,
    BoundedEmbeddingSpec,
    count_landmarks,
    dense_keys,
    eligible_grid_keys,
    linear_slope,
    non_injectivity_witness,
    phi3,
    phi3_distance,
    rho3_linear,
    rho3_steps,
    rho3_steps_separated,
    uniform_spec,
)
from .diagram import PersistenceDiagram
from .grid import key_to_text
from .injective import AnchorSet, IllConditionedError, default_anchors, injective_embed, reconstruct
from .io import ArityError, DiagramFormatError, fmt, format_diagrams_csv, format_diagrams_json, read_many
from .multiscale import (
    certified_distance,
    coarse_schedule,
    combined_schedule,
    lipschitz_constant,
    rho_minus,
    rho_minus_improved,
    rho_minus_separated,
    uniform_schedule,
)
from .verify import CHECKS, CheckConfig, run_checks

EXIT_CODES = {
    "ok": 0,
    "check-failed": 1,
    "usage": 2,
    "io": 3,
    "format": 4,
    "spec": 5,
    "frame": 6,
    "arity": 7,
    "dense-cap": 8,
    "reconstruct": 9,
    "unknown-check": 10,
}

TOL_ENV = "PDEMBED_TOL"


class CliError(Exception):
    def __init__(self, kind: str, message: str):
        super().__init__(message)
        self.code = EXIT_CODES[kind]


def _default_tol() -> float:
    raw = os.environ.get(TOL_ENV)
    if raw is None:
        return 1e-9
    try:
        tol = float(raw)
    except ValueError:
        raise CliError("usage", f"{TOL_ENV}={raw!r} is not a number") from None
    if not tol > 0:
        raise CliError("usage", f"{TOL_ENV} must be positive")
    return tol


def _floats(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number list: {text!r}") from None


def _flat(values) -> list[float] | None:
    if values is None:
        return None
    return [v for group in values for v in group]


# -- inputs -----------------------------------------------------------------

def _load(paths: list[str], n: int | None) -> list[PersistenceDiagram]:
    try:
        return read_many(paths, n)
    except OSError as e:
        raise CliError("io", f"cannot read {e.filename}: {e.strerror or e}") from None
    except ArityError as e:
        raise CliError("arity", str(e)) from None
    except DiagramFormatError as e:
        raise CliError("format", str(e)) from None
    except ValueError as e:
        raise CliError("format", str(e)) from None


def _frame_spec(args, n: int) -> BoundedEmbeddingSpec:
    scales = _flat(args.scales)
    weights = _flat(args.weights)
    if args.uniform is not None:
        if scales is not None or weights is not None:
            raise CliError("usage", "--uniform excludes --scales/--weights")
        m, M, N = args.uniform
        if N != int(N):
            raise CliError("spec", "--uniform needs an integer number of scales")
        try:
            return uniform_spec(m, M, int(N), n)[0]
        except ValueError as e:
            raise CliError("spec", str(e)) from None
    if args.frame is None or scales is None:
        raise CliError("usage", "need --frame and --scales (or --uniform m M N)")
    if weights is None:
        weights = [1 / math.sqrt(len(scales))] * len(scales)
    try:
        return BoundedEmbeddingSpec(args.frame, tuple(scales), tuple(weights), n)
    except ValueError as e:
        raise CliError("spec", str(e)) from None


def _check_frame(diagrams, L: float) -> None:
    for i, x in enumerate(diagrams):
        if not x.in_frame(L):
            raise CliError("frame", f"diagram {i} has points outside the frame [0, {fmt(L)}]^2")


def _schedule(name: str, n: int):
    return {"coarse": coarse_schedule, "uniform": uniform_schedule, "combined": combined_schedule}[name](n)


def _emit(args, text: str) -> None:
    if getattr(args, "output", None):
        try:
            Path(args.output).write_text(text)
        except OSError as e:
            raise CliError("io", f"cannot write {args.output}: {e.strerror or e}") from None
    else:
        sys.stdout.write(text)


# -- subcommands --------------------------------------------------------------

def cmd_embed(args) -> int:
    diagrams = _load(args.inputs, args.n)
    spec = _frame_spec(args, diagrams[0].arity)
    _check_frame(diagrams, spec.L)
    lines = []
    if args.dense:
        if spec.dense_length > args.dense_cap:
            raise CliError("dense-cap", f"dense length {spec.dense_length} exceeds cap {args.dense_cap}")
        header = args.header or (args.output + ".keys" if args.output else None)
        if header is None:
            raise CliError("usage", "--dense to stdout needs --header for the key list")
        keys = [key_to_text(k, i + 1) for i, R in enumerate(spec.scales) for k in dense_keys(R, spec.L, spec.n)]
        try:
            Path(header).write_text("\n".join(keys) + "\n")
        except OSError as e:
            raise CliError("io", f"cannot write {header}: {e.strerror or e}") from None
        for x in diagrams:
            lines.append(",".join(fmt(v) for v in phi3(x, spec, dense=True, dense_cap=args.dense_cap)))
    else:
        for x in diagrams:
            parts = []
            for i, block in enumerate(phi3(x, spec)):
                for key in sorted(block.entries):
                    parts.append(f"{key_to_text(key, i + 1)}={fmt(block.entries[key])}")
            lines.append(" ".join(parts))
    _emit(args, "\n".join(lines) + "\n")
    return 0


def _matrix(name: str, M: np.ndarray) -> list[str]:
    return [f"# {name}"] + [",".join(fmt(v) for v in row) for row in M]


def cmd_dist(args) -> int:
    diagrams = _load(args.inputs, args.n)
    n = diagrams[0].arity
    k = len(diagrams)
    out: list[str] = []
    if args.mode in ("bottleneck", "both"):
        B = np.zeros((k, k))
        for i in range(k):
            for j in range(i + 1, k):
                B[i, j] = B[j, i] = bottleneck_distance(diagrams[i], diagrams[j])
        out += _matrix("bottleneck", B)
    if args.mode in ("embedded", "both"):
        E = np.zeros((k, k))
        if args.schedule == "frame":
            spec = _frame_spec(args, n)
            _check_frame(diagrams, spec.L)
            imgs = [phi3(x, spec) for x in diagrams]
            for i in range(k):
                for j in range(i + 1, k):
                    E[i, j] = E[j, i] = phi3_distance(imgs[i], imgs[j])
            out += _matrix("embedded frame", E)
        else:
            sched = _schedule(args.schedule, n)
            for i in range(k):
                for j in range(i + 1, k):
                    iv = certified_distance(diagrams[i], diagrams[j], sched, args.eps)
                    E[i, j] = E[j, i] = (iv.lower + iv.upper) / 2
            out += _matrix(f"embedded {args.schedule} midpoint eps={fmt(args.eps)}", E)
    _emit(args, "\n".join(out) + "\n")
    return 0


def _grid(args) -> list[float]:
    if args.t is not None:
        ts = _flat(args.t)
    else:
        if args.steps < 2:
            raise CliError("usage", "--steps must be >= 2")
        ts = [args.t_min + (args.t_max - args.t_min) * i / (args.steps - 1) for i in range(args.steps)]
    if any(t < 0 for t in ts):
        raise CliError("usage", "t values must be >= 0")
    return ts


def cmd_profile(args) -> int:
    ts = _grid(args)
    if args.schedule == "frame":
        spec = _frame_spec(args, args.n)
        if any(t > spec.L for t in ts):
            raise CliError("frame", f"t values must not exceed the frame size {fmt(spec.L)}")
        lines = ["t,rho3_steps,rho3_linear,rho3_steps_separated,upper_bound"]
        for t in ts:
            row = [t, rho3_steps(spec, t), rho3_linear(spec, t), rho3_steps_separated(spec, t), t]
            lines.append(",".join(fmt(v) for v in row))
    else:
        sched = _schedule(args.schedule, args.n)
        lip = lipschitz_constant(sched)
        lines = ["t,rho_minus,rho_minus_improved,upper_bound,rho_minus_separated"]
        for t in ts:
            row = [t, rho_minus(sched, t), rho_minus_improved(sched, t), lip * t, rho_minus_separated(sched, t)]
            lines.append(",".join(fmt(v) for v in row))
    _emit(args, "\n".join(lines) + "\n")
    return 0


def cmd_spec(args) -> int:
    spec = _frame_spec(args, args.n)
    lines = [f"# frame L={fmt(spec.L)} n={spec.n} N={spec.N}",
             "index,scale,weight,grid_keys,nu,step_height,step_height_separated"]
    for i, (R, w) in enumerate(zip(spec.scales, spec.weights)):
        G = len(eligible_grid_keys(R, spec.L))
        lines.append(",".join([str(i + 1), fmt(R), fmt(w), str(G), str(count_landmarks(R, spec.L, spec.n)),
                               fmt(rho3_steps(spec, R)), fmt(rho3_steps_separated(spec, min(3 * R, spec.L)))]))
    lines.append(f"# total_nu={spec.dense_length}")
    lines.append(f"# linear_slope={fmt(linear_slope(spec))}")
    lines.append(f"# linear_slope_frame_corner={fmt(linear_slope(spec, frame_corner=True))}")
    if args.uniform is not None:
        m, M, N = args.uniform
        _, lam, slope = uniform_spec(m, M, int(N), args.n)
        lines.append(f"# a={fmt((M - m) / (m * N))} lambda={fmt(lam)} uniform_slope={fmt(slope)}")
    _emit(args, "\n".join(lines) + "\n")
    return 0


def cmd_witness(args) -> int:
    spec = _frame_spec(args, args.n)
    try:
        x, y = non_injectivity_witness(spec)
    except ValueError as e:
        raise CliError("spec", str(e)) from None
    text = format_diagrams_json([x, y]) if args.format == "json" else format_diagrams_csv([x, y])
    _emit(args, text)
    sys.stderr.write(f"bottleneck={fmt(bottleneck_distance(x, y))} image_distance=0.0\n")
    return 0


def _anchors(args, n: int) -> AnchorSet:
    vals = _flat(args.anchors)
    try:
        if vals is None:
            return default_anchors(args.frame, n)
        return AnchorSet(tuple(vals))
    except ValueError as e:
        raise CliError("spec", str(e)) from None


def cmd_inject(args) -> int:
    diagrams = _load(args.inputs, args.n)
    n = diagrams[0].arity
    _check_frame(diagrams, args.frame)
    anchors = _anchors(args, n)
    if len(anchors) != n + 1:
        raise CliError("spec", f"need {n + 1} anchors for arity {n}, got {len(anchors)}")
    lines = []
    for i, x in enumerate(diagrams):
        try:
            vec = injective_embed(x, anchors, args.frame, strict=args.strict, tol=_default_tol())
        except IllConditionedError as e:
            raise CliError("reconstruct", f"diagram {i}: {e}") from None
        lines.append(",".join(fmt(v) for v in vec))
    _emit(args, "\n".join(lines) + "\n")
    return 0


def cmd_reconstruct(args) -> int:
    try:
        rows = [r for r in Path(args.input).read_text().splitlines() if r.strip()]
    except OSError as e:
        raise CliError("io", f"cannot read {args.input}: {e.strerror or e}") from None
    anchors = _anchors(args, args.n)
    tol = args.tol if args.tol is not None else _default_tol()
    out = []
    for i, r in enumerate(rows):
        try:
            vec = [float(v) for v in r.split(",")]
        except ValueError:
            raise CliError("format", f"{args.input}:{i + 1}: non-numeric coordinate") from None
        try:
            out.append(reconstruct(vec, anchors, args.n, tol))
        except IllConditionedError as e:
            raise CliError("reconstruct", f"row {i + 1}: ill-conditioned: {e}") from None
        except ValueError as e:
            raise CliError("reconstruct", f"row {i + 1}: {e}") from None
    if not out:
        raise CliError("format", f"{args.input}: no vectors")
    _emit(args, format_diagrams_json(out) if args.format == "json" else format_diagrams_csv(out))
    return 0


def cmd_check(args) -> int:
    suite = "all" if args.suite == ["all"] else args.suite
    unknown = [s for s in ([] if suite == "all" else suite) if s not in CHECKS]
    if unknown:
        raise CliError("unknown-check", f"unknown check(s): {', '.join(unknown)}; known: {', '.join(CHECKS)}")
    overrides = {"n": args.n, "seed": args.seed, "tolerance": args.tol if args.tol is not None else _default_tol()}
    if args.samples is not None:
        overrides["samples"] = args.samples
    cfg = CheckConfig(**overrides)
    reports = run_checks(suite, cfg)
    width = max(len(r.name) for r in reports)
    lines = [f"{'check':<{width}}  {'samples':>7}  {'worst_margin':>24}  result"]
    for r in reports:
        lines.append(f"{r.name:<{width}}  {r.samples:>7}  {fmt(r.worst_margin):>24}  {'pass' if r.passed else 'FAIL'}")
    report = {"config": {"n": cfg.n, "samples": cfg.samples, "seed": cfg.seed, "tolerance": cfg.tolerance},
              "passed": all(r.passed for r in reports),
              "checks": [r.as_dict() for r in reports]}
    blob = json.dumps(report, indent=2, sort_keys=True) + "\n"
    if args.json:
        try:
            Path(args.json).write_text(blob)
        except OSError as e:
            raise CliError("io", f"cannot write {args.json}: {e.strerror or e}") from None
        _emit(args, "\n".join(lines) + "\n")
    else:
        _emit(args, "\n".join(lines) + "\n" + blob)
    return 0 if report["passed"] else EXIT_CODES["check-failed"]


# -- parser -------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        sys.exit(EXIT_CODES["usage"])


def _frame_args(p, need_frame=True):
    p.add_argument("--frame", type=float, help="frame size L")
    p.add_argument("--scales", type=_floats, action="append", help="scales R_1 < ... < R_N (comma list)")
    p.add_argument("--weights", type=_floats, action="append", help="unit weight vector (default 1/sqrt(N))")
    p.add_argument("--uniform", type=float, nargs=3, metavar=("m", "M", "N"),
                   help="evenly spaced scales on [m, M) with constant weights")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="pdembed", description="Embeddings of persistence diagrams on n points.")
    ap.add_argument("--version", action="version", version=f"pdembed {__version__}")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("embed", help="finite-dimensional image of diagrams in a frame")
    p.add_argument("inputs", nargs="+")
    _frame_args(p)
    p.add_argument("--n", type=int)
    p.add_argument("--dense", action="store_true")
    p.add_argument("--dense-cap", type=int, default=DENSE_CAP)
    p.add_argument("--header", help="sidecar file for dense key names")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_embed)

    p = sub.add_parser("dist", help="pairwise distance matrices")
    p.add_argument("inputs", nargs="+")
    p.add_argument("--mode", choices=("bottleneck", "embedded", "both"), default="both")
    p.add_argument("--schedule", choices=("frame", "coarse", "uniform", "combined"), default="frame")
    p.add_argument("--eps", type=float, default=1e-3)
    _frame_args(p)
    p.add_argument("--n", type=int)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_dist)

    p = sub.add_parser("profile", help="lower/upper distortion tables")
    p.add_argument("--schedule", choices=("frame", "coarse", "uniform", "combined"), default="coarse")
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--t", type=_floats, action="append", help="explicit t values")
    p.add_argument("--t-min", type=float, default=0.0)
    p.add_argument("--t-max", type=float, default=10.0)
    p.add_argument("--steps", type=int, default=101)
    _frame_args(p)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_profile)

    p = sub.add_parser("spec", help="landmark counts and lower-bound tables of a frame spec")
    _frame_args(p)
    p.add_argument("--n", type=int, default=1)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_spec)

    p = sub.add_parser("witness", help="two distinct diagrams with equal frame images")
    _frame_args(p)
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_witness)

    p = sub.add_parser("inject", help="injective angle map of framed diagrams")
    p.add_argument("inputs", nargs="+")
    p.add_argument("--frame", type=float, required=True)
    p.add_argument("--anchors", type=_floats, action="append")
    p.add_argument("--n", type=int)
    p.add_argument("--strict", action="store_true", help="refuse points whose angles collapse onto pi/4")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_inject)

    p = sub.add_parser("reconstruct", help="invert the angle map")
    p.add_argument("input", help="CSV file, one vector per line")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--frame", type=float, help="frame size for default anchors")
    p.add_argument("--anchors", type=_floats, action="append")
    p.add_argument("--tol", type=float)
    p.add_argument("--format", choices=("json", "csv"), default="csv")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_reconstruct)

    p = sub.add_parser("check", help="seeded property checks")
    p.add_argument("--suite", nargs="+", default=["all"])
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--samples", type=int)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--tol", type=float)
    p.add_argument("--json", help="write the JSON report here instead of stdout")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_check)
    return ap


def _validate(args) -> None:
    for name in ("n",):
        v = getattr(args, name, None)
        if v is not None and v < 1:
            raise CliError("usage", "--n must be >= 1")
    if getattr(args, "frame", None) is not None and not args.frame > 0:
        raise CliError("spec", "--frame must be positive")
    if getattr(args, "eps", None) is not None and not args.eps > 0:
        raise CliError("usage", "--eps must be positive")
    if args.command == "reconstruct" and args.anchors is None and args.frame is None:
        raise CliError("usage", "reconstruct needs --frame or --anchors")
    if getattr(args, "samples", None) is not None and args.samples < 1:
        raise CliError("usage", "--samples must be >= 1")


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        _validate(args)
        return args.func(args)
    except CliError as e:
        sys.stderr.write(f"pdembed {args.command}: {e}\n")
        return e.code


if __name__ == "__main__":
    sys.exit(main())
