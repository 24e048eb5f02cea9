"""Command-line harness.

Subcommands: gen, sketch, merge, decode, eval, sweep, lloyd.  Exit codes:
0 on success, 1 for usage or configuration errors, 2 for runtime failures.
The sweep worker pool is bounded by the CSKIT_THREADS environment variable.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import io as cskit_io
from .datagen import gen_gmm, make_separated_spec
from .decoders import (
    Box,
    DecoderConfig,
    GradientAscentSearch,
    GridSearch,
    MeanShiftSearch,
    clompr,
    maxima_pursuit,
)
from .kmeans import lloyd, mse, rse
from .sketching import merge_sketches, sample_frequencies, sketch_dataset
from .sweep import ExperimentConfig, run_sweep

__all__ = ["main"]

USAGE_ERROR = 1
RUNTIME_ERROR = 2


class UsageError(Exception):
    """Invalid arguments or configuration; maps to exit code 1."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="cskit", description="Compressive clustering toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a synthetic Gaussian-mixture dataset")
    p.add_argument("--out", required=True, help="dataset path (.csv or binary)")
    p.add_argument("--n", type=int, required=True, help="number of points")
    p.add_argument("--seed", type=int, default=0, help="sampling seed")
    p.add_argument("--spec", help="mixture spec JSON (weights/means/covariances)")
    p.add_argument("--k", type=int, help="clusters for a generated separated spec")
    p.add_argument("--d", type=int, help="dimension for a generated separated spec")
    p.add_argument("--spec-seed", type=int, default=0, help="seed for the separated spec")

    p = sub.add_parser("sketch", help="sketch a dataset file")
    p.add_argument("--dataset", required=True)
    p.add_argument("--m", type=int, required=True, help="sketch size")
    p.add_argument("--sigma", type=float, required=True, help="frequency bandwidth")
    p.add_argument("--seed", type=int, default=0, help="frequency seed")
    p.add_argument("--out", required=True, help="sketch JSON path")

    p = sub.add_parser("merge", help="merge sketches sharing one frequency matrix")
    p.add_argument("--out", required=True)
    p.add_argument("sketches", nargs="+", help="two or more sketch files")

    p = sub.add_parser("decode", help="recover centroids from a sketch file")
    p.add_argument("--sketch", required=True)
    p.add_argument("--decoder", required=True, choices=["clompr", "proposed-grid", "proposed-meanshift"])
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--T", type=int, default=None, help="support size (default 2k)")
    p.add_argument("--model", choices=["dirac", "gaussian"], default="dirac")
    p.add_argument("--L", type=int, default=100, help="mean-shift restarts")
    p.add_argument("--eta", type=float, default=None, help="mean-shift step (default sigma^2/2)")
    p.add_argument("--max-iters", type=int, default=300, help="mean-shift iteration cap")
    p.add_argument("--tol", type=float, default=None, help="mean-shift step tolerance")
    p.add_argument("--grid-points", type=int, default=5, help="grid nodes per axis")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--box-lower", type=float, default=-1.0)
    p.add_argument("--box-upper", type=float, default=1.0)
    p.add_argument("--no-finetune", action="store_true", help="skip clompr fine-tuning")
    p.add_argument("--out", required=True, help="result JSON path")

    p = sub.add_parser("eval", help="score a decode result against a dataset")
    p.add_argument("--result", required=True)
    p.add_argument("--dataset", required=True)
    p.add_argument("--lloyd-n-init", type=int, default=5)
    p.add_argument("--lloyd-seed", type=int, default=0)
    p.add_argument("--lloyd-max-iters", type=int, default=300)
    p.add_argument("--no-rse", action="store_true", help="report MSE only")

    p = sub.add_parser("sweep", help="run an experiment grid from a JSON config")
    p.add_argument("--config", required=True)
    p.add_argument("--out", default=None, help="results CSV (overrides config)")

    p = sub.add_parser("lloyd", help="run the k-means baseline")
    p.add_argument("--dataset", required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--n-init", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-iters", type=int, default=300)
    p.add_argument("--out", default=None, help="optional centroids JSON")

    return parser


def _cmd_gen(args) -> int:
    if args.spec:
        spec = cskit_io.load_gmm_spec(args.spec)
    else:
        if args.k is None or args.d is None:
            raise UsageError("gen needs either --spec or both --k and --d")
        spec = make_separated_spec(args.k, args.d, args.spec_seed)
    points, labels = gen_gmm(spec, args.n, args.seed)
    cskit_io.save_dataset(points, args.out)
    cskit_io.save_labels(labels, args.out + ".labels.txt")
    cskit_io.save_gmm_spec(spec, args.out + ".spec.json")
    print(f"wrote {points.shape[0]} x {points.shape[1]} dataset to {args.out}")
    return 0


def _cmd_sketch(args) -> int:
    data = cskit_io.load_dataset(args.dataset)
    freqs = sample_frequencies(data.shape[1], args.m, args.sigma, args.seed)
    sketch = sketch_dataset(data, freqs)
    cskit_io.save_sketch(sketch, freqs, args.out)
    print(f"wrote sketch of {sketch.count} points (m={freqs.m}) to {args.out}")
    return 0


def _cmd_merge(args) -> int:
    if len(args.sketches) < 2:
        raise UsageError("merge needs at least two sketch files")
    merged, freqs = cskit_io.load_sketch(args.sketches[0])
    for path in args.sketches[1:]:
        other, _ = cskit_io.load_sketch(path)
        merged = merge_sketches(merged, other)
    cskit_io.save_sketch(merged, freqs, args.out)
    print(f"wrote merged sketch of {merged.count} points to {args.out}")
    return 0


def _cmd_decode(args) -> int:
    sketch, freqs = cskit_io.load_sketch(args.sketch)
    if args.T is not None and args.T < args.k:
        raise UsageError(f"need T >= k, got T={args.T} < k={args.k}")
    if args.decoder == "proposed-grid":
        search = GridSearch(points_per_axis=args.grid_points)
    elif args.decoder == "proposed-meanshift":
        search = MeanShiftSearch(
            eta=args.eta, restarts=args.L, max_iters=args.max_iters, tol=args.tol
        )
    else:
        search = GradientAscentSearch()
    try:
        cfg = DecoderConfig(
            k=args.k,
            T=args.T,
            model=args.model,
            search=search,
            seed=args.seed,
            finetune=not args.no_finetune,
        )
        box = Box(
            lower=np.full(freqs.d, args.box_lower), upper=np.full(freqs.d, args.box_upper)
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if args.decoder == "clompr":
        if args.model != "dirac":
            raise UsageError("clompr supports model='dirac' only")
        result = clompr(sketch, freqs, cfg, box)
    else:
        result = maxima_pursuit(sketch, freqs, cfg, box)
    cskit_io.save_result(result, args.out)
    print(
        f"wrote {len(result.components)} components (residual norm "
        f"{result.residual_norm:.6g}) to {args.out}"
    )
    return 0


def _cmd_eval(args) -> int:
    result = cskit_io.load_result(args.result)
    data = cskit_io.load_dataset(args.dataset)
    centers = result.centers
    report = {"mse": mse(centers, data), "residual_norm": result.residual_norm}
    if not args.no_rse:
        reference = lloyd(
            data,
            centers.shape[0],
            n_init=args.lloyd_n_init,
            seed=args.lloyd_seed,
            max_iters=args.lloyd_max_iters,
        )
        report["rse"] = rse(centers, data, reference)
    print(json.dumps(report))
    return 0


def _cmd_sweep(args) -> int:
    with open(args.config) as fh:
        raw = json.load(fh)
    try:
        config = ExperimentConfig.from_dict(raw)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    out = args.out if args.out is not None else config.out
    if out is None:
        raise UsageError("sweep needs an output path (--out or config 'out')")
    rows = run_sweep(config, out_path=out)
    failures = sum(1 for row in rows if row["error"])
    print(f"wrote {len(rows)} rows to {out} ({failures} failed)")
    return 0


def _cmd_lloyd(args) -> int:
    data = cskit_io.load_dataset(args.dataset)
    centers = lloyd(data, args.k, n_init=args.n_init, seed=args.seed, max_iters=args.max_iters)
    value = mse(centers, data)
    if args.out:
        with open(args.out, "w") as fh:
            json.dump({"centers": centers.tolist(), "mse": value}, fh)
    print(json.dumps({"mse": value}))
    return 0


_COMMANDS = {
    "gen": _cmd_gen,
    "sketch": _cmd_sketch,
    "merge": _cmd_merge,
    "decode": _cmd_decode,
    "eval": _cmd_eval,
    "sweep": _cmd_sweep,
    "lloyd": _cmd_lloyd,
}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    try:
        return _COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except (ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return RUNTIME_ERROR
    except Exception as exc:  # pragma: no cover - unexpected runtime failure
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return RUNTIME_ERROR


if __name__ == "__main__":
    sys.exit(main())
