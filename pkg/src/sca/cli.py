"""Command-line surface: dataset generation, fitting, transforms, benchmarks.

All data interchange is headerless CSV (one sample per row, full float
precision). Fitted projections persist as schema-versioned JSON whose float
fields round-trip bitwise. Exit codes: 0 success, 2 usage error, 1 runtime
error; diagnostics go to stderr.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
import time

import numpy as np

from . import core
from .baselines import SirConfig, sir_fit
from .core import Projection, ScaConfig
from .datasets import FAMILIES, SyntheticSpec, generate
from .kernels import KernelKind
from .metrics import frobenius_subspace_error

MODEL_SCHEMA_VERSION = 1

SUMMARY_COLUMNS = ("dataset", "method", "n", "trials", "mean_error", "std_error", "mean_seconds")
TRIAL_COLUMNS = ("dataset", "method", "n", "trial", "seed", "error")
METHODS = ("sca", "sca0", "sir")


# ---------------------------------------------------------------------------
# Matrix and model file I/O


def load_matrix_csv(path) -> np.ndarray:
    try:
        M = np.loadtxt(path, delimiter=",", ndmin=2)
    except ValueError as exc:
        raise ValueError(f"{path}: not a rectangular numeric CSV ({exc})") from exc
    if not np.all(np.isfinite(M)):
        raise ValueError(f"{path}: contains non-finite entries")
    return M


def write_matrix_csv(path, M: np.ndarray):
    np.savetxt(path, np.atleast_2d(M), delimiter=",", fmt="%.17g")


def save_model(path, projection: Projection, hypers: dict, fit_info: dict):
    doc = {
        "schema_version": MODEL_SCHEMA_VERSION,
        "m": projection.m,
        "d": projection.d,
        "W": [[float(v) for v in row] for row in projection.W],
        "hyperparameters": hypers,
        "fit_info": fit_info,
    }
    with open(path, "w", encoding="utf-8") as f:
        json.dump(doc, f, indent=2, sort_keys=True)
        f.write("\n")


def load_model(path) -> dict:
    with open(path, encoding="utf-8") as f:
        doc = json.load(f)
    version = doc.get("schema_version")
    if version != MODEL_SCHEMA_VERSION:
        raise ValueError(f"{path}: unsupported model schema version {version!r}")
    W = np.asarray(doc["W"], dtype=float)
    if W.shape != (doc["m"], doc["d"]):
        raise ValueError(f"{path}: W shape {W.shape} disagrees with header")
    doc["projection"] = Projection(W)
    return doc


# ---------------------------------------------------------------------------
# Subcommands


def cmd_gen_data(args) -> int:
    spec = SyntheticSpec(which=args.dataset, n=args.n, seed=args.seed,
                         literal_branch=args.literal_branch)
    X, Y, _ = generate(spec)
    write_matrix_csv(args.out_x, X)
    write_matrix_csv(args.out_y, Y)
    print(f"wrote {X.shape[0]}x{X.shape[1]} inputs to {args.out_x} and targets to {args.out_y}")
    return 0


def _config_from_args(args, m: int) -> ScaConfig:
    return ScaConfig(
        m=m,
        tol=args.tol,
        max_iters=args.max_iters,
        sigma_scales=tuple(args.sigma_scales),
        lambda_candidates=tuple(args.lambdas),
        folds=args.folds,
        reselect_each_iter=not args.no_reselect,
        seed=args.seed,
        y_kernel=KernelKind.LABEL_CORRELATION if args.y_kernel == "label-correlation"
        else KernelKind.GAUSSIAN,
        max_centers=args.max_centers,
        init_max_centers=args.init_max_centers,
    )


def cmd_fit(args) -> int:
    X = load_matrix_csv(args.x)
    Y = load_matrix_csv(args.y)
    if X.shape[0] != Y.shape[0]:
        raise ValueError(f"row mismatch: {args.x} has {X.shape[0]} rows, {args.y} has {Y.shape[0]}")
    if args.m > X.shape[1]:
        raise ValueError(f"m={args.m} exceeds the input dimension {X.shape[1]}")
    config = _config_from_args(args, args.m)
    projection, trace = core.fit(X, Y, config)
    if args.verbose:
        for i, smi in enumerate(trace.smi_per_iter, start=1):
            marker = " *" if trace.best_iter is not None and i == trace.best_iter + 1 else ""
            print(f"iter {i}: smi={smi:.6g}{marker}")
        print(f"converged={trace.converged} iters={trace.iters}")
    best = trace.best_iter
    sigma_z, sigma_y, lam = (trace.selected_hypers_per_iter[best]
                             if best is not None else (None, None, None))
    save_model(
        args.out,
        projection,
        hypers={"sigma_z": sigma_z, "sigma_y": sigma_y, "lambda": lam},
        fit_info={
            "seed": args.seed,
            "iterations": trace.iters,
            "converged": trace.converged,
            "smi": trace.smi_per_iter[best] if best is not None else None,
            "y_kernel": args.y_kernel,
        },
    )
    print(f"fitted {projection.m}x{projection.d} projection -> {args.out}")
    return 0


def cmd_transform(args) -> int:
    doc = load_model(args.model)
    projection = doc["projection"]
    X = load_matrix_csv(args.x)
    Z = core.transform(X, projection)
    write_matrix_csv(args.out, Z)
    print(f"wrote {Z.shape[0]}x{Z.shape[1]} projected samples to {args.out}")
    return 0


def _run_trial(dataset: str, method: str, n: int, seed: int, args) -> float:
    spec = SyntheticSpec(which=dataset, n=n, seed=seed)
    X, Y, W_star = generate(spec)
    m = W_star.shape[0]
    if method == "sir":
        projection = sir_fit(X, Y, SirConfig(m=m, slices=args.sir_slices))
    else:
        config = ScaConfig(m=m, tol=args.tol, max_iters=args.max_iters,
                           folds=args.folds, seed=seed, max_centers=args.max_centers,
                           init_max_centers=args.init_max_centers)
        if method == "sca0":
            projection, _ = core.initialize(X, Y, config)
        else:
            projection, _ = core.fit(X, Y, config)
    return frobenius_subspace_error(projection.W, W_star)


def run_benchmark(datasets, methods, n: int, trials: int, seed: int, args):
    """Per-trial errors plus a (dataset, method) summary.

    Trials use seeds ``seed + trial_index``. A failing trial is recorded with
    a NaN error instead of aborting the run. Timing appears only in the
    summary, so the per-trial table is reproducible byte for byte.
    """
    trial_rows = []
    summary_rows = []
    for dataset in datasets:
        for method in methods:
            errors = []
            seconds = []
            for trial in range(trials):
                trial_seed = seed + trial
                start = time.perf_counter()
                try:
                    err = _run_trial(dataset, method, n, trial_seed, args)
                except Exception as exc:  # noqa: BLE001 - record and continue
                    print(f"trial failed ({dataset}, {method}, seed {trial_seed}): {exc}",
                          file=sys.stderr)
                    err = float("nan")
                seconds.append(time.perf_counter() - start)
                errors.append(err)
                trial_rows.append((dataset, method, n, trial, trial_seed, err))
            arr = np.asarray(errors)
            with np.errstate(all="ignore"):
                mean_err = float(np.nanmean(arr)) if np.any(np.isfinite(arr)) else float("nan")
                std_err = float(np.nanstd(arr)) if np.any(np.isfinite(arr)) else float("nan")
            summary_rows.append((dataset, method, n, trials, mean_err, std_err,
                                 float(np.mean(seconds))))
    return trial_rows, summary_rows


def _write_rows(path, header, rows):
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f)
        writer.writerow(header)
        for row in rows:
            writer.writerow([repr(v) if isinstance(v, float) else v for v in row])


def cmd_benchmark(args) -> int:
    datasets = args.datasets
    methods = args.methods
    if args.trials < 1:
        raise ValueError("trials must be at least 1")
    trial_rows, summary_rows = run_benchmark(datasets, methods, args.n, args.trials,
                                             args.seed, args)
    _write_rows(args.out_csv, TRIAL_COLUMNS, trial_rows)
    if args.summary_csv:
        _write_rows(args.summary_csv, SUMMARY_COLUMNS, summary_rows)
    print(f"{'dataset':<8} {'method':<6} {'mean':>8} {'std':>8} {'sec/trial':>10}")
    for dataset, method, _n, _t, mean_err, std_err, sec in summary_rows:
        print(f"{dataset:<8} {method:<6} {mean_err:>8.3f} {std_err:>8.3f} {sec:>10.2f}")
    return 0


# ---------------------------------------------------------------------------
# Parser


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _csv_list(valid, what):
    def parse(text: str):
        items = tuple(s.strip() for s in text.split(",") if s.strip())
        for item in items:
            if item not in valid:
                raise argparse.ArgumentTypeError(f"unknown {what} {item!r}; choose from {valid}")
        return items

    return parse


def _add_fit_options(p: argparse.ArgumentParser):
    p.add_argument("--tol", type=float, default=1e-6, help="convergence threshold on the SMI improvement")
    p.add_argument("--max-iters", type=_positive_int, default=100, help="iteration cap")
    p.add_argument("--seed", type=int, default=0, help="seed for all randomized steps")
    p.add_argument("--folds", type=_positive_int, default=5, help="cross-validation folds")
    p.add_argument("--sigma-scales", type=float, nargs="+", default=list(core.lsmi.DEFAULT_SIGMA_SCALES),
                   help="median-distance multipliers for kernel-width candidates")
    p.add_argument("--lambdas", type=float, nargs="+", default=list(core.lsmi.DEFAULT_LAMBDAS),
                   help="ridge candidates")
    p.add_argument("--no-reselect", action="store_true",
                   help="reuse the first iteration's hyperparameters instead of re-selecting")
    p.add_argument("--max-centers", type=_positive_int, default=None,
                   help="cap the number of kernel centers during loop iterations "
                        "(default: all samples)")
    p.add_argument("--init-max-centers", type=_positive_int, default=None,
                   help="center cap for the initialization fit (default: all samples)")
    p.add_argument("--y-kernel", choices=("gaussian", "label-correlation"), default="gaussian")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sca", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen-data", help="generate a synthetic benchmark dataset as CSV")
    p.add_argument("--dataset", choices=FAMILIES, required=True)
    p.add_argument("--n", type=_positive_int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out-x", required=True)
    p.add_argument("--out-y", required=True)
    p.add_argument("--literal-branch", action="store_true",
                   help="data4 only: use the one-sided branch condition x2 <= 1/6 "
                        "instead of the default |x2| <= 1/6")
    p.set_defaults(func=cmd_gen_data)

    p = sub.add_parser("fit", help="fit a projection from CSV inputs and targets")
    p.add_argument("--x", required=True, help="input CSV, one sample per row")
    p.add_argument("--y", required=True, help="target CSV, same row count")
    p.add_argument("--m", type=_positive_int, required=True, help="reduced dimension")
    p.add_argument("--out", required=True, help="output model file (JSON)")
    p.add_argument("--verbose", action="store_true", help="print the per-iteration SMI trace")
    _add_fit_options(p)
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("transform", help="apply a fitted model to a CSV of samples")
    p.add_argument("--model", required=True)
    p.add_argument("--x", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser("benchmark", help="run synthetic recovery benchmarks")
    p.add_argument("--datasets", type=_csv_list(FAMILIES, "dataset"), default=FAMILIES,
                   help="comma-separated subset of datasets")
    p.add_argument("--methods", type=_csv_list(METHODS, "method"), default=METHODS,
                   help="comma-separated subset of methods")
    p.add_argument("--n", type=_positive_int, default=1000)
    p.add_argument("--trials", type=_positive_int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out-csv", required=True, help="per-trial error CSV")
    p.add_argument("--summary-csv", default=None, help="summary CSV (includes timing)")
    p.add_argument("--tol", type=float, default=1e-4,
                   help="per-trial convergence threshold (looser than the library "
                        "default to keep many-trial runs affordable)")
    p.add_argument("--max-iters", type=_positive_int, default=20)
    p.add_argument("--folds", type=_positive_int, default=5)
    p.add_argument("--max-centers", type=_positive_int, default=250,
                   help="kernel-center cap during loop iterations (projections are "
                        "low-dimensional, so a modest cap is accurate and much faster)")
    p.add_argument("--init-max-centers", type=_positive_int, default=None,
                   help="kernel-center cap for the initialization fit (default: all)")
    p.add_argument("--sir-slices", type=_positive_int, default=10)
    p.set_defaults(func=cmd_benchmark)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        print(f"error: {exc}", file=sys.stderr)
        return 1


def entry_point():
    sys.exit(main())


if __name__ == "__main__":
    entry_point()
