"""Command-line interface.

Subcommands::

    robustmean bench run --config sweep.json --out records.csv
    robustmean bench summarize --in records.csv --delta 0.05 [--out summary.csv]
    robustmean estimate --method filter --in data.csv [flags]
    robustmean cover build --p 3 [--sparsity 1] --out cover.csv

Exit codes: 0 success, 2 configuration error, 3 estimator failure.
ROBUSTMEAN_THREADS caps the benchmark worker pool.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import baselines, bench, filtering, interval, metrics, model, netmax
from .errors import ConfigurationError, EstimatorError

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_ESTIMATOR = 3


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="robustmean", description="Robust mean estimation toolkit"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_bench = sub.add_parser("bench", help="benchmark sweeps")
    bench_sub = p_bench.add_subparsers(dest="bench_command", required=True)

    p_run = bench_sub.add_parser("run", help="execute a sweep from a JSON config")
    p_run.add_argument("--config", required=True)
    p_run.add_argument("--out", required=True)

    p_sum = bench_sub.add_parser("summarize", help="quantile-error summary")
    p_sum.add_argument("--in", dest="infile", required=True)
    p_sum.add_argument("--delta", type=float, required=True)
    p_sum.add_argument("--out", default=None, help="summary CSV (default stdout)")

    p_est = sub.add_parser("estimate", help="estimate the mean of a CSV dataset")
    p_est.add_argument("--method", required=True, choices=bench.METHOD_NAMES)
    p_est.add_argument("--in", dest="infile", required=True,
                       help="CSV with one observation per row")
    p_est.add_argument("--epsilon", type=float, default=0.0)
    p_est.add_argument("--delta", type=float, default=0.05)
    p_est.add_argument("--seed", type=int, default=0)
    p_est.add_argument("--cov-bound", type=float, default=None)
    p_est.add_argument("--threshold-factor", type=float,
                       default=filtering.DEFAULT_THRESHOLD_FACTOR)
    p_est.add_argument("--steps", type=int, default=None)
    p_est.add_argument("--stop-mode", default=None,
                       choices=(filtering.STOP_THRESHOLD,
                                filtering.STOP_FIXED_STEPS,
                                filtering.STOP_CAPPED))
    p_est.add_argument("--blocks", type=int, default=None, help="gmom blocks")
    p_est.add_argument("--inner", default="interval1d",
                       choices=("interval1d", "filter1d"))
    p_est.add_argument("--sparsity", type=int, default=None)
    p_est.add_argument("--radius", type=float, default=None,
                       help="oracle truncation radius")
    p_est.add_argument("--true-mean", default=None,
                       help="comma-separated oracle center (default zeros)")

    p_cover = sub.add_parser("cover", help="sphere cover utilities")
    cover_sub = p_cover.add_subparsers(dest="cover_command", required=True)
    p_build = cover_sub.add_parser("build", help="build and certify a half-cover")
    p_build.add_argument("--p", type=int, required=True)
    p_build.add_argument("--sparsity", type=int, default=None)
    p_build.add_argument("--seed", type=int, default=0)
    p_build.add_argument("--out", required=True)
    return parser


def _load_data(path) -> np.ndarray:
    data = np.loadtxt(path, delimiter=",", ndmin=2)
    if data.size == 0:
        raise ConfigurationError(f"no data in {path}")
    return data


def _cmd_estimate(args) -> int:
    data = _load_data(args.infile)
    n, p = data.shape
    method = args.method
    if method == "mean":
        estimate = baselines.sample_mean(data)
    elif method == "gmom":
        blocks = args.blocks or filtering.default_steps(args.delta)
        estimate = baselines.geometric_median_of_means(data, blocks=min(blocks, n))
    elif method == "coord":
        estimate = baselines.coordinatewise_filter(
            data, delta=args.delta, seed=args.seed
        )
    elif method == "filter":
        stop_mode = args.stop_mode
        if stop_mode is None:
            stop_mode = (
                filtering.STOP_THRESHOLD
                if args.cov_bound is not None
                else filtering.STOP_FIXED_STEPS
            )
        steps = args.steps
        if steps is None and stop_mode != filtering.STOP_THRESHOLD:
            steps = min(filtering.default_steps(args.delta), n - 2)
        cfg = filtering.FilterConfig(
            cov_bound=args.cov_bound or 0.0,
            threshold_factor=args.threshold_factor,
            stop_mode=stop_mode,
            steps=steps,
            seed=args.seed,
        )
        estimate = filtering.filter_multivariate(data, cfg).estimate
    elif method == "interval":
        if p != 1:
            raise ConfigurationError("interval method expects a one-column CSV")
        cfg = interval.IntervalConfig(epsilon=args.epsilon, delta=args.delta)
        estimate = np.array([interval.interval_estimate(data[:, 0], cfg)])
    elif method == "net":
        cfg = netmax.NetConfig(
            epsilon=args.epsilon,
            delta=args.delta,
            inner=args.inner,
            sparsity=args.sparsity,
        )
        estimate = netmax.net_estimate(data, cfg, seed=args.seed).estimate
    elif method == "oracle":
        if args.radius is None:
            raise ConfigurationError("oracle method requires --radius")
        center = (
            np.array([float(x) for x in args.true_mean.split(",")])
            if args.true_mean
            else np.zeros(p)
        )
        cfg = baselines.OracleConfig(true_mean=center, radius=args.radius)
        estimate = baselines.oracle_truncated_mean(data, cfg)
    elif method == "srm":
        estimate = baselines.srm_bruteforce(data, epsilon=args.epsilon)
    else:  # pragma: no cover - argparse restricts choices
        raise ConfigurationError(f"unknown method {method!r}")
    print(",".join(f"{x:.17g}" for x in np.atleast_1d(estimate)))
    return EXIT_OK


def _cmd_bench_run(args) -> int:
    with open(args.config) as fh:
        config = bench.TrialConfig.from_json_dict(json.load(fh))
    records = bench.run_sweep(config)
    bench.emit_csv(records, args.out)
    return EXIT_OK


def _cmd_bench_summarize(args) -> int:
    records = bench.read_csv(args.infile)
    rows = bench.summarize(records, args.delta)
    if args.out:
        bench.emit_summary_csv(rows, args.out)
    else:
        print("method,n,p,q_delta,mean_loss,failure_rate,trials")
        for row in rows:
            print(
                f"{row['method']},{row['n']},{row['p']},{row['q_delta']:.6g},"
                f"{row['mean_loss']:.6g},{row['failure_rate']:.6g},{row['trials']}"
            )
    return EXIT_OK


def _cmd_cover_build(args) -> int:
    cover = netmax.build_half_cover(args.p, sparsity=args.sparsity, seed=args.seed)
    netmax.certify_cover(cover)
    netmax.cover_to_csv(cover, args.out)
    print(f"cover of size {cover.size} written to {args.out}")
    return EXIT_OK


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "estimate":
            return _cmd_estimate(args)
        if args.command == "bench" and args.bench_command == "run":
            return _cmd_bench_run(args)
        if args.command == "bench" and args.bench_command == "summarize":
            return _cmd_bench_summarize(args)
        if args.command == "cover" and args.cover_command == "build":
            return _cmd_cover_build(args)
    except (ConfigurationError, ValueError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except EstimatorError as exc:
        print(f"estimator failure: {exc}", file=sys.stderr)
        return EXIT_ESTIMATOR
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    parser.error("unhandled command")  # pragma: no cover


if __name__ == "__main__":
    sys.exit(main())
