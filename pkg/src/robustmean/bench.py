"""Synthetic benchmark harness: seeded trial sweeps over (method, n, p),
quantile-error summaries, and CSV emission.

Per-trial seeds are derived as SeedSequence([master_seed, cell_hash, trial])
where cell_hash is a 64-bit BLAKE2b digest of "family|method|n|p"; results
are therefore reproducible regardless of execution order or thread count.
"""

from __future__ import annotations

import csv
import hashlib
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Dict, List, Optional, Sequence

import numpy as np

from . import baselines, filtering, interval, metrics, model, netmax
from .errors import ConfigurationError, EstimatorError

CSV_FIELDS = ("method", "family", "n", "p", "delta", "epsilon",
              "trial_index", "loss", "failed")


@dataclass(frozen=True)
class MethodSpec:
    """One benchmark method: an identifier plus method-specific settings."""

    name: str
    settings: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.name not in METHOD_NAMES:
            raise ConfigurationError(f"unknown method {self.name!r}")


@dataclass(frozen=True)
class TrialConfig:
    distribution: model.DistributionSpec
    methods: Sequence[MethodSpec]
    n_values: Sequence[int]
    p_values: Sequence[int]
    delta: float
    trials: int = 2000
    master_seed: int = 0

    def __post_init__(self):
        if self.trials < 1:
            raise ConfigurationError("trials must be >= 1")
        if not 0.0 < self.delta < 1.0:
            raise ConfigurationError("delta must lie in (0, 1)")
        if not self.n_values or not self.p_values:
            raise ConfigurationError("n_values and p_values must be nonempty")
        methods = tuple(
            m if isinstance(m, MethodSpec) else MethodSpec(**m)
            for m in self.methods
        )
        object.__setattr__(self, "methods", methods)
        object.__setattr__(self, "n_values", tuple(int(n) for n in self.n_values))
        object.__setattr__(self, "p_values", tuple(int(p) for p in self.p_values))

    def to_json_dict(self) -> dict:
        return {
            "distribution": self.distribution.to_json_dict(),
            "methods": [
                {"name": m.name, "settings": dict(m.settings)} for m in self.methods
            ],
            "n_values": list(self.n_values),
            "p_values": list(self.p_values),
            "delta": self.delta,
            "trials": self.trials,
            "master_seed": self.master_seed,
        }

    @classmethod
    def from_json_dict(cls, doc: dict) -> "TrialConfig":
        return cls(
            distribution=model.DistributionSpec.from_json_dict(doc["distribution"]),
            methods=[
                MethodSpec(m["name"], m.get("settings", {}))
                for m in doc["methods"]
            ],
            n_values=doc["n_values"],
            p_values=doc["p_values"],
            delta=float(doc["delta"]),
            trials=int(doc.get("trials", 2000)),
            master_seed=int(doc.get("master_seed", 0)),
        )


@dataclass(frozen=True)
class TrialRecord:
    method: str
    family: str
    n: int
    p: int
    delta: float
    epsilon: float
    trial_index: int
    loss: float  # +inf marks a failed trial

    @property
    def failed(self) -> bool:
        return math.isinf(self.loss)

    def sort_key(self):
        return (self.method, self.family, self.n, self.p, self.trial_index)


def cell_hash(family: str, method: str, n: int, p: int) -> int:
    digest = hashlib.blake2b(
        f"{family}|{method}|{n}|{p}".encode(), digest_size=8
    ).digest()
    return int.from_bytes(digest, "little")


def trial_seed(master_seed: int, cell: int, trial_index: int) -> int:
    return int(
        np.random.SeedSequence([master_seed, cell, trial_index]).generate_state(1)[0]
    )


def respec(spec: model.DistributionSpec, p: int) -> model.DistributionSpec:
    """Re-dimension an isotropic spec to dimension p."""
    if p == spec.p:
        return spec
    if spec.q_spec is not None:
        raise ConfigurationError(
            "cannot re-dimension a contaminated spec; sweep a single p"
        )
    if spec.family == "gaussian":
        cov = np.asarray(spec.covariance)
        diag = np.diag(cov)
        if not (np.allclose(cov, np.diag(diag)) and np.allclose(diag, diag[0])):
            raise ConfigurationError(
                "p sweeps require an isotropic gaussian covariance"
            )
        return replace(spec, p=p, covariance=diag[0] * np.eye(p))
    return replace(spec, p=p)


def _clean_component(spec: model.DistributionSpec) -> model.DistributionSpec:
    if spec.epsilon == 0:
        return spec
    return replace(spec, epsilon=0.0, q_spec=None)


def _run_method(
    method: MethodSpec,
    samples: model.SampleSet,
    spec: model.DistributionSpec,
    delta: float,
    seed: int,
) -> np.ndarray:
    s = method.settings
    name = method.name
    if name == "mean":
        return baselines.sample_mean(samples)
    if name == "gmom":
        blocks = int(s.get("blocks", filtering.default_steps(delta)))
        return baselines.geometric_median_of_means(
            samples, blocks=min(blocks, samples.n), tol=s.get("tol", 1e-10)
        )
    if name == "coord":
        return baselines.coordinatewise_filter(samples, delta=delta, seed=seed)
    if name == "filter":
        stop_mode = s.get("stop_mode", filtering.STOP_FIXED_STEPS)
        cov_bound = s.get("cov_bound")
        if cov_bound is None and stop_mode != filtering.STOP_FIXED_STEPS:
            moments = model.population_moments(_clean_component(spec))
            setting = "huber" if spec.epsilon > 0 else "heavy_tail"
            k = int(s.get("k", moments.k))
            cov_bound = filtering.cov_bound_hint(
                setting,
                model.MomentProfile(k, moments.trace_sigma, moments.opnorm_sigma),
                n=samples.n,
                p=samples.p,
                delta=delta,
                epsilon=spec.epsilon,
                C=float(s.get("C", 1.0)),
            )
        steps = s.get("steps")
        if steps is None and stop_mode != filtering.STOP_THRESHOLD:
            steps = min(filtering.default_steps(delta), samples.n - 2)
        cfg = filtering.FilterConfig(
            cov_bound=cov_bound or 0.0,
            threshold_factor=float(
                s.get("threshold_factor", filtering.DEFAULT_THRESHOLD_FACTOR)
            ),
            stop_mode=stop_mode,
            steps=steps,
            seed=seed,
        )
        return filtering.filter_multivariate(samples, cfg).estimate
    if name == "oracle":
        radius = s.get("radius")
        if radius is None:
            moments = model.population_moments(_clean_component(spec))
            radius = baselines.RadiusRule(
                k=int(s.get("k", moments.k)),
                trace_sigma=moments.trace_sigma,
                opnorm_sigma=moments.opnorm_sigma,
                n=samples.n,
                delta=delta,
                epsilon=spec.epsilon,
            )
        cfg = baselines.OracleConfig(
            true_mean=np.zeros(samples.p), radius=radius
        )
        return baselines.oracle_truncated_mean(samples, cfg)
    if name == "interval":
        if samples.p != 1:
            raise EstimatorError("interval method is univariate")
        cfg = interval.IntervalConfig(epsilon=spec.epsilon, delta=delta)
        return np.array([interval.interval_estimate(samples.data[:, 0], cfg)])
    if name == "net":
        cfg = netmax.NetConfig(
            epsilon=spec.epsilon,
            delta=delta,
            inner=s.get("inner", "interval1d"),
            sparsity=s.get("sparsity"),
        )
        return netmax.net_estimate(samples, cfg, seed=seed).estimate
    if name == "srm":
        return baselines.srm_bruteforce(samples, epsilon=spec.epsilon)
    raise ConfigurationError(f"unknown method {name!r}")


def run_trial(
    config: TrialConfig, method: MethodSpec, n: int, p: int, trial_index: int
) -> TrialRecord:
    spec = respec(config.distribution, p)
    cell = cell_hash(spec.family, method.name, n, p)
    seed = trial_seed(config.master_seed, cell, trial_index)
    samples = model.sample_dataset(spec, n, seed)
    truth = np.zeros(p)  # synthetic families are centered; truth is the
    # clean-component mean under contamination as well
    try:
        estimate = _run_method(method, samples, spec, config.delta, seed)
        loss = metrics.l2_loss(estimate, truth)
    except EstimatorError:
        loss = math.inf
    return TrialRecord(
        method=method.name,
        family=spec.family,
        n=n,
        p=p,
        delta=config.delta,
        epsilon=spec.epsilon,
        trial_index=trial_index,
        loss=loss,
    )


def run_sweep(config: TrialConfig) -> List[TrialRecord]:
    """Execute every (method, n, p, trial) cell; deterministic given
    master_seed regardless of execution order or pool size."""
    tasks = [
        (method, n, p, t)
        for method in config.methods
        for n in config.n_values
        for p in config.p_values
        for t in range(config.trials)
    ]
    workers = int(os.environ.get("ROBUSTMEAN_THREADS", "1"))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            records = list(
                pool.map(lambda args: run_trial(config, *args), tasks)
            )
    else:
        records = [run_trial(config, *args) for args in tasks]
    records.sort(key=TrialRecord.sort_key)
    return records


def summarize(records: Sequence[TrialRecord], delta: float):
    """Group records by (method, n, p) and report the delta-quantile error of
    successful trials, the mean loss, and the failure rate."""
    if not records:
        raise ValueError("no records to summarize")
    groups: Dict[tuple, List[TrialRecord]] = {}
    for rec in records:
        groups.setdefault((rec.method, rec.n, rec.p), []).append(rec)
    rows = []
    for (method, n, p), recs in sorted(groups.items()):
        losses = [r.loss for r in recs if not r.failed]
        failures = len(recs) - len(losses)
        rows.append(
            {
                "method": method,
                "n": n,
                "p": p,
                "q_delta": metrics.quantile_error(losses, delta)
                if losses
                else math.inf,
                "mean_loss": float(np.mean(losses)) if losses else math.inf,
                "failure_rate": failures / len(recs),
                "trials": len(recs),
            }
        )
    return rows


def emit_csv(records: Sequence[TrialRecord], path) -> None:
    """Write one record per line; failures carry failed=1 and an empty loss."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_FIELDS)
        for rec in records:
            writer.writerow(
                [
                    rec.method,
                    rec.family,
                    rec.n,
                    rec.p,
                    f"{rec.delta:.17g}",
                    f"{rec.epsilon:.17g}",
                    rec.trial_index,
                    "" if rec.failed else f"{rec.loss:.17g}",
                    int(rec.failed),
                ]
            )


def read_csv(path) -> List[TrialRecord]:
    records = []
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        for row in reader:
            failed = row["failed"] == "1"
            records.append(
                TrialRecord(
                    method=row["method"],
                    family=row["family"],
                    n=int(row["n"]),
                    p=int(row["p"]),
                    delta=float(row["delta"]),
                    epsilon=float(row["epsilon"]),
                    trial_index=int(row["trial_index"]),
                    loss=math.inf if failed else float(row["loss"]),
                )
            )
    return records


def emit_summary_csv(rows, path) -> None:
    fields = ("method", "n", "p", "q_delta", "mean_loss", "failure_rate", "trials")
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(fields)
        for row in rows:
            writer.writerow(
                [
                    row["method"],
                    row["n"],
                    row["p"],
                    f"{row['q_delta']:.17g}",
                    f"{row['mean_loss']:.17g}",
                    f"{row['failure_rate']:.17g}",
                    row["trials"],
                ]
            )


METHOD_NAMES = ("mean", "gmom", "coord", "filter", "oracle", "interval",
                "net", "srm")
