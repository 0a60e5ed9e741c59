"""Spectral sample-pruning mean estimator and its univariate form.

One point is removed per round, sampled with probability proportional to its
squared projection on the leading eigenvector of the survivors' sample
covariance, until a stop rule holds.  Sample covariances use the 1/|S|
(population) convention throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .errors import (
    ConfigurationError,
    DegenerateScoresError,
    FilterExhaustedError,
)

DEFAULT_THRESHOLD_FACTOR = 32.0

STOP_THRESHOLD = "threshold"
STOP_FIXED_STEPS = "fixed_steps"
STOP_CAPPED = "capped"


@dataclass(frozen=True)
class FilterConfig:
    """Configuration of a filtering run.

    ``stop_mode`` is one of:
      - ``threshold``: stop once the top eigenvalue drops below
        ``threshold_factor * cov_bound``;
      - ``fixed_steps``: remove exactly ``steps`` points, then stop;
      - ``capped``: threshold rule with a hard cap of ``steps`` removals.
    """

    cov_bound: float = 0.0
    threshold_factor: float = DEFAULT_THRESHOLD_FACTOR
    stop_mode: str = STOP_THRESHOLD
    steps: Optional[int] = None
    seed: int = 0

    def __post_init__(self):
        if self.cov_bound < 0:
            raise ConfigurationError("cov_bound must be >= 0")
        if self.threshold_factor <= 0:
            raise ConfigurationError("threshold_factor must be > 0")
        if self.stop_mode not in (STOP_THRESHOLD, STOP_FIXED_STEPS, STOP_CAPPED):
            raise ConfigurationError(f"unknown stop_mode {self.stop_mode!r}")
        if self.stop_mode in (STOP_FIXED_STEPS, STOP_CAPPED):
            if self.steps is None or self.steps < 0:
                raise ConfigurationError(f"{self.stop_mode} needs steps >= 0")

    def to_json_dict(self) -> dict:
        return {
            "cov_bound": self.cov_bound,
            "threshold_factor": self.threshold_factor,
            "stop_mode": self.stop_mode,
            "steps": self.steps,
            "seed": self.seed,
        }

    @classmethod
    def from_json_dict(cls, doc: dict) -> "FilterConfig":
        return cls(
            cov_bound=float(doc.get("cov_bound", 0.0)),
            threshold_factor=float(
                doc.get("threshold_factor", DEFAULT_THRESHOLD_FACTOR)
            ),
            stop_mode=doc.get("stop_mode", STOP_THRESHOLD),
            steps=doc.get("steps"),
            seed=int(doc.get("seed", 0)),
        )


@dataclass(frozen=True)
class EstimateReport:
    """Estimator output: the estimate plus removal diagnostics."""

    estimate: np.ndarray
    removed_indices: Tuple[int, ...]
    iterations: int
    final_top_eigenvalue: float
    diagnostics: dict = field(default_factory=dict)


def top_eigenpair(
    matrix: np.ndarray, seed: int = 0, rel_tol: float = 1e-10, max_iter: int = 10_000
) -> Tuple[float, np.ndarray]:
    """Leading eigenpair of a symmetric PSD matrix by seeded power iteration.

    Returns (0, e_1) for the zero matrix.  The returned eigenvalue is the
    Rayleigh quotient of the final iterate.
    """
    p = matrix.shape[0]
    if p == 1:
        return float(matrix[0, 0]), np.ones(1)
    scale = float(np.abs(matrix).max())
    if scale == 0.0:
        v = np.zeros(p)
        v[0] = 1.0
        return 0.0, v
    rng = np.random.default_rng(np.random.SeedSequence([seed, 0x9E3779B9]))
    v = rng.standard_normal(p)
    v /= np.linalg.norm(v)
    lam = 0.0
    for _ in range(max_iter):
        w = matrix @ v
        lam = float(v @ w)  # Rayleigh quotient; v is unit
        # Residual-based stop: the eigenpair contract is on ||Av - lam*v||.
        if np.linalg.norm(w - lam * v) <= rel_tol * max(abs(lam), scale * 1e-12):
            break
        norm_w = np.linalg.norm(w)
        if norm_w == 0.0:
            # v is in the null space; restart from a fresh direction.
            v = rng.standard_normal(p)
            v /= np.linalg.norm(v)
            continue
        v = w / norm_w
    return lam, v


def _mean_and_cov(data: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    mean = data.mean(axis=0)
    centered = data - mean
    cov = centered.T @ centered / data.shape[0]
    return mean, cov


def _stop(config: FilterConfig, lam: float, iterations: int) -> bool:
    threshold_hit = lam < config.threshold_factor * config.cov_bound
    if config.stop_mode == STOP_THRESHOLD:
        return threshold_hit
    if config.stop_mode == STOP_FIXED_STEPS:
        return iterations >= config.steps
    return threshold_hit or iterations >= config.steps


def filter_multivariate(samples, config: FilterConfig) -> EstimateReport:
    """Run the iterative spectral filter on an n x p dataset.

    Accepts a ``SampleSet`` or a raw array.  Deterministic given
    ``config.seed``.
    """
    data = np.asarray(getattr(samples, "data", samples), dtype=float)
    if data.ndim == 1:
        data = data[:, None]
    if data.shape[0] < 2:
        raise FilterExhaustedError("need at least 2 points to filter")
    if not np.all(np.isfinite(data)):
        raise ConfigurationError("samples must be finite")

    rng = np.random.default_rng(np.random.SeedSequence(config.seed))
    alive = np.arange(data.shape[0])
    removed: List[int] = []
    while True:
        survivors = data[alive]
        mean, cov = _mean_and_cov(survivors)
        lam, v = top_eigenpair(cov, seed=config.seed)
        if _stop(config, lam, len(removed)):
            return EstimateReport(
                estimate=mean,
                removed_indices=tuple(removed),
                iterations=len(removed),
                final_top_eigenvalue=lam,
            )
        if lam <= 0.0:
            # Zero scatter: no point can be scored, so stop regardless of the
            # unmet stop rule.
            return EstimateReport(
                estimate=mean,
                removed_indices=tuple(removed),
                iterations=len(removed),
                final_top_eigenvalue=max(lam, 0.0),
            )
        scores = np.square((survivors - mean) @ v)
        total = scores.sum()
        if total <= 0.0:
            raise DegenerateScoresError(
                "all scores zero with positive top eigenvalue"
            )
        pick = rng.choice(alive.size, p=scores / total)
        removed.append(int(alive[pick]))
        alive = np.delete(alive, pick)
        if alive.size < 2:
            raise FilterExhaustedError(
                "fewer than 2 survivors before the stop condition held"
            )


def filter_univariate(samples: Sequence[float], config: FilterConfig) -> EstimateReport:
    """Univariate filtering: the direction is the scalar 1 and the top
    eigenvalue is the sample variance (population convention)."""
    values = np.asarray(samples, dtype=float).ravel()
    return filter_multivariate(values[:, None], config)


def default_steps(delta: float) -> int:
    """Benchmark removal budget: ceil(2 * ln(1/delta))."""
    if not 0.0 < delta < 1.0:
        raise ConfigurationError("delta must lie in (0, 1)")
    return math.ceil(2.0 * math.log(1.0 / delta))


def stopping_cap(n: int, n_good: int, delta: float) -> int:
    """High-probability bound on removal rounds:
    ceil(18 * ln(1/delta) + 3 * (n - n_good))."""
    if not 0.0 < delta < 1.0:
        raise ConfigurationError("delta must lie in (0, 1)")
    if n_good > n:
        raise ConfigurationError("n_good cannot exceed n")
    return math.ceil(18.0 * math.log(1.0 / delta) + 3.0 * (n - n_good))


def cov_bound_hint(
    setting: str,
    moments,
    n: int,
    p: int,
    delta: float,
    epsilon: float = 0.0,
    C: float = 1.0,
) -> float:
    """Covariance upper-bound hint used to instantiate the filter.

    ``setting`` is ``heavy_tail`` or ``huber``; the formula is selected by
    ``(setting, moments.k)``:

      - heavy_tail, k=2:  C * opnorm
      - heavy_tail, k=1:  C * opnorm + trace * ln(p/delta) / ln(1/delta)
      - huber,      k=1:  C * opnorm + trace * ln(p/delta) / (n*eps + ln(1/delta))
      - huber,      k=2:  C * opnorm + trace * ln(p/delta) / sqrt(n^2*eps + n*ln(1/delta))
    """
    if not 0.0 < delta < 1.0:
        raise ConfigurationError("delta must lie in (0, 1)")
    if C <= 0:
        raise ConfigurationError("C must be > 0")
    if setting not in ("heavy_tail", "huber"):
        raise ConfigurationError(f"unknown setting {setting!r}")
    if setting == "huber" and not 0.0 <= epsilon < 0.5:
        raise ConfigurationError("epsilon must lie in [0, 0.5)")
    log_pd = math.log(p / delta)
    log_1d = math.log(1.0 / delta)
    base = C * moments.opnorm_sigma
    if setting == "heavy_tail":
        if moments.k == 2:
            return base
        return base + moments.trace_sigma * log_pd / log_1d
    if moments.k == 1:
        return base + moments.trace_sigma * log_pd / (n * epsilon + log_1d)
    return base + moments.trace_sigma * log_pd / math.sqrt(
        n * n * epsilon + n * log_1d
    )
