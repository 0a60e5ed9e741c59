"""Direction covers of the unit sphere and minimax-center aggregation.

A half-cover is a finite set of unit vectors within Euclidean distance 1/2
of every unit vector (optionally restricted to 2s-sparse unit vectors).  The
multivariate estimator runs a robust 1D estimator along every cover
direction and returns the point whose projections are uniformly closest to
those per-direction estimates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import linprog

from .errors import ConfigurationError, EstimatorError
from .filtering import FilterConfig, STOP_FIXED_STEPS, filter_univariate
from .interval import IntervalConfig, interval_estimate

COVER_RADIUS = 0.5
DENSE_P_CAP = 12
SPARSE_BUDGET = 20.0  # cap on s * ln(6 e p / s) so inner confidences stay sane
CONSECUTIVE_COVERED = 100_000
SUPPORT_ENUM_CAP = 10_000


@dataclass(frozen=True)
class CoverSet:
    """Unit directions forming a half-cover, optionally 2s-sparse."""

    directions: np.ndarray
    covering_radius: float = COVER_RADIUS
    sparsity: Optional[int] = None  # max nonzeros per direction (2s)

    def __post_init__(self):
        arr = np.atleast_2d(np.asarray(self.directions, dtype=float))
        norms = np.linalg.norm(arr, axis=1)
        if arr.shape[0] == 0:
            raise ConfigurationError("cover must contain at least one direction")
        if np.any(np.abs(norms - 1.0) > 1e-12):
            raise ConfigurationError("cover directions must be unit vectors")
        if self.sparsity is not None:
            nnz = np.count_nonzero(arr, axis=1)
            if np.any(nnz > self.sparsity):
                raise ConfigurationError(
                    f"cover directions must have <= {self.sparsity} nonzeros"
                )
        object.__setattr__(self, "directions", arr)

    @property
    def size(self) -> int:
        return self.directions.shape[0]

    @property
    def p(self) -> int:
        return self.directions.shape[1]


@dataclass(frozen=True)
class NetConfig:
    """Settings for the cover-based multivariate estimator.

    ``inner`` picks the per-direction 1D estimator.  The per-direction
    confidence is delta / 5^p (dense) or delta / (6 e p / s)^s (sparse),
    handled in log-space.
    """

    epsilon: float
    delta: float
    inner: str = "interval1d"
    sparsity: Optional[int] = None  # s, the sparsity of the mean

    def __post_init__(self):
        if not 0.0 <= self.epsilon < 0.5:
            raise ConfigurationError("epsilon must lie in [0, 0.5)")
        if not 0.0 < self.delta < 1.0:
            raise ConfigurationError("delta must lie in (0, 1)")
        if self.inner not in ("interval1d", "filter1d"):
            raise ConfigurationError(f"unknown inner estimator {self.inner!r}")
        if self.sparsity is not None and self.sparsity < 1:
            raise ConfigurationError("sparsity s must be >= 1")

    def log_inv_delta_inner(self, p: int) -> float:
        """ln(1/delta') for the per-direction union bound."""
        base = math.log(1.0 / self.delta)
        if self.sparsity is None:
            if p > DENSE_P_CAP:
                raise ConfigurationError(
                    f"dense covers are limited to p <= {DENSE_P_CAP}"
                )
            return base + p * math.log(5.0)
        s = self.sparsity
        penalty = s * math.log(6.0 * math.e * p / s)
        if penalty > SPARSE_BUDGET:
            raise ConfigurationError(
                "s * log(6 e p / s) too large for a usable inner confidence"
            )
        return base + penalty


def _random_unit(rng: np.random.Generator, p: int, support_size: Optional[int]):
    if support_size is None or support_size >= p:
        v = rng.standard_normal(p)
    else:
        v = np.zeros(p)
        support = rng.choice(p, size=support_size, replace=False)
        v[support] = rng.standard_normal(support_size)
    norm = np.linalg.norm(v)
    while norm == 0.0:
        v = rng.standard_normal(p)
        norm = np.linalg.norm(v)
    return v / norm


def build_half_cover(
    p: int, sparsity: Optional[int] = None, seed: int = 0
) -> CoverSet:
    """Greedy randomized half-cover construction.

    Starts from the signed coordinate axes, then adds random unit probes
    (restricted to random 2s-supports when ``sparsity`` = s is given) whose
    distance to the current cover exceeds 1/2, until 10^5 consecutive probes
    are all covered.
    """
    if p < 1:
        raise ConfigurationError("p must be >= 1")
    support_size = None
    if sparsity is not None:
        if sparsity > p / 2:
            raise ValueError("sparsity s must satisfy s <= p/2")
        support_size = 2 * sparsity
    eye = np.eye(p)
    points = [e for pair in zip(eye, -eye) for e in pair]
    if p == 1:
        # {+1, -1} covers S^0 with radius 0.
        return CoverSet(np.array(points), sparsity=support_size)

    rng = np.random.default_rng(np.random.SeedSequence([seed, p, support_size or 0]))
    cover = np.array(points)
    covered_streak = 0
    batch = 2048
    while covered_streak < CONSECUTIVE_COVERED:
        probes = np.stack(
            [_random_unit(rng, p, support_size) for _ in range(batch)]
        )
        # squared distances probe x cover
        d2 = (
            np.sum(probes**2, axis=1)[:, None]
            - 2.0 * probes @ cover.T
            + np.sum(cover**2, axis=1)[None, :]
        )
        mindist = np.sqrt(np.maximum(d2.min(axis=1), 0.0))
        uncovered = np.flatnonzero(mindist > COVER_RADIUS)
        if uncovered.size == 0:
            covered_streak += batch
            continue
        first = int(uncovered[0])
        covered_streak = 0  # probes before `first` were covered but a miss resets
        cover = np.vstack([cover, probes[first]])
    return CoverSet(cover, sparsity=support_size)


def certify_cover(
    cover: CoverSet, probes: int = 10_000, seed: int = 123, slack: float = 1e-9
) -> float:
    """Empirical coverage check: max over random unit probes of the distance
    to the nearest cover point.  Raises if it exceeds the radius + slack."""
    rng = np.random.default_rng(np.random.SeedSequence([seed, cover.p]))
    worst = 0.0
    dirs = cover.directions
    for _ in range(probes // 2048 + 1):
        qs = np.stack(
            [_random_unit(rng, cover.p, cover.sparsity) for _ in range(2048)]
        )
        d2 = (
            np.sum(qs**2, axis=1)[:, None]
            - 2.0 * qs @ dirs.T
            + np.sum(dirs**2, axis=1)[None, :]
        )
        worst = max(worst, float(np.sqrt(np.maximum(d2.min(axis=1), 0.0)).max()))
    if worst > cover.covering_radius + slack:
        raise EstimatorError(
            f"cover certification failed: worst probe distance {worst:.6f}"
        )
    return worst


def cover_to_csv(cover: CoverSet, path) -> None:
    np.savetxt(path, cover.directions, delimiter=",", fmt="%.17g")


def cover_from_csv(path, sparsity: Optional[int] = None) -> CoverSet:
    arr = np.loadtxt(path, delimiter=",", ndmin=2)
    return CoverSet(arr, sparsity=sparsity)


def _minimax_lp(directions: np.ndarray, targets: np.ndarray):
    """Minimize t subject to |u_j . theta - m_j| <= t via linear programming."""
    count, p = directions.shape
    # variables: [theta_1..theta_p, t]
    a_ub = np.zeros((2 * count, p + 1))
    a_ub[:count, :p] = directions
    a_ub[count:, :p] = -directions
    a_ub[:, p] = -1.0
    b_ub = np.concatenate([targets, -targets])
    c = np.zeros(p + 1)
    c[p] = 1.0
    bounds = [(None, None)] * p + [(0, None)]
    res = linprog(c, A_ub=a_ub, b_ub=b_ub, bounds=bounds, method="highs")
    if not res.success:
        raise EstimatorError(f"minimax LP failed: {res.message}")
    return res.x[:p], float(res.x[p])


def minimax_objective(
    directions: np.ndarray, targets: np.ndarray, theta: np.ndarray
) -> float:
    return float(np.abs(directions @ theta - targets).max())


def minimax_center(
    directions,
    targets: Sequence[float],
    constraint: Optional[int] = None,
    tol: float = 1e-8,
):
    """Point minimizing the max absolute gap between its projections and the
    per-direction targets, optionally over s-sparse points.

    Returns ``(theta, diagnostics)``; ``diagnostics['objective']`` is the
    achieved sup-gap.  The sparse path enumerates supports exhaustively when
    C(p, s) <= 10^4, otherwise hard-thresholds the dense solution and
    re-solves on that support (flagged ``heuristic``).
    """
    dirs = directions.directions if isinstance(directions, CoverSet) else None
    if dirs is None:
        dirs = np.atleast_2d(np.asarray(directions, dtype=float))
    m = np.asarray(targets, dtype=float).ravel()
    if dirs.shape[0] == 0:
        raise ValueError("empty cover")
    if m.size != dirs.shape[0]:
        raise ValueError("one target per direction required")
    if tol <= 0:
        raise ValueError("tol must be > 0")
    p = dirs.shape[1]

    if constraint is None or constraint >= p:
        theta, obj = _minimax_lp(dirs, m)
        return theta, {"objective": minimax_objective(dirs, m, theta), "mode": "dense"}

    s = constraint

    def solve_support(support):
        cols = np.asarray(support)
        overlap = np.flatnonzero(np.any(dirs[:, cols] != 0.0, axis=1))
        if overlap.size == 0:
            theta_s = np.zeros(len(cols))
        else:
            theta_s, _ = _minimax_lp(dirs[np.ix_(overlap, cols)], m[overlap])
        full = np.zeros(p)
        full[cols] = theta_s
        return full, minimax_objective(dirs, m, full)

    if math.comb(p, s) <= SUPPORT_ENUM_CAP:
        best_theta, best_obj = None, math.inf
        for support in combinations(range(p), s):
            theta, obj = solve_support(support)
            if obj < best_obj - 1e-15:
                best_theta, best_obj = theta, obj
        return best_theta, {"objective": best_obj, "mode": "exhaustive"}

    dense_theta, _ = _minimax_lp(dirs, m)
    support = tuple(np.argsort(-np.abs(dense_theta))[:s])
    theta, obj = solve_support(sorted(support))
    return theta, {"objective": obj, "mode": "heuristic"}


def net_estimate(samples, config: NetConfig, seed: int = 0):
    """Cover-based multivariate estimate: robust 1D estimation along every
    cover direction followed by minimax-center aggregation.

    Returns an ``EstimateReport`` whose diagnostics carry the minimax
    objective, cover size, and inner-estimator settings.  Per-direction
    failures propagate; there is no partial aggregation.
    """
    from .filtering import EstimateReport  # local to avoid cycle at import

    data = np.asarray(getattr(samples, "data", samples), dtype=float)
    if data.ndim == 1:
        data = data[:, None]
    p = data.shape[1]
    lid = config.log_inv_delta_inner(p)
    cover = build_half_cover(p, sparsity=config.sparsity, seed=seed)

    targets = np.empty(cover.size)
    if config.inner == "interval1d":
        inner_cfg = IntervalConfig(epsilon=config.epsilon, log_inv_delta=lid)
        for j, u in enumerate(cover.directions):
            targets[j] = interval_estimate(data @ u, inner_cfg)
    else:
        steps = math.ceil(2.0 * lid)
        for j, u in enumerate(cover.directions):
            cfg = FilterConfig(
                stop_mode=STOP_FIXED_STEPS,
                steps=min(steps, data.shape[0] - 2),
                seed=int(
                    np.random.SeedSequence([seed, 1 + j]).generate_state(1)[0]
                ),
            )
            targets[j] = float(filter_univariate(data @ u, cfg).estimate[0])

    scale = max(1.0, float(np.abs(targets).max()))
    theta, diag = minimax_center(
        cover, targets, constraint=config.sparsity, tol=1e-8 * scale
    )
    diag.update(
        cover_size=cover.size, inner=config.inner, log_inv_delta_inner=lid
    )
    return EstimateReport(
        estimate=theta,
        removed_indices=(),
        iterations=0,
        final_top_eigenvalue=0.0,
        diagnostics=diag,
    )
