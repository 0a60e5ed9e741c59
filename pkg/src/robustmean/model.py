"""Synthetic data model: sampling distributions, contamination, and moments.

All sampling is driven by ``numpy.random.Generator`` seeded through
``numpy.random.SeedSequence``, so identical ``(spec, n, seed)`` triples
produce identical datasets on any platform.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import ConfigurationError

_PSD_TOL = 1e-10

FAMILIES = ("gaussian", "lognormal", "pareto")

# Per-coordinate variance of exp(N(0,1)): (e - 1) * e.
LOGNORMAL_VAR = (math.e - 1.0) * math.e
# Mean of exp(N(0,1)); subtracted so the population mean is 0.
LOGNORMAL_SHIFT = math.exp(0.5)


@dataclass(frozen=True)
class SampleSet:
    """An n x p table of finite real observations, one row per sample."""

    data: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.data, dtype=float)
        if arr.ndim == 1:
            arr = arr[:, None]
        if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
            raise ConfigurationError("sample data must be a non-empty n x p matrix")
        if not np.all(np.isfinite(arr)):
            raise ConfigurationError("sample data must be finite")
        object.__setattr__(self, "data", arr)

    @property
    def n(self) -> int:
        return self.data.shape[0]

    @property
    def p(self) -> int:
        return self.data.shape[1]


@dataclass(frozen=True)
class ContaminationSpec:
    """How contaminated rows are drawn.

    ``point_mass`` puts all mass at ``location``; ``shifted_gaussian`` draws
    N(shift, scale^2 I).
    """

    kind: str
    location: Optional[np.ndarray] = None
    shift: Optional[np.ndarray] = None
    scale: float = 1.0

    def __post_init__(self):
        if self.kind not in ("point_mass", "shifted_gaussian"):
            raise ConfigurationError(f"unknown contamination kind {self.kind!r}")
        if self.kind == "point_mass":
            if self.location is None:
                raise ConfigurationError("point_mass contamination needs a location")
            object.__setattr__(
                self, "location", np.asarray(self.location, dtype=float).ravel()
            )
        else:
            if self.shift is None:
                raise ConfigurationError("shifted_gaussian contamination needs a shift")
            if self.scale < 0:
                raise ConfigurationError("contamination scale must be >= 0")
            object.__setattr__(
                self, "shift", np.asarray(self.shift, dtype=float).ravel()
            )

    def center(self) -> np.ndarray:
        return self.location if self.kind == "point_mass" else self.shift

    def draw(self, rng: np.random.Generator, count: int, p: int) -> np.ndarray:
        if self.kind == "point_mass":
            return np.tile(self.location, (count, 1))
        return self.shift + self.scale * rng.standard_normal((count, p))


@dataclass(frozen=True)
class DistributionSpec:
    """Declarative description of a base distribution plus optional mixing.

    The base law always has population mean zero: gaussian rows are
    N(0, covariance); lognormal coordinates are i.i.d. exp(N(0,1)) shifted by
    -e^{1/2}; pareto coordinates are i.i.d. standard Pareto(tail_beta) shifted
    by -tail_beta/(tail_beta - 1). With contamination, each row is
    independently replaced by a contaminated draw with probability epsilon.
    """

    family: str
    p: int
    covariance: Optional[np.ndarray] = None
    tail_beta: Optional[float] = None
    epsilon: float = 0.0
    q_spec: Optional[ContaminationSpec] = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ConfigurationError(f"unknown family {self.family!r}")
        if self.p < 1:
            raise ConfigurationError("dimension p must be >= 1")
        if self.family == "gaussian":
            if self.covariance is None:
                raise ConfigurationError("gaussian spec needs a covariance matrix")
            cov = np.asarray(self.covariance, dtype=float)
            if cov.shape != (self.p, self.p):
                raise ConfigurationError("covariance must be p x p")
            if not np.allclose(cov, cov.T, atol=_PSD_TOL):
                raise ConfigurationError("covariance must be symmetric")
            eigvals = np.linalg.eigvalsh(0.5 * (cov + cov.T))
            if eigvals.min() < -_PSD_TOL:
                raise ConfigurationError("covariance must be PSD")
            object.__setattr__(self, "covariance", 0.5 * (cov + cov.T))
        elif self.family == "pareto":
            if self.tail_beta is None or self.tail_beta <= 1.0:
                raise ConfigurationError(
                    "pareto tail_beta must be > 1 so the mean exists"
                )
        if not (0.0 <= self.epsilon < 0.5):
            raise ConfigurationError("contamination epsilon must lie in [0, 0.5)")
        if self.epsilon > 0 and self.q_spec is None:
            raise ConfigurationError("epsilon > 0 requires a contamination spec")
        if self.q_spec is not None and self.q_spec.center().shape != (self.p,):
            raise ConfigurationError("contamination center dimension must equal p")

    # -- JSON interface (schema: schemas/distribution_spec.schema.json) ------

    def to_json_dict(self) -> dict:
        doc: dict = {"family": self.family, "p": self.p}
        if self.family == "gaussian":
            doc["covariance"] = np.asarray(self.covariance).tolist()
        if self.family == "pareto":
            doc["tail_beta"] = self.tail_beta
        if self.q_spec is not None:
            q: dict = {"kind": self.q_spec.kind}
            if self.q_spec.kind == "point_mass":
                q["location"] = self.q_spec.location.tolist()
            else:
                q["shift"] = self.q_spec.shift.tolist()
                q["scale"] = self.q_spec.scale
            doc["contamination"] = {"epsilon": self.epsilon, "q_spec": q}
        return doc

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2)

    @classmethod
    def from_json_dict(cls, doc: dict) -> "DistributionSpec":
        epsilon = 0.0
        q_spec = None
        if "contamination" in doc and doc["contamination"] is not None:
            cont = doc["contamination"]
            epsilon = float(cont["epsilon"])
            q = cont["q_spec"]
            q_spec = ContaminationSpec(
                kind=q["kind"],
                location=q.get("location"),
                shift=q.get("shift"),
                scale=float(q.get("scale", 1.0)),
            )
        return cls(
            family=doc["family"],
            p=int(doc["p"]),
            covariance=doc.get("covariance"),
            tail_beta=doc.get("tail_beta"),
            epsilon=epsilon,
            q_spec=q_spec,
        )

    @classmethod
    def from_json(cls, text: str) -> "DistributionSpec":
        return cls.from_json_dict(json.loads(text))


@dataclass(frozen=True)
class MomentProfile:
    """Moment summary of a clean distribution: 2k bounded moments plus
    trace and operator norm of its covariance."""

    k: int
    trace_sigma: float
    opnorm_sigma: float

    def __post_init__(self):
        if self.k not in (1, 2):
            raise ConfigurationError("k must be 1 or 2")
        if self.trace_sigma < 0 or self.opnorm_sigma < 0:
            raise ConfigurationError("moment summaries must be >= 0")
        if self.opnorm_sigma > self.trace_sigma + 1e-12:
            raise ConfigurationError("opnorm_sigma cannot exceed trace_sigma")

    @property
    def effective_rank(self) -> float:
        if self.opnorm_sigma == 0.0:
            return 1.0
        return self.trace_sigma / self.opnorm_sigma


def _draw_clean(spec: DistributionSpec, count: int, rng: np.random.Generator):
    if count == 0:
        return np.empty((0, spec.p))
    if spec.family == "gaussian":
        return rng.multivariate_normal(
            np.zeros(spec.p), spec.covariance, size=count, method="svd"
        )
    if spec.family == "lognormal":
        return np.exp(rng.standard_normal((count, spec.p))) - LOGNORMAL_SHIFT
    beta = spec.tail_beta
    # numpy's pareto is the Lomax form; +1 gives standard Pareto on [1, inf).
    return (rng.pareto(beta, size=(count, spec.p)) + 1.0) - beta / (beta - 1.0)


def sample_dataset(spec: DistributionSpec, n: int, seed: int) -> SampleSet:
    """Draw n i.i.d. rows from ``spec``, deterministic given ``seed``.

    With contamination, each row is independently replaced by a contaminated
    draw with probability ``spec.epsilon`` (a true mixture, not a fixed
    outlier count).
    """
    if n < 1:
        raise ConfigurationError("n must be >= 1")
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    data = _draw_clean(spec, n, rng)
    if spec.epsilon > 0:
        mask = rng.random(n) < spec.epsilon
        count = int(mask.sum())
        if count:
            data[mask] = spec.q_spec.draw(rng, count, spec.p)
    return SampleSet(data)


def population_moments(spec: DistributionSpec) -> MomentProfile:
    """Analytic moment summary of the clean component of ``spec``."""
    if spec.epsilon > 0:
        raise ConfigurationError("moments describe the clean component only")
    if spec.family == "gaussian":
        eigvals = np.linalg.eigvalsh(spec.covariance)
        return MomentProfile(
            k=2,
            trace_sigma=float(np.trace(spec.covariance)),
            opnorm_sigma=float(max(eigvals.max(), 0.0)),
        )
    if spec.family == "lognormal":
        return MomentProfile(
            k=2, trace_sigma=spec.p * LOGNORMAL_VAR, opnorm_sigma=LOGNORMAL_VAR
        )
    beta = spec.tail_beta
    if beta <= 2.0:
        raise ConfigurationError("pareto with tail_beta <= 2 has infinite variance")
    var = beta / ((beta - 1.0) ** 2 * (beta - 2.0))
    k = 2 if beta > 4.0 else 1
    return MomentProfile(k=k, trace_sigma=spec.p * var, opnorm_sigma=var)
