"""Per-task-type statistical summaries and clamped sampling from them."""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from wfsynth.rng import open_uniform
from wfsynth.stats.distributions import (
    FAMILY_NAMES,
    DistributionSpec,
    dist_cdf,
    dist_quantile,
)
from wfsynth.stats.fitting import UnfittableError, fit_best
from wfsynth.trace import WorkflowTrace

METRICS = ("runtime", "inputSize", "outputSize")

REJECTION_TRIES = 100


class FitWarning(UserWarning):
    """A metric could not be fitted and was left out of a summary."""


@dataclass(frozen=True)
class MetricSummary:
    min: float
    max: float
    distribution: DistributionSpec

    def __post_init__(self):
        if not self.min <= self.max:
            raise ValueError(f"summary min {self.min} exceeds max {self.max}")

    def to_dict(self) -> dict:
        return {"min": self.min, "max": self.max, "distribution": self.distribution.to_dict()}

    @classmethod
    def from_dict(cls, d: Mapping) -> "MetricSummary":
        return cls(float(d["min"]), float(d["max"]), DistributionSpec.from_dict(d["distribution"]))


@dataclass(frozen=True)
class TaskTypeSummary:
    task_type: str
    runtime: MetricSummary | None = None
    input_size: MetricSummary | None = None
    output_size: MetricSummary | None = None

    def metric(self, key: str) -> MetricSummary | None:
        return {"runtime": self.runtime, "inputSize": self.input_size,
                "outputSize": self.output_size}[key]

    def to_dict(self) -> dict:
        return {k: self.metric(k).to_dict() for k in METRICS if self.metric(k) is not None}

    @classmethod
    def from_dict(cls, task_type: str, d: Mapping) -> "TaskTypeSummary":
        def get(key):
            return MetricSummary.from_dict(d[key]) if key in d else None
        return cls(task_type, get("runtime"), get("inputSize"), get("outputSize"))


def sample_clamped(summary: MetricSummary, rng: np.random.Generator) -> float:
    """One draw from ``summary.distribution`` restricted to ``[min, max]``.

    Up to 100 inverse-transform draws are tried (all 100 uniforms are taken
    from ``rng`` in one call); if none lands in range, the quantile of a
    uniform on ``[cdf(min), cdf(max)]`` is returned instead.
    """
    lo, hi = summary.min, summary.max
    if lo == hi:
        return lo
    spec = summary.distribution
    p_lo, p_hi = float(dist_cdf(spec, lo)), float(dist_cdf(spec, hi))
    u = open_uniform(rng, REJECTION_TRIES)
    # quantile is monotone: Q(u) lands in [lo, hi] iff u does in [p_lo, p_hi],
    # so only the first accepted uniform needs inverting
    hits = np.flatnonzero((u >= p_lo) & (u <= p_hi))
    if hits.size:
        x = float(dist_quantile(spec, u[hits[0]]))
        return min(max(x, lo), hi)

    v = float(open_uniform(rng))
    p = p_lo + v * (p_hi - p_lo)
    if 0.0 < p < 1.0 and p_hi > p_lo:
        x = float(dist_quantile(spec, p))
    else:
        # range sits where the CDF is flat at 0 or 1
        x = lo + v * (hi - lo)
    return min(max(x, lo), hi)


def _observations(traces: Iterable[WorkflowTrace]) -> dict[str, dict[str, list[float]]]:
    pools: dict[str, dict[str, list[float]]] = {}
    for trace in traces:
        for t in trace.tasks:
            pool = pools.setdefault(t.category, {k: [] for k in METRICS})
            pool["runtime"].append(float(t.runtime_seconds))
            pool["inputSize"].append(float(t.input_bytes))
            pool["outputSize"].append(float(t.output_bytes))
    return pools


def summarize_traces(traces: Sequence[WorkflowTrace],
                     families: Sequence[str] = FAMILY_NAMES) -> dict[str, TaskTypeSummary]:
    """Pool task metrics per task type across ``traces`` and fit each series.

    Per task, input/output size is the byte total over its input/output files.
    A metric with fewer than two observations, or no variance, is omitted and
    a :class:`FitWarning` is issued.
    """
    out = {}
    for task_type, pool in sorted(_observations(traces).items()):
        fitted = {}
        for key in METRICS:
            values = pool[key]
            try:
                res = fit_best(values, families)
            except UnfittableError as exc:
                warnings.warn(FitWarning(f"{task_type}.{key}: {exc}; metric omitted"), stacklevel=2)
                continue
            fitted[key] = MetricSummary(res.sample_min, res.sample_max, res.spec)
        out[task_type] = TaskTypeSummary(task_type, fitted.get("runtime"),
                                         fitted.get("inputSize"), fitted.get("outputSize"))
    return out


def summaries_to_dict(summaries: Mapping[str, TaskTypeSummary]) -> dict:
    return {name: s.to_dict() for name, s in summaries.items()}


def dumps_summaries(summaries: Mapping[str, TaskTypeSummary]) -> str:
    return json.dumps(summaries_to_dict(summaries), sort_keys=True, indent=4, allow_nan=False) + "\n"


def loads_summaries(text: str) -> dict[str, TaskTypeSummary]:
    """Read the summary JSON shape (``{taskType: {runtime: {min, max, distribution}}}``)."""
    doc = json.loads(text)
    if not isinstance(doc, dict):
        raise ValueError("summary document must be an object keyed by task type")
    return {name: TaskTypeSummary.from_dict(name, body) for name, body in doc.items()}


def load_summaries(path) -> dict[str, TaskTypeSummary]:
    with open(path, encoding="utf-8") as fh:
        return loads_summaries(fh.read())


def dump_summaries(summaries: Mapping[str, TaskTypeSummary], path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(dumps_summaries(summaries))


