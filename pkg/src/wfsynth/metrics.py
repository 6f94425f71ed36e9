"""ECDFs over simulated timelines and quantile-domain RMSE between runs."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np

from wfsynth.sim import SimulationResult
from wfsynth.stats.ecdf import Ecdf

DEFAULT_GRID = 1000


class TimelineField(str, Enum):
    SUBMIT = "submit"
    COMPLETION = "completion"


@dataclass(frozen=True)
class TimelineEcdf:
    field: TimelineField
    ecdf: Ecdf
    makespan_sec: float
    normalized: bool

    def to_csv(self) -> str:
        lines = ["value,probability"]
        lines += [f"{v!r},{p!r}" for v, p in self.ecdf.points()]
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class ComparisonReport:
    submit_rmse: float
    completion_rmse: float
    normalized_submit_rmse: float
    normalized_completion_rmse: float
    task_counts: tuple[int, int]

    def to_dict(self) -> dict:
        return {
            "submitRmse": self.submit_rmse,
            "completionRmse": self.completion_rmse,
            "normalizedSubmitRmse": self.normalized_submit_rmse,
            "normalizedCompletionRmse": self.normalized_completion_rmse,
            "taskCounts": list(self.task_counts),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"


def timeline_ecdf(result: SimulationResult, field: TimelineField | str,
                  normalized: bool = False) -> TimelineEcdf:
    """ECDF of submit or completion instants, optionally divided by the makespan.

    A zero makespan normalises every instant to 0.
    """
    field = TimelineField(field)
    if not result.timelines:
        raise ValueError("empty simulation result")
    attr = "submit_sec" if field is TimelineField.SUBMIT else "completion_sec"
    values = np.sort(np.array([getattr(t, attr) for t in result.timelines], dtype=float))
    span = result.makespan_sec
    if normalized:
        values = values / span if span > 0 else np.zeros_like(values)
    return TimelineEcdf(field, Ecdf(tuple(values.tolist())), span, normalized)


def _grid_quantiles(ecdf: Ecdf, K: int) -> np.ndarray:
    # Q(p_k) with p_k = (k - 0.5) / K: index ceil(p_k * n) - 1, done in integers
    n = ecdf.n
    k = np.arange(1, K + 1, dtype=np.int64)
    idx = -((-(2 * k - 1) * n) // (2 * K)) - 1
    return np.asarray(ecdf.sorted_values)[idx]


def quantile_rmse(a: TimelineEcdf, b: TimelineEcdf, K: int = DEFAULT_GRID) -> float:
    """RMS gap between the two empirical quantile functions on ``(k - 0.5) / K``."""
    if a.field is not b.field or a.normalized != b.normalized:
        raise ValueError("quantile RMSE needs ECDFs of the same field and normalisation")
    if K < 1:
        raise ValueError("grid size must be positive")
    d = _grid_quantiles(a.ecdf, K) - _grid_quantiles(b.ecdf, K)
    return math.sqrt(float(np.mean(d * d)))


def compare(real: SimulationResult, synthetic: SimulationResult, K: int = DEFAULT_GRID) -> ComparisonReport:
    def rmse(field, normalized):
        return quantile_rmse(timeline_ecdf(real, field, normalized),
                             timeline_ecdf(synthetic, field, normalized), K)
    return ComparisonReport(
        submit_rmse=rmse(TimelineField.SUBMIT, False),
        completion_rmse=rmse(TimelineField.COMPLETION, False),
        normalized_submit_rmse=rmse(TimelineField.SUBMIT, True),
        normalized_completion_rmse=rmse(TimelineField.COMPLETION, True),
        task_counts=(len(real.timelines), len(synthetic.timelines)),
    )


def average_reports(reports: Sequence[ComparisonReport]) -> ComparisonReport:
    if not reports:
        raise ValueError("nothing to average")
    n = len(reports)
    mean = {k: sum(getattr(r, k) for r in reports) / n
            for k in ("submit_rmse", "completion_rmse", "normalized_submit_rmse", "normalized_completion_rmse")}
    return ComparisonReport(**mean, task_counts=reports[0].task_counts)
