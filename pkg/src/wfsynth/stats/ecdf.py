from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np


@dataclass(frozen=True)
class Ecdf:
    """Right-continuous empirical CDF over a non-empty sample."""

    sorted_values: tuple[float, ...]

    def __post_init__(self):
        if not self.sorted_values:
            raise ValueError("an ECDF needs at least one sample")

    @property
    def n(self) -> int:
        return len(self.sorted_values)

    def eval(self, x):
        """Fraction of samples ``<= x``."""
        counts = np.searchsorted(np.asarray(self.sorted_values), x, side="right")
        out = counts / self.n
        return float(out) if np.ndim(x) == 0 else out

    def quantile(self, p):
        """Left-continuous inverse: the smallest sample ``v`` with ``eval(v) >= p``."""
        values = np.asarray(self.sorted_values)
        idx = np.ceil(np.asarray(p, dtype=float) * self.n).astype(np.int64) - 1
        out = values[np.clip(idx, 0, self.n - 1)]
        return float(out) if np.ndim(p) == 0 else out

    def points(self) -> list[tuple[float, float]]:
        """``(value, probability)`` at each distinct value, for plotting."""
        values = np.asarray(self.sorted_values)
        distinct, last = np.unique(values[::-1], return_index=True)
        counts = self.n - last
        return [(float(v), float(c) / self.n) for v, c in zip(distinct, counts)]


def ecdf(samples: Iterable[float]) -> Ecdf:
    values = sorted(float(v) for v in samples)
    if not values:
        raise ValueError("an ECDF needs at least one sample")
    return Ecdf(tuple(values))
