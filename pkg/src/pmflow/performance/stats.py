from __future__ import annotations

import math
from dataclasses import dataclass

from ..units import from_ms


@dataclass
class DurationStats:
    """Running duration statistics in milliseconds (Welford accumulation).

    ``std_dev`` is the sample standard deviation; it is 0 for fewer than two
    observations.
    """

    count: int = 0
    mean: float = 0.0
    m2: float = 0.0
    min: float = math.inf
    max: float = -math.inf

    @classmethod
    def from_values(cls, values):
        stats = cls()
        for v in values:
            stats.add(v)
        return stats

    def add(self, value_ms: float) -> None:
        self.count += 1
        delta = value_ms - self.mean
        self.mean += delta / self.count
        self.m2 += delta * (value_ms - self.mean)
        self.min = min(self.min, value_ms)
        self.max = max(self.max, value_ms)

    def merge(self, other: DurationStats) -> DurationStats:
        """Combined statistics of both samples; neither operand is modified."""
        if other.count == 0:
            return DurationStats(self.count, self.mean, self.m2, self.min, self.max)
        if self.count == 0:
            return DurationStats(other.count, other.mean, other.m2, other.min, other.max)
        n = self.count + other.count
        delta = other.mean - self.mean
        mean = self.mean + delta * other.count / n
        m2 = self.m2 + other.m2 + delta * delta * self.count * other.count / n
        return DurationStats(n, mean, m2, min(self.min, other.min), max(self.max, other.max))

    @property
    def variance(self):
        return self.m2 / (self.count - 1) if self.count > 1 else 0.0

    @property
    def std_dev(self):
        return math.sqrt(max(self.variance, 0.0))

    def in_unit(self, unit="ms") -> dict:
        if self.count == 0:
            return {"count": 0, "mean": None, "std_dev": None, "min": None, "max": None}
        return {
            "count": self.count,
            "mean": from_ms(self.mean, unit),
            "std_dev": from_ms(self.std_dev, unit),
            "min": from_ms(self.min, unit),
            "max": from_ms(self.max, unit),
        }
