"""Welfare, inequality and order-advantage measures over partitions."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .prefs import team_utility


class UndefinedMetric(ValueError):
    """The metric has no meaningful value for this input."""


@dataclass(frozen=True)
class TrialMeasurement:
    usw: float
    gini: float | None
    rank_corr: float
    overlap: float | None = None
    nodes: int | None = None
    time_ms: float | None = None


def realized_utilities(profile, partition) -> list[float]:
    team_of = {}
    for t in partition:
        for p in t:
            team_of[p] = t
    return [team_utility(profile, i, team_of[i]) for i in range(profile.n)]


def usw(profile, partition) -> float:
    """Utilitarian social welfare: mean realized utility."""
    vals = realized_utilities(profile, partition)
    return sum(vals) / len(vals) if vals else 0.0


def gini(values) -> float:
    """Gini coefficient ``sum_ij |x_i - x_j| / (2 n sum_j x_j)``."""
    xs = sorted(float(v) for v in values)
    n = len(xs)
    if n == 0:
        raise UndefinedMetric("gini of an empty sample")
    total = sum(xs)
    if total <= 0:
        raise UndefinedMetric(f"gini needs a positive total, got {total}")
    # sorted form of the mean absolute difference
    weighted = sum((2 * (k + 1) - n - 1) * x for k, x in enumerate(xs))
    return max(0.0, weighted / (n * total))


def pearson(xs, ys) -> float:
    """Pearson correlation, 0.0 when either side has zero variance."""
    n = len(xs)
    if n != len(ys):
        raise ValueError("samples differ in length")
    if n < 2:
        return 0.0
    mx = sum(xs) / n
    my = sum(ys) / n
    sxx = sum((x - mx) ** 2 for x in xs)
    syy = sum((y - my) ** 2 for y in ys)
    if sxx <= 1e-15 * max(1.0, mx * mx) * n or syy <= 1e-15 * max(1.0, my * my) * n:
        return 0.0
    sxy = sum((x - mx) * (y - my) for x, y in zip(xs, ys))
    return max(-1.0, min(1.0, sxy / math.sqrt(sxx * syy)))


def rank_utility_correlation(order, profile, partition) -> float:
    """Correlation between block position in the order and realized utility."""
    pos = order.block_index
    vals = realized_utilities(profile, partition)
    players = range(profile.n)
    return pearson([pos[i] for i in players], [vals[i] for i in players])


def partition_overlap(reference, other) -> float:
    """Share of the reference partition's teams that also appear in ``other``."""
    ref = {frozenset(t) for t in reference}
    oth = {frozenset(t) for t in other}
    if set().union(*ref) != set().union(*oth):
        raise ValueError("partitions cover different players")
    if not ref:
        return 1.0
    return len(ref & oth) / len(ref)
