"""Krippendorff's alpha for nominal binary data, with bootstrap intervals.

alpha = 1 - D_o / D_e over the coincidence matrix of pairable values. Each
unit with m ratings contributes its ordered rating pairs at weight 1/(m-1),
so partially-missing data is handled natively. For binary values the per-unit
coincidence contributions reduce to closed forms in (ones, size), which is
what the vectorized bootstrap uses.

The bootstrap resamples whole units (sentence columns) with replacement.
Per-resample index draws are seeded from (seed, resample index), so results
are identical regardless of evaluation order or parallelism. Degenerate
resamples (single value, or nothing pairable) are skipped and counted.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import DegenerateData, LevelMismatch, NoPairableValues
from .reliability import ReliabilityData


@dataclass(frozen=True)
class Interval:
    low: float
    high: float
    level: float

    def __post_init__(self):
        if not (0.0 < self.level < 1.0):
            raise ValueError("confidence level must be in (0, 1)")
        if self.low > self.high:
            raise ValueError("interval low must not exceed high")


@dataclass(frozen=True)
class BootstrapAlpha:
    alpha: float
    interval: Interval
    alphas: tuple[float, ...]
    b: int
    seed: int
    skipped: int


def _unit_stats(data: ReliabilityData) -> tuple[np.ndarray, np.ndarray]:
    """Per-unit (ones, total) rating counts, all units included."""
    ones = np.zeros(len(data.units), dtype=np.int64)
    totals = np.zeros(len(data.units), dtype=np.int64)
    unit_index = {u: i for i, u in enumerate(data.units)}
    for (_rater, unit), value in data.ratings.items():
        i = unit_index[unit]
        totals[i] += 1
        ones[i] += value
    return ones, totals


def _alpha_from_stats(ones: np.ndarray, totals: np.ndarray) -> float:
    """Closed-form nominal alpha for binary ratings from per-unit counts."""
    pairable = totals >= 2
    if not np.any(pairable):
        raise NoPairableValues("no unit carries two or more ratings")
    k = ones[pairable].astype(np.float64)
    m = totals[pairable].astype(np.float64)
    n = float(m.sum())
    n1 = float(k.sum())
    n0 = n - n1
    if n1 == 0.0 or n0 == 0.0:
        raise DegenerateData("a single value occurs everywhere; D_e = 0")
    # ordered disagreeing pairs within a unit: 2*k*(m-k), weighted 1/(m-1)
    d_o = float((2.0 * k * (m - k) / (m - 1.0)).sum()) / n
    d_e = 2.0 * n1 * n0 / (n * (n - 1.0))
    return 1.0 - d_o / d_e


def krippendorff_alpha(data: ReliabilityData) -> float:
    """Nominal-data alpha; 1 exactly when no within-unit disagreement exists.

    Raises NoPairableValues when no unit has two ratings, DegenerateData when
    only one value occurs among pairable ratings.
    """
    ones, totals = _unit_stats(data)
    return _alpha_from_stats(ones, totals)


def bootstrap_alpha(
    data: ReliabilityData,
    b: int = 1000,
    seed: int = 0,
    level: float = 0.95,
) -> BootstrapAlpha:
    """Percentile bootstrap over unit (sentence) resampling.

    Keeps each resampled unit's full rating column. Returns the point alpha,
    the percentile interval at the given confidence level, the per-resample
    alpha values (degenerate resamples skipped), and the skip count.
    """
    if b < 1:
        raise ValueError("resample count must be >= 1")
    point = krippendorff_alpha(data)

    ones, totals = _unit_stats(data)
    n_units = len(data.units)
    idx = np.empty((b, n_units), dtype=np.int64)
    for i in range(b):
        rng = np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(i,)))
        idx[i] = rng.integers(0, n_units, size=n_units)

    res_ones = ones[idx]
    res_totals = totals[idx]
    pairable = res_totals >= 2
    k = np.where(pairable, res_ones, 0).astype(np.float64)
    m = np.where(pairable, res_totals, 0).astype(np.float64)
    n = m.sum(axis=1)
    n1 = k.sum(axis=1)
    n0 = n - n1

    denom = np.where(pairable, res_totals - 1, 1).astype(np.float64)
    d_o_num = (2.0 * k * (m - k) / denom).sum(axis=1)

    valid = (n > 0) & (n1 > 0) & (n0 > 0)
    skipped = int(b - valid.sum())
    if not np.any(valid):
        raise DegenerateData("every bootstrap resample was degenerate")

    n_v, n1_v, n0_v = n[valid], n1[valid], n0[valid]
    d_o = d_o_num[valid] / n_v
    d_e = 2.0 * n1_v * n0_v / (n_v * (n_v - 1.0))
    alphas = 1.0 - d_o / d_e

    lo_q = (1.0 - level) / 2.0
    low, high = np.quantile(alphas, [lo_q, 1.0 - lo_q])
    return BootstrapAlpha(
        alpha=point,
        interval=Interval(low=float(low), high=float(high), level=level),
        alphas=tuple(float(a) for a in alphas),
        b=b,
        seed=seed,
        skipped=skipped,
    )


def intervals_overlap(a: Interval, b: Interval) -> bool:
    """True iff the intervals share at least a point; touching counts."""
    if a.level != b.level:
        raise LevelMismatch(f"levels differ: {a.level} vs {b.level}")
    return max(a.low, b.low) <= min(a.high, b.high)
