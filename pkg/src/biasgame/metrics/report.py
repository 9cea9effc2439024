"""Metrics report assembly and histogram export."""
from __future__ import annotations

import csv
from typing import IO

from ..errors import GameError
from .alpha import BootstrapAlpha, bootstrap_alpha
from .comparison import ClassificationMetrics, ConfusionMatrix, classification_metrics
from .reliability import ReliabilityData


def metrics_report(
    data: ReliabilityData | None,
    b: int = 1000,
    seed: int = 0,
    level: float = 0.95,
    confusion: ConfusionMatrix | None = None,
) -> dict:
    """Build the JSON metrics report.

    When agreement cannot be computed (empty store, degenerate data) the
    report carries an `error` code instead of alpha fields.
    """
    report: dict = {
        "alpha": None,
        "ci_low": None,
        "ci_high": None,
        "level": level,
        "bootstrap_b": b,
        "seed": seed,
        "skipped_resamples": None,
    }
    boot: BootstrapAlpha | None = None
    if data is None or not data.ratings:
        report["error"] = "no_pairable_values"
    else:
        try:
            boot = bootstrap_alpha(data, b=b, seed=seed, level=level)
        except GameError as exc:
            report["error"] = exc.code
    if boot is not None:
        report.update(
            alpha=boot.alpha,
            ci_low=boot.interval.low,
            ci_high=boot.interval.high,
            skipped_resamples=boot.skipped,
        )
    if confusion is not None:
        metrics: ClassificationMetrics = classification_metrics(confusion)
        report["confusion"] = {"tp": confusion.tp, "fn": confusion.fn, "fp": confusion.fp, "tn": confusion.tn}
        report["metrics"] = metrics.to_json_dict()
    return report


def write_alpha_histogram(fh: IO[str], alphas: tuple[float, ...] | list[float]) -> None:
    """CSV export: resample_index,alpha."""
    writer = csv.writer(fh)
    writer.writerow(["resample_index", "alpha"])
    for i, a in enumerate(alphas):
        writer.writerow([i, repr(a)])
