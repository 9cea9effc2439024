"""Expert-comparison statistics: confusion metrics and agreement breakdowns."""
from __future__ import annotations

from dataclasses import dataclass

from ..content.models import SentenceLabel
from ..errors import KeyMismatch


@dataclass(frozen=True)
class ConfusionMatrix:
    """Counts with expert as gold and player as prediction; positive = biased."""
    tp: int
    fn: int
    fp: int
    tn: int

    def __post_init__(self):
        if min(self.tp, self.fn, self.fp, self.tn) < 0:
            raise ValueError("confusion counts must be non-negative")
        if self.total == 0:
            raise ValueError("confusion matrix must contain at least one count")

    @property
    def total(self) -> int:
        return self.tp + self.fn + self.fp + self.tn


@dataclass(frozen=True)
class ClassificationMetrics:
    """accuracy/precision/recall; None marks an undefined metric (zero denominator)."""
    accuracy: float | None
    precision: float | None
    recall: float | None

    def to_json_dict(self) -> dict:
        return {"accuracy": self.accuracy, "precision": self.precision, "recall": self.recall}


def classification_metrics(m: ConfusionMatrix) -> ClassificationMetrics:
    accuracy = (m.tp + m.tn) / m.total
    precision = m.tp / (m.tp + m.fp) if (m.tp + m.fp) > 0 else None
    recall = m.tp / (m.tp + m.fn) if (m.tp + m.fn) > 0 else None
    return ClassificationMetrics(accuracy=accuracy, precision=precision, recall=recall)


def confusion_from_labels(
    expert: dict[str, SentenceLabel],
    player: dict[str, SentenceLabel],
) -> ConfusionMatrix:
    if set(expert) != set(player):
        raise KeyMismatch("expert and player label maps cover different sentences")
    tp = fn = fp = tn = 0
    for key, gold in expert.items():
        pred = player[key]
        if gold is SentenceLabel.BIASED:
            if pred is SentenceLabel.BIASED:
                tp += 1
            else:
                fn += 1
        else:
            if pred is SentenceLabel.BIASED:
                fp += 1
            else:
                tn += 1
    return ConfusionMatrix(tp=tp, fn=fn, fp=fp, tn=tn)


@dataclass(frozen=True)
class DirectionCount:
    count: int
    fraction_of_diffs: float


@dataclass(frozen=True)
class AgreementBreakdown:
    match_count: int
    diff_count: int
    rate: float
    a_biased_b_not: DirectionCount
    a_not_b_biased: DirectionCount

    def to_json_dict(self) -> dict:
        return {
            "match_count": self.match_count,
            "diff_count": self.diff_count,
            "rate": self.rate,
            "diffs_by_direction": {
                "a_biased_b_not": {
                    "count": self.a_biased_b_not.count,
                    "fraction_of_diffs": self.a_biased_b_not.fraction_of_diffs,
                },
                "a_not_b_biased": {
                    "count": self.a_not_b_biased.count,
                    "fraction_of_diffs": self.a_not_b_biased.fraction_of_diffs,
                },
            },
        }


def agreement_breakdown(
    labels_a: dict[str, SentenceLabel],
    labels_b: dict[str, SentenceLabel],
) -> AgreementBreakdown:
    """Match rate between two label maps plus the direction split of diffs."""
    if set(labels_a) != set(labels_b):
        raise KeyMismatch("label maps cover different sentences")
    if not labels_a:
        raise KeyMismatch("label maps are empty")
    matches = 0
    a_biased_b_not = 0
    a_not_b_biased = 0
    for key, a in labels_a.items():
        b = labels_b[key]
        if a is b:
            matches += 1
        elif a is SentenceLabel.BIASED:
            a_biased_b_not += 1
        else:
            a_not_b_biased += 1
    total = len(labels_a)
    diffs = total - matches
    frac = lambda c: c / diffs if diffs else 0.0  # noqa: E731
    return AgreementBreakdown(
        match_count=matches,
        diff_count=diffs,
        rate=matches / total,
        a_biased_b_not=DirectionCount(a_biased_b_not, frac(a_biased_b_not)),
        a_not_b_biased=DirectionCount(a_not_b_biased, frac(a_not_b_biased)),
    )
