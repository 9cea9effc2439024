from .alpha import BootstrapAlpha, Interval, bootstrap_alpha, intervals_overlap, krippendorff_alpha
from .comparison import (
    AgreementBreakdown,
    ClassificationMetrics,
    ConfusionMatrix,
    agreement_breakdown,
    classification_metrics,
    confusion_from_labels,
)
from .reliability import ReliabilityData
from .report import metrics_report, write_alpha_histogram

__all__ = [
    "AgreementBreakdown",
    "BootstrapAlpha",
    "ClassificationMetrics",
    "ConfusionMatrix",
    "Interval",
    "ReliabilityData",
    "agreement_breakdown",
    "bootstrap_alpha",
    "classification_metrics",
    "confusion_from_labels",
    "intervals_overlap",
    "krippendorff_alpha",
    "metrics_report",
    "write_alpha_histogram",
]
