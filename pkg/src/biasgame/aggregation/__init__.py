from .models import (
    Annotation,
    DatasetRecord,
    FeedbackKind,
    LabelState,
    Mode,
    PaperEntry,
    Phase,
    ResolvedFeedback,
    Status,
)
from .rules import (
    SENTENCE_VOTE_THRESHOLD,
    WORD_MARK_RATIO,
    WORD_MIN_MARKS,
    WORD_SMALL_POOL,
    compute_sentence_label,
    compute_word_label,
)
from .store import AggregationStore, contributes

__all__ = [
    "AggregationStore",
    "Annotation",
    "DatasetRecord",
    "FeedbackKind",
    "LabelState",
    "Mode",
    "PaperEntry",
    "Phase",
    "ResolvedFeedback",
    "SENTENCE_VOTE_THRESHOLD",
    "Status",
    "WORD_MARK_RATIO",
    "WORD_MIN_MARKS",
    "WORD_SMALL_POOL",
    "compute_sentence_label",
    "compute_word_label",
    "contributes",
]
