from __future__ import annotations

import enum
from dataclasses import dataclass, field
from datetime import datetime

from ..content.models import SentenceLabel


class Mode(str, enum.Enum):
    CONTEXT = "context"
    PUBLISH = "publish"
    QUICKWORDS = "quickwords"
    COOP = "coop"
    CRITIQUE = "critique"
    TUTORIAL = "tutorial"
    ASSESSMENT = "assessment"


class Phase(str, enum.Enum):
    TUTORIAL = "tutorial"
    DIRECT = "direct"
    DELAYED = "delayed"


class FeedbackKind(str, enum.Enum):
    DIRECT = "direct"
    DELAYED = "delayed"


class Status(str, enum.Enum):
    PENDING = "pending"
    ESTABLISHED = "established"


@dataclass(frozen=True)
class Annotation:
    """One player's judgment on one sentence.

    sentence_label may be absent (Quick Words marks words without swiping);
    such annotations contribute word marks but no sentence vote.
    """
    player_id: str
    sentence_id: str
    sentence_label: SentenceLabel | None
    marked_tokens: frozenset[int]
    mode: Mode
    phase: Phase
    timestamp: datetime


@dataclass
class LabelState:
    """Per-sentence aggregation state.

    status follows the establishment rule exactly: established iff a baseline
    ground truth exists, or at least five votes with no tie. A tie created by
    later votes reverts status to pending but the previously resolved label is
    retained (tie_flagged) and keeps serving as feedback ground truth.
    """
    sentence_id: str
    biased_votes: int = 0
    not_biased_votes: int = 0
    word_marks: dict[int, int] = field(default_factory=dict)
    annotator_count: int = 0
    status: Status = Status.PENDING
    resolved_label: SentenceLabel | None = None
    resolved_biased_tokens: frozenset[int] = frozenset()
    version: int = 0
    # retention across tie reversion; never cleared once set
    last_resolved_label: SentenceLabel | None = None
    last_resolved_tokens: frozenset[int] = frozenset()
    tie_flagged: bool = False
    ever_established: bool = False


@dataclass(frozen=True)
class DatasetRecord:
    text: str
    label: SentenceLabel
    biased_words: tuple[tuple[int, str], ...]
    topic: str
    article_url: str
    outlet: str
    outlet_leaning: str
    annotator_count: int
    label_support: float
    origin: str

    def to_json_dict(self) -> dict:
        return {
            "text": self.text,
            "label": self.label.value,
            "biased_words": [{"index": i, "word": w} for i, w in self.biased_words],
            "topic": self.topic,
            "article_url": self.article_url,
            "outlet": self.outlet,
            "outlet_leaning": self.outlet_leaning,
            "annotator_count": self.annotator_count,
            "label_support": self.label_support,
            "origin": self.origin,
        }


@dataclass
class PaperEntry:
    """A played sentence in a player's archive.

    Direct-feedback entries are born resolved and collected; delayed entries
    wait until the sentence's label establishes and the player collects the
    boosted reward.
    """
    annotation: Annotation
    feedback_kind: FeedbackKind
    collected: bool = False
    reward_currency: int = 0
    reward_xp: int = 0
    sentence_hit: bool | None = None


@dataclass(frozen=True)
class ResolvedFeedback:
    sentence_id: str
    annotation: Annotation
    resolved_label: SentenceLabel
    resolved_biased_tokens: frozenset[int]
    sentence_hit: bool | None
    word_hits: int
    reward_currency: int
    reward_xp: int
