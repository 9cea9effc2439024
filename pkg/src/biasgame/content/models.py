from __future__ import annotations

import enum
from dataclasses import dataclass, field

from .tokenizer import Token


class Leaning(str, enum.Enum):
    LEFT = "left"
    CENTER = "center"
    RIGHT = "right"


class Origin(str, enum.Enum):
    BASELINE = "baseline"
    NEW = "new"


class SentenceLabel(str, enum.Enum):
    BIASED = "biased"
    NOT_BIASED = "not_biased"


@dataclass
class Topic:
    id: str
    name: str
    unlocked_by_default: bool = False
    price: int = 80
    daily_quota: int = 10

    def __post_init__(self):
        if self.price < 0:
            raise ValueError("topic price must be >= 0")
        if self.daily_quota < 1:
            raise ValueError("daily quota must be >= 1")


@dataclass
class Sentence:
    """A tokenized news sentence with source metadata and origin.

    tokens is exactly tokenize(text); baseline sentences carry the imported
    label and biased-word indices, new sentences carry neither.
    """
    id: str
    text: str
    tokens: list[Token]
    topic: str
    article_url: str
    outlet: str
    outlet_leaning: Leaning
    origin: Origin
    baseline_label: SentenceLabel | None = None
    baseline_biased_words: frozenset[int] = field(default_factory=frozenset)

    def __post_init__(self):
        if self.origin is Origin.BASELINE and self.baseline_label is None:
            raise ValueError("baseline sentence requires a baseline label")
        if self.origin is Origin.NEW and self.baseline_label is not None:
            raise ValueError("new sentence must not carry a baseline label")

    @property
    def valid_indices(self) -> frozenset[int]:
        return frozenset(t.index for t in self.tokens)

    @property
    def stopword_indices(self) -> frozenset[int]:
        return frozenset(t.index for t in self.tokens if t.is_stopword)
