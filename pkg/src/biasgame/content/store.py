"""Sentence/topic registry, baseline import, and round selection.

Selection is least-annotated-first: candidates are ordered by ascending
current annotation count with seeded-random tie-breaks, which keeps counts
within one of each other across the pool and guarantees the per-sentence
annotation floor that pure uniform draws cannot.

Quota accounting is per (player, topic, day): every selected sentence
consumes one unit of the topic's daily quota; purchased refills add ten.
"""
from __future__ import annotations

import csv
import io
import random
from dataclasses import dataclass, field
from datetime import date
from typing import Callable, Iterable

from ..errors import (
    DuplicateText,
    FormatError,
    InsufficientContent,
    QuotaExhausted,
    UnknownTopic,
    UnresolvedWord,
)
from .models import Leaning, Origin, Sentence, SentenceLabel, Topic
from .stopwords import DEFAULT_STOPWORDS
from .tokenizer import tokenize

BASELINE_COLUMNS = ["text", "label", "biased_words", "outlet", "outlet_leaning", "topic", "article_url"]


def normalize_text(text: str) -> str:
    """Trim and collapse internal whitespace; case is preserved."""
    return " ".join(text.split())


@dataclass
class RowError:
    line: int
    error: str
    message: str


@dataclass
class ImportReport:
    imported: int = 0
    rejected: list[RowError] = field(default_factory=list)


class ContentStore:
    def __init__(self, stopwords: frozenset[str] = DEFAULT_STOPWORDS):
        self.stopwords = stopwords
        self.topics: dict[str, Topic] = {}
        self.sentences: dict[str, Sentence] = {}
        self._by_normalized_text: dict[str, str] = {}
        # quota units consumed, keyed (player_id, topic_id, iso day)
        self._quota_used: dict[tuple[str, str, str], int] = {}
        self._quota_refills: dict[tuple[str, str, str], int] = {}
        self._next_sentence = 1

    # -- topics ---------------------------------------------------------

    def add_topic(self, topic: Topic) -> Topic:
        self.topics[topic.id] = topic
        return topic

    def get_topic(self, topic_id: str) -> Topic:
        try:
            return self.topics[topic_id]
        except KeyError:
            raise UnknownTopic(f"no such topic: {topic_id}") from None

    # -- ingestion ------------------------------------------------------

    def next_sentence_id(self) -> str:
        return f"s{self._next_sentence:05d}"

    def build_sentence(
        self,
        sentence_id: str,
        text: str,
        topic: str,
        article_url: str,
        outlet: str,
        outlet_leaning: Leaning,
        origin: Origin = Origin.NEW,
        baseline_label: SentenceLabel | None = None,
        baseline_biased_words: Iterable[int] = (),
    ) -> Sentence:
        """Validate and construct a Sentence without storing it."""
        self.get_topic(topic)
        tokens = tokenize(text, self.stopwords)
        normalized = normalize_text(text)
        if normalized in self._by_normalized_text:
            raise DuplicateText(f"identical sentence already stored: {self._by_normalized_text[normalized]}")
        return Sentence(
            id=sentence_id,
            text=text,
            tokens=tokens,
            topic=topic,
            article_url=article_url,
            outlet=outlet,
            outlet_leaning=Leaning(outlet_leaning),
            origin=origin,
            baseline_label=baseline_label,
            baseline_biased_words=frozenset(baseline_biased_words),
        )

    def put(self, sentence: Sentence) -> Sentence:
        self.sentences[sentence.id] = sentence
        self._by_normalized_text[normalize_text(sentence.text)] = sentence.id
        n = int(sentence.id.lstrip("s") or 0) if sentence.id.startswith("s") else 0
        self._next_sentence = max(self._next_sentence, n + 1)
        return sentence

    def ingest(self, text, topic, article_url, outlet, outlet_leaning) -> Sentence:
        """Add a new (unlabelled) sentence; used by the curator content tool."""
        s = self.build_sentence(
            self.next_sentence_id(), text, topic, article_url, outlet,
            Leaning(outlet_leaning), Origin.NEW,
        )
        return self.put(s)

    def parse_baseline_rows(self, file) -> tuple[list[dict], list[RowError]]:
        """Parse and validate the baseline CSV, resolving biased words to indices.

        Returns (valid row payloads, rejected rows). A malformed header raises
        FormatError; bad rows are rejected individually, others kept.
        """
        if isinstance(file, (str, bytes)):
            fh = io.StringIO(file.decode("utf-8") if isinstance(file, bytes) else file)
        else:
            fh = file
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            return [], []
        if list(reader.fieldnames) != BASELINE_COLUMNS:
            raise FormatError(f"expected header {','.join(BASELINE_COLUMNS)}")

        rows: list[dict] = []
        rejected: list[RowError] = []
        seen_normalized: set[str] = set()
        for line_no, row in enumerate(reader, start=2):
            try:
                if any(row.get(c) is None for c in BASELINE_COLUMNS):
                    raise FormatError("row with missing columns")
                label = SentenceLabel(row["label"])
                text = row["text"]
                tokens = tokenize(text, self.stopwords)
                indices: set[int] = set()
                words = [w for w in row["biased_words"].split("|") if w]
                for word in words:
                    matches = [t.index for t in tokens if t.surface == word]
                    if not matches:
                        raise UnresolvedWord(f"biased word {word!r} not found among tokens")
                    indices.update(matches)
                normalized = normalize_text(text)
                if normalized in self._by_normalized_text or normalized in seen_normalized:
                    raise DuplicateText("identical sentence already stored")
                seen_normalized.add(normalized)
                if not row["topic"]:
                    raise FormatError("row without a topic")
                rows.append({
                    "text": text,
                    "label": label,
                    "biased_word_indices": sorted(indices),
                    "outlet": row["outlet"],
                    "outlet_leaning": Leaning(row["outlet_leaning"]),
                    "topic": row["topic"],
                    "article_url": row["article_url"],
                })
            except (FormatError, UnresolvedWord, DuplicateText, ValueError) as exc:
                name = exc.__class__.__name__ if isinstance(exc, Exception) else "error"
                rejected.append(RowError(line=line_no, error=name, message=str(exc)))
        return rows, rejected

    # -- selection ------------------------------------------------------

    def quota_remaining(self, player_id: str, topic_id: str, day: date) -> int:
        topic = self.get_topic(topic_id)
        key = (player_id, topic_id, day.isoformat())
        return topic.daily_quota + self._quota_refills.get(key, 0) - self._quota_used.get(key, 0)

    def charge_quota(self, player_id: str, topic_id: str, day: date, n: int) -> None:
        key = (player_id, topic_id, day.isoformat())
        self._quota_used[key] = self._quota_used.get(key, 0) + n

    def add_refill(self, player_id: str, topic_id: str, day: date, amount: int) -> None:
        key = (player_id, topic_id, day.isoformat())
        self._quota_refills[key] = self._quota_refills.get(key, 0) + amount

    def pick(
        self,
        player_id: str,
        seen: set[str],
        topic_id: str,
        n: int,
        rng: random.Random,
        count_fn: Callable[[str], int],
        day: date,
        among: set[str] | None = None,
    ) -> list[Sentence]:
        """Choose n unseen sentences from a topic, least-annotated-first.

        Read-only: quota is validated here but charged by the caller once the
        round actually starts. `among` optionally narrows the candidate pool
        (critique rounds only serve sentences other players annotated).
        """
        if n < 1:
            raise ValueError("n must be >= 1")
        if self.quota_remaining(player_id, topic_id, day) < n:
            raise QuotaExhausted(f"daily quota for topic {topic_id} reached")
        candidates = [
            s for s in self.sentences.values()
            if s.topic == topic_id and s.id not in seen and (among is None or s.id in among)
        ]
        if len(candidates) < n:
            raise InsufficientContent(f"only {len(candidates)} unseen sentences in topic {topic_id}")
        keyed = [(count_fn(s.id), rng.random(), s) for s in candidates]
        keyed.sort(key=lambda kv: (kv[0], kv[1]))
        return [s for _, _, s in keyed[:n]]

    def eligible_assessment_pool(self, seen: set[str], truth_fn: Callable[[str], bool]) -> list[Sentence]:
        """Sentences with an operative ground truth the player has not played."""
        return [s for s in self.sentences.values() if s.id not in seen and truth_fn(s.id)]


def pool_ratio_warning(sentences: Iterable[Sentence]) -> str | None:
    """Check a study pool's baseline-label composition against the 2:1 target.

    Returns a warning string when the biased:not-biased ratio deviates by
    more than one sentence from 2:1, else None. Advisory only.
    """
    labelled = [s for s in sentences if s.baseline_label is not None]
    if not labelled:
        return None
    biased = sum(1 for s in labelled if s.baseline_label is SentenceLabel.BIASED)
    total = len(labelled)
    target = 2 * total / 3
    if abs(biased - target) > 1:
        return (
            f"study pool ratio off target: {biased} biased / {total - biased} not biased "
            f"(target 2:1 within one sentence)"
        )
    return None
