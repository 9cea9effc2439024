"""Append-only event log.

Events are facts: they carry command inputs plus every nondeterministic
choice already resolved (chosen sentence ids, timestamps), so applying the
log in order rebuilds identical state with no RNG involved. The log is the
single durability and serialization point of the service.
"""
from __future__ import annotations

import json
import os
from dataclasses import asdict, dataclass, fields
from datetime import datetime
from typing import Iterator, Type


@dataclass(frozen=True)
class Event:
    ts: str  # ISO-8601 UTC

    @property
    def when(self) -> datetime:
        return datetime.fromisoformat(self.ts)


@dataclass(frozen=True)
class TopicCreated(Event):
    topic_id: str
    name: str
    unlocked_by_default: bool
    price: int
    daily_quota: int


@dataclass(frozen=True)
class SentenceIngested(Event):
    sentence_id: str
    text: str
    topic: str
    article_url: str
    outlet: str
    outlet_leaning: str
    origin: str
    baseline_label: str | None = None
    baseline_biased_words: tuple[int, ...] = ()


@dataclass(frozen=True)
class PlayerRegistered(Event):
    player_id: str
    gender: str
    age: int
    education: str
    english: str
    leaning: int
    news_frequency: str
    outlets: tuple[str, ...] = ()


@dataclass(frozen=True)
class TutorialSubmitted(Event):
    player_id: str
    level: int
    # (sentence ref, label, marked indices)
    answers: tuple[tuple[str, str, tuple[int, ...]], ...]


@dataclass(frozen=True)
class RoundStarted(Event):
    round_id: str
    player_id: str
    mode: str
    topic_id: str | None
    sentence_ids: tuple[str, ...]
    breaking: bool = False
    # critique: (sentence id, author id) pairs
    shown: tuple[tuple[str, str], ...] = ()


@dataclass(frozen=True)
class SentenceSubmitted(Event):
    round_id: str
    sentence_id: str
    label: str | None
    marks: tuple[int, ...]


@dataclass(frozen=True)
class QuickTapped(Event):
    round_id: str
    sentence_id: str
    token_index: int


@dataclass(frozen=True)
class QuickSentenceClosed(Event):
    round_id: str
    sentence_id: str


@dataclass(frozen=True)
class CritiqueSubmitted(Event):
    round_id: str
    sentence_id: str
    agree: bool
    label: str
    marks: tuple[int, ...]


@dataclass(frozen=True)
class CoopSettled(Event):
    round_a: str
    round_b: str


@dataclass(frozen=True)
class Purchased(Event):
    player_id: str
    item: str  # "topic" | "quota_refill"
    topic_id: str


@dataclass(frozen=True)
class DailyRefreshed(Event):
    day: str  # ISO date in the configured timezone
    breaking_ids: tuple[str, ...]


@dataclass(frozen=True)
class FeedbackCollected(Event):
    player_id: str
    sentence_id: str


_EVENT_TYPES: dict[str, Type[Event]] = {
    cls.__name__: cls
    for cls in (
        TopicCreated, SentenceIngested, PlayerRegistered, TutorialSubmitted,
        RoundStarted, SentenceSubmitted, QuickTapped, QuickSentenceClosed,
        CritiqueSubmitted, CoopSettled, Purchased, DailyRefreshed,
        FeedbackCollected,
    )
}


def event_to_dict(event: Event) -> dict:
    d = asdict(event)
    d["kind"] = event.__class__.__name__
    return d


def event_from_dict(d: dict) -> Event:
    d = dict(d)
    kind = d.pop("kind")
    cls = _EVENT_TYPES[kind]
    names = {f.name for f in fields(cls)}
    kwargs = {}
    for name in names:
        if name not in d:
            continue
        value = d[name]
        if isinstance(value, list):
            value = tuple(tuple(v) if isinstance(v, list) else v for v in value)
        kwargs[name] = value
    return cls(**kwargs)


class EventLog:
    """In-memory log; subclass for durable variants."""

    def __init__(self):
        self.events: list[Event] = []

    def append(self, event: Event) -> None:
        self.events.append(event)

    def __iter__(self) -> Iterator[Event]:
        return iter(self.events)

    def __len__(self) -> int:
        return len(self.events)


class FileEventLog(EventLog):
    """JSON-lines log, fsync-free append; read back with load()."""

    def __init__(self, path):
        super().__init__()
        self.path = path
        if os.path.exists(path):
            with open(path, encoding="utf-8") as fh:
                for line in fh:
                    if line.strip():
                        self.events.append(event_from_dict(json.loads(line)))
        self._fh = open(path, "a", encoding="utf-8")

    def append(self, event: Event) -> None:
        super().append(event)
        self._fh.write(json.dumps(event_to_dict(event), sort_keys=True) + "\n")
        self._fh.flush()

    def close(self) -> None:
        self._fh.close()


def load_events(path) -> list[Event]:
    out: list[Event] = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                out.append(event_from_dict(json.loads(line)))
    return out
