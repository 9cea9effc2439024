from __future__ import annotations

import enum
from dataclasses import dataclass, field
from datetime import date, datetime

from ..aggregation.models import Mode
from ..content.models import SentenceLabel
from ..errors import ValidationFailed


class Gender(str, enum.Enum):
    WOMAN = "woman"
    MAN = "man"
    DIVERSE = "diverse"
    UNDISCLOSED = "undisclosed"


EDUCATION_OPTIONS = (
    "8th grade",
    "Some high school",
    "High school graduate",
    "Vocational or technical school",
    "Some college",
    "Associate degree",
    "Bachelor's degree",
    "Graduate work",
    "Ph.D.",
    "I prefer not to say",
)

NEWS_FREQUENCY_OPTIONS = (
    "Never",
    "Very rarely",
    "Several times per month",
    "Several times per week",
    "Every day",
    "Several times per day",
)


class EnglishLevel(str, enum.Enum):
    PROFICIENT = "proficient"
    INDEPENDENT = "independent"
    BASIC = "basic"


@dataclass(frozen=True)
class DemographicProfile:
    """Registration survey answers; enums are closed per the survey form.

    leaning is stored raw on the -10..10 slider; reports expose the shifted
    0..20 scale via reporting_leaning().
    """
    gender: Gender
    age: int
    education: str
    english: EnglishLevel
    leaning: int
    news_frequency: str
    outlets: tuple[str, ...] = ()

    def __post_init__(self):
        if not (1 <= self.age <= 120):
            raise ValidationFailed("age", f"implausible age: {self.age}")
        if self.education not in EDUCATION_OPTIONS:
            raise ValidationFailed("education", f"not a survey option: {self.education!r}")
        if self.news_frequency not in NEWS_FREQUENCY_OPTIONS:
            raise ValidationFailed("news_frequency", f"not a survey option: {self.news_frequency!r}")
        if not (-10 <= self.leaning <= 10):
            raise ValidationFailed("leaning", "slider range is -10 to 10")

    def reporting_leaning(self) -> int:
        return self.leaning + 10


@dataclass
class Player:
    id: str
    demographics: DemographicProfile
    currency: int = 0
    xp: int = 0
    level: int = 1
    skill_hits: int = 0
    skill_total: int = 0
    tutorial_level: int = 1
    tutorial_complete: bool = False
    assessment_done: bool = False
    unlocked_modes: set[Mode] = field(default_factory=set)
    unlocked_topics: set[str] = field(default_factory=set)
    streak_days: int = 0
    last_breaking_news_day: date | None = None
    seen_sentences: set[str] = field(default_factory=set)
    active_round: str | None = None

    @property
    def skill(self) -> float:
        return self.skill_hits / self.skill_total if self.skill_total else 0.0


class TokenVerdict(str, enum.Enum):
    HIT = "hit"
    WRONG = "wrong"
    MISSED = "missed"
    STOPWORD_ADJACENT_OK = "stopword_adjacent_ok"
    PENDING = "pending"
    UNTOUCHED = "untouched"


class SentenceVerdict(str, enum.Enum):
    HIT = "hit"
    MISS = "miss"
    PENDING = "pending"


@dataclass
class WordFeedback:
    token_verdicts: dict[int, TokenVerdict]
    sentence_verdict: SentenceVerdict
    combined_accuracy: float | None
    word_hits: int = 0
    wrong_marks: int = 0


@dataclass
class SentenceOutcome:
    sentence_id: str
    label: SentenceLabel | None
    marks: frozenset[int]
    feedback: WordFeedback
    reward_currency: int
    reward_xp: int
    submitted_at: datetime


@dataclass
class Round:
    id: str
    player_id: str
    mode: Mode
    topic_id: str | None
    sentence_ids: list[str]
    started_at: datetime
    cursor: int = 0
    outcomes: dict[str, SentenceOutcome] = field(default_factory=dict)
    reward_accumulated: int = 0
    timer_remaining: float | None = None
    last_action_at: datetime | None = None
    breaking: bool = False
    completed: bool = False
    completed_at: datetime | None = None
    bonus_granted: bool = False
    # quickwords only: taps per sentence
    taps: dict[str, dict[int, TokenVerdict]] = field(default_factory=dict)
    closed_sentences: set[str] = field(default_factory=set)
    # critique only: sentence -> (author id, label, marks)
    shown_annotations: dict[str, tuple[str, SentenceLabel, frozenset[int]]] = field(default_factory=dict)
    coop_settled: bool = False

    @property
    def current_sentence(self) -> str | None:
        if self.cursor < len(self.sentence_ids):
            return self.sentence_ids[self.cursor]
        return None

    def total_time(self) -> float:
        if self.completed_at is None:
            return float("inf")
        return (self.completed_at - self.started_at).total_seconds()


@dataclass
class GroupMission:
    goal: int
    progress: int = 0

    def advance(self) -> None:
        if self.progress < self.goal:
            self.progress += 1
