"""Tutorial content: a versioned data file of levels, dialogue, and curated
sentences with labels. Tutorial sentences never enter the content store, so
tutorial play cannot contribute to label aggregation.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources

from ..content.models import SentenceLabel
from ..content.stopwords import DEFAULT_STOPWORDS
from ..content.tokenizer import Token, tokenize
from ..errors import MissingContent


@dataclass(frozen=True)
class TutorialSentence:
    ref: str
    text: str
    tokens: tuple[Token, ...]
    label: SentenceLabel
    biased_indices: frozenset[int]


@dataclass(frozen=True)
class TutorialLevel:
    level: int
    objective: str
    dialogue: tuple[str, ...]
    sentences: tuple[TutorialSentence, ...]


@dataclass(frozen=True)
class TutorialContent:
    version: int
    levels: tuple[TutorialLevel, ...]

    @property
    def final_level(self) -> int:
        return len(self.levels)

    def level(self, number: int) -> TutorialLevel:
        if not (1 <= number <= len(self.levels)):
            raise MissingContent(f"no tutorial level {number}")
        return self.levels[number - 1]


def _parse(doc: dict, stopwords: frozenset[str]) -> TutorialContent:
    levels = []
    for entry in doc["levels"]:
        sentences = []
        for i, s in enumerate(entry["sentences"]):
            tokens = tuple(tokenize(s["text"], stopwords))
            indices: set[int] = set()
            for word in s["biased_words"]:
                matches = [t.index for t in tokens if t.surface == word]
                if not matches:
                    raise MissingContent(
                        f"tutorial level {entry['level']}: biased word {word!r} not in sentence tokens"
                    )
                indices.update(matches)
            sentences.append(TutorialSentence(
                ref=f"tut-{entry['level']}-{i}",
                text=s["text"],
                tokens=tokens,
                label=SentenceLabel(s["label"]),
                biased_indices=frozenset(indices),
            ))
        levels.append(TutorialLevel(
            level=entry["level"],
            objective=entry["objective"],
            dialogue=tuple(entry["dialogue"]),
            sentences=tuple(sentences),
        ))
    return TutorialContent(version=doc["version"], levels=tuple(levels))


def load_tutorial(path=None, stopwords: frozenset[str] = DEFAULT_STOPWORDS) -> TutorialContent:
    """Load the shipped tutorial file, or a custom one from path."""
    if path is None:
        text = resources.files("biasgame.engine.data").joinpath("tutorial_content.json").read_text("utf-8")
    else:
        try:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise MissingContent(f"tutorial content unavailable: {exc}") from exc
    return _parse(json.loads(text), stopwords)
