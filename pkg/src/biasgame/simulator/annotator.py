"""Synthetic annotator behavior: Bernoulli per decision.

Each judgment is driven by an RNG derived only from (model seed, sentence
id), so a model's behavior on a sentence is identical no matter when or in
which round it encounters it. Leaning-correlated error models can plug in by
subclassing decide().
"""
from __future__ import annotations

import random
from dataclasses import dataclass

from ..content.models import SentenceLabel
from ..content.tokenizer import Token


def _flip(label: SentenceLabel) -> SentenceLabel:
    return SentenceLabel.NOT_BIASED if label is SentenceLabel.BIASED else SentenceLabel.BIASED


@dataclass(frozen=True)
class AnnotatorModel:
    accuracy_sentence: float
    word_hit_rate: float
    false_mark_rate: float
    seed: int = 0

    def __post_init__(self):
        for name in ("accuracy_sentence", "word_hit_rate", "false_mark_rate"):
            v = getattr(self, name)
            if not (0.0 <= v <= 1.0):
                raise ValueError(f"{name} must be a probability, got {v}")

    def decide(
        self,
        sentence_key: str,
        gold_label: SentenceLabel,
        gold_words: frozenset[int],
        tokens: tuple[Token, ...] | list[Token],
    ) -> tuple[SentenceLabel, list[int]]:
        """One sentence judgment: (label, marked token indices)."""
        rng = random.Random(f"{self.seed}:{sentence_key}")
        label = gold_label if rng.random() < self.accuracy_sentence else _flip(gold_label)
        marks: list[int] = []
        for t in tokens:
            if t.is_stopword:
                continue
            p = self.word_hit_rate if t.index in gold_words else self.false_mark_rate
            if rng.random() < p:
                marks.append(t.index)
        return label, marks


def uniform_population(n: int, accuracy: float, seed: int = 0,
                       word_hit_rate: float | None = None,
                       false_mark_rate: float | None = None) -> list[AnnotatorModel]:
    """n identical-accuracy annotators with distinct behavior seeds."""
    whr = accuracy if word_hit_rate is None else word_hit_rate
    fmr = 0.2 * (1.0 - accuracy) if false_mark_rate is None else false_mark_rate
    return [
        AnnotatorModel(accuracy_sentence=accuracy, word_hit_rate=whr,
                       false_mark_rate=fmr, seed=seed * 100_003 + i)
        for i in range(n)
    ]


def mixed_population(n: int, mean_accuracy: float, spread: float = 0.1, seed: int = 0) -> list[AnnotatorModel]:
    """Accuracies spaced evenly across [mean-spread, mean+spread], clipped to [0,1]."""
    out = []
    for i in range(n):
        frac = (i / (n - 1)) if n > 1 else 0.5
        acc = min(1.0, max(0.0, mean_accuracy + spread * (2.0 * frac - 1.0)))
        out.append(AnnotatorModel(
            accuracy_sentence=acc, word_hit_rate=acc,
            false_mark_rate=0.2 * (1.0 - acc), seed=seed * 100_003 + i,
        ))
    return out
