"""Pure scoring kernels for word-level feedback.

Rewards never punish: wrong marks and missed words cost nothing, hits pay a
bonus. Stopwords are excluded from scoring entirely; a stopword sitting
between two ground-truth-biased neighbors is displayed as correct
(stopword_adjacent_ok) without affecting any number.
"""
from __future__ import annotations

from typing import Sequence

from ..content.tokenizer import Token
from .models import SentenceVerdict, TokenVerdict, WordFeedback


def combined_accuracy(sentence_hit: bool, word_hits: int, truth_size: int, wrong_marks: int) -> float:
    """Correct decisions over (sentence decision + true biased words + wrong marks)."""
    return (int(sentence_hit) + word_hits) / (1 + truth_size + wrong_marks)


def score_word_submission(
    marks: frozenset[int],
    truth: frozenset[int],
    tokens: Sequence[Token],
    sentence_hit: bool | None,
) -> WordFeedback:
    """Per-token verdicts against a known ground truth.

    marks must already exclude stopword indices (enforced at submission).
    sentence_hit of None means the sentence verdict itself is not scored
    (word-only submissions); it then contributes 0 to combined accuracy.
    """
    verdicts: dict[int, TokenVerdict] = {}
    hits = wrong = 0
    for t in tokens:
        if t.is_stopword:
            continue
        if t.index in marks and t.index in truth:
            verdicts[t.index] = TokenVerdict.HIT
            hits += 1
        elif t.index in marks:
            verdicts[t.index] = TokenVerdict.WRONG
            wrong += 1
        elif t.index in truth:
            verdicts[t.index] = TokenVerdict.MISSED
        else:
            verdicts[t.index] = TokenVerdict.UNTOUCHED

    # display-only: a stopword flanked by ground-truth-biased tokens reads as right
    for t in tokens:
        if not t.is_stopword:
            continue
        prev_ok = (t.index - 1) in truth
        next_ok = (t.index + 1) in truth
        verdicts[t.index] = TokenVerdict.STOPWORD_ADJACENT_OK if (prev_ok and next_ok) else TokenVerdict.UNTOUCHED

    if sentence_hit is None:
        sv = SentenceVerdict.PENDING
        acc = combined_accuracy(False, hits, len(truth), wrong)
    else:
        sv = SentenceVerdict.HIT if sentence_hit else SentenceVerdict.MISS
        acc = combined_accuracy(sentence_hit, hits, len(truth), wrong)
    return WordFeedback(
        token_verdicts=verdicts,
        sentence_verdict=sv,
        combined_accuracy=acc,
        word_hits=hits,
        wrong_marks=wrong,
    )


def pending_word_feedback(marks: frozenset[int], tokens: Sequence[Token]) -> WordFeedback:
    """Delayed-feedback fragment: everything marked shows pending."""
    verdicts = {
        t.index: (TokenVerdict.PENDING if t.index in marks else TokenVerdict.UNTOUCHED)
        for t in tokens
    }
    return WordFeedback(
        token_verdicts=verdicts,
        sentence_verdict=SentenceVerdict.PENDING,
        combined_accuracy=None,
    )
