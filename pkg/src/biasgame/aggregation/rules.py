"""Label-formation thresholds.

A sentence label forms by majority vote once five annotations exist; ties
stay pending. A word counts as biased when two players marked it while
fewer than eight annotations exist, or when at least a quarter of the
annotators marked it once eight or more exist. The two word rules agree
exactly at eight annotations.
"""
from __future__ import annotations

from ..content.models import SentenceLabel

SENTENCE_VOTE_THRESHOLD = 5
WORD_SMALL_POOL = 8
WORD_MIN_MARKS = 2
WORD_MARK_RATIO = 0.25


def compute_sentence_label(biased_votes: int, not_biased_votes: int) -> SentenceLabel | None:
    """Majority-vote sentence label; None while pending (below five or a draw)."""
    if biased_votes < 0 or not_biased_votes < 0:
        raise ValueError("vote counts must be non-negative")
    total = biased_votes + not_biased_votes
    if total < SENTENCE_VOTE_THRESHOLD or biased_votes == not_biased_votes:
        return None
    return SentenceLabel.BIASED if biased_votes > not_biased_votes else SentenceLabel.NOT_BIASED


def compute_word_label(mark_count: int, annotator_count: int) -> bool:
    """True iff the word counts as biased under the piecewise threshold."""
    if mark_count < 0 or annotator_count < 0:
        raise ValueError("counts must be non-negative")
    if annotator_count < WORD_SMALL_POOL:
        return mark_count >= WORD_MIN_MARKS
    return mark_count / annotator_count >= WORD_MARK_RATIO
