"""Synthetic study pool: baseline CSV rows plus new sentences with gold labels.

Texts are templated and unique; biased sentences carry one or two loaded
words that resolve cleanly to token indices. The generated composition keeps
the 2:1 biased:not-biased target within one sentence.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass

from ..content.models import SentenceLabel
from ..content.store import BASELINE_COLUMNS

_BIASED_ADJ = ["reckless", "disastrous", "radical", "shameless", "cynical", "absurd"]
_BIASED_VERB = ["wreck", "gut", "bulldoze", "strangle"]
_GROUPS = ["city council", "state agency", "school board", "transit authority", "park district"]
_LEANINGS = ["left", "center", "right"]
_OUTLETS = ["Daily Ledger", "Morning Wire", "Civic Times"]


@dataclass(frozen=True)
class NewSentenceSpec:
    text: str
    topic: str
    article_url: str
    outlet: str
    outlet_leaning: str
    gold_label: SentenceLabel
    gold_words: tuple[str, ...]


def _sentence_text(i: int, biased: bool) -> tuple[str, tuple[str, ...]]:
    group = _GROUPS[i % len(_GROUPS)]
    if biased:
        adj = _BIASED_ADJ[i % len(_BIASED_ADJ)]
        verb = _BIASED_VERB[i % len(_BIASED_VERB)]
        text = f"Report {i} warns that the {adj} plan from the {group} will {verb} local services."
        return text, (adj, verb)
    text = f"Report {i} notes that the plan from the {group} will change local services."
    return text, ()


def _is_biased(i: int, total: int) -> bool:
    # first 2/3 (rounded) biased; stable target ratio of 2:1
    return i < round(total * 2 / 3)


def baseline_topic_names(size: int, min_topics: int = 1) -> list[str]:
    n = max(1, min_topics, (size + 99) // 100)
    return [f"desk-{k + 1}" for k in range(n)]


def new_topic_names(size: int, min_topics: int = 1) -> list[str]:
    if size <= 0:
        return []
    n = max(1, min_topics, (size + 99) // 100)
    return [f"fresh-{k + 1}" for k in range(n)]


def generate_baseline_csv(size: int, min_topics: int = 1) -> str:
    """Baseline import CSV with the exact required header."""
    topics = baseline_topic_names(size, min_topics)
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(BASELINE_COLUMNS)
    for i in range(size):
        biased = _is_biased(i, size)
        text, words = _sentence_text(i, biased)
        writer.writerow([
            text,
            "biased" if biased else "not_biased",
            "|".join(words),
            _OUTLETS[i % len(_OUTLETS)],
            _LEANINGS[i % len(_LEANINGS)],
            topics[i % len(topics)],
            f"https://example.org/articles/{i}",
        ])
    return buf.getvalue()


def generate_new_sentences(size: int, start_index: int = 100_000, min_topics: int = 1) -> list[NewSentenceSpec]:
    topics = new_topic_names(size, min_topics)
    out = []
    for k in range(size):
        i = start_index + k
        biased = _is_biased(k, size)
        text, words = _sentence_text(i, biased)
        out.append(NewSentenceSpec(
            text=text,
            topic=topics[k % len(topics)],
            article_url=f"https://example.org/articles/{i}",
            outlet=_OUTLETS[k % len(_OUTLETS)],
            outlet_leaning=_LEANINGS[k % len(_LEANINGS)],
            gold_label=SentenceLabel.BIASED if biased else SentenceLabel.NOT_BIASED,
            gold_words=words,
        ))
    return out


def parse_pool_file(text: str) -> tuple[str, list[NewSentenceSpec]]:
    """Split a user pool CSV into a baseline CSV and new-sentence specs.

    Rows with a label are baseline; rows with an empty label become new
    sentences (their gold, if any, must come from a gold file).
    """
    reader = csv.DictReader(io.StringIO(text))
    baseline_buf = io.StringIO()
    writer = csv.writer(baseline_buf)
    writer.writerow(BASELINE_COLUMNS)
    new_rows: list[NewSentenceSpec] = []
    for row in reader:
        if row.get("label"):
            writer.writerow([row.get(c, "") for c in BASELINE_COLUMNS])
        else:
            new_rows.append(NewSentenceSpec(
                text=row["text"],
                topic=row.get("topic", "fresh-1"),
                article_url=row.get("article_url", ""),
                outlet=row.get("outlet", ""),
                outlet_leaning=row.get("outlet_leaning", "center"),
                gold_label=SentenceLabel.NOT_BIASED,
                gold_words=(),
            ))
    return baseline_buf.getvalue(), new_rows
