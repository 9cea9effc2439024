"""Fixed stopword list used for word-level scoring exclusions.

The shipped list holds ~130 English function words (articles, prepositions,
pronouns, auxiliaries, conjunctions). Matching is case-insensitive on the
token surface. A deployment can override the list with a plain UTF-8 file,
one lowercase word per line.
"""
from __future__ import annotations

from importlib import resources

_DEFAULT_FILE = "stopwords.txt"


def _load_default() -> frozenset[str]:
    text = resources.files("biasgame.content.data").joinpath(_DEFAULT_FILE).read_text("utf-8")
    return frozenset(w.strip() for w in text.splitlines() if w.strip())


DEFAULT_STOPWORDS = _load_default()


def load_stopwords(path) -> frozenset[str]:
    """Load an override list: one lowercase word per line, UTF-8."""
    with open(path, encoding="utf-8") as fh:
        words = frozenset(line.strip().lower() for line in fh if line.strip())
    return words


def is_stopword(surface: str, stopwords: frozenset[str] = DEFAULT_STOPWORDS) -> bool:
    """True iff the lowercased surface is on the stopword list."""
    return surface.lower() in stopwords
